//! Experiment harness: growth tables, conjugator lengths and runtimes.

pub mod bench;
