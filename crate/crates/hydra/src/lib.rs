//! Conjugacy in hydra groups H_m = F(a_1, ..., a_m) ⋊ <s>.

pub mod automorphism;
pub mod engine;
pub mod error;
pub mod free_conj;
pub mod group;
pub mod hnn;
pub mod oracle;
pub mod pieces;
pub mod twisted;
pub mod word;

pub use automorphism::{apply_phi_power, phi, phi_letter_closed_form, PhiPow};
pub use engine::{decide_conjugacy, Certificate};
pub use error::{HydraError, Result};
pub use group::{check_conjugation, normal_form, HElem};
pub use pieces::{decompose, rank, shared_prefix_shape, Piece, PieceDecomposition, PieceType, PrefixShape};
pub use word::{cyclic_reduce, free_reduce, invert, parse_word, parse_word_rank, FWord, HWord, Letter, RawWord, Word, S};
pub use twisted::{BoundPolicy, Method};
