#![allow(dead_code)]

use hydra::{Letter, Word, S};
use proptest::prelude::*;

pub fn w(s: &str) -> Word {
    hydra::parse_word(s).unwrap()
}

pub fn a_letter(m: u32) -> impl Strategy<Value = Letter> {
    (1..=m as Letter, any::<bool>()).prop_map(|(i, pos)| if pos { i } else { -i })
}

/// Possibly unreduced a-word.
pub fn raw_word(m: u32, max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(a_letter(m), 0..=max_len).prop_map(Word::new)
}

pub fn reduced_word(m: u32, max_len: usize) -> impl Strategy<Value = Word> {
    raw_word(m, max_len).prop_map(|w| w.reduced())
}

/// Mixed word over a1..am and s.
pub fn mixed_word(m: u32, max_len: usize) -> impl Strategy<Value = Word> {
    let l = (0..=m as Letter, any::<bool>()).prop_map(|(i, pos)| {
        let l = if i == 0 { S } else { i };
        if pos {
            l
        } else {
            -l
        }
    });
    prop::collection::vec(l, 0..=max_len).prop_map(Word::new)
}

/// Every reduced a-word of length <= n over a1..am.
pub fn all_words(m: u32, n: usize) -> Vec<Word> {
    hydra::oracle::shortlex_words(&hydra::oracle::alphabet(m, false), n)
}
