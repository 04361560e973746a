//! Brute-force ground truth: shortlex conjugator search in H and exhaustive
//! search for twisted equations in F. Exponential by design.

use std::collections::HashMap;

use crate::automorphism::{phi, PhiPow};
use crate::group::{check_conjugation, HElem};
use crate::word::{FWord, HWord, Letter, Word, S};

/// Alphabet in enumeration order: a1, A1, ..., am, Am, then s, S if wanted.
pub fn alphabet(m: u32, with_s: bool) -> Vec<Letter> {
    let mut v = Vec::new();
    for i in 1..=m as Letter {
        v.push(i);
        v.push(-i);
    }
    if with_s {
        v.push(S);
        v.push(-S);
    }
    v
}

/// All freely reduced words of length exactly `len`, given those of length
/// `len - 1` in shortlex order.
fn extend_level(prev: &[Vec<Letter>], alpha: &[Letter]) -> Vec<Vec<Letter>> {
    let mut out = Vec::with_capacity(prev.len() * alpha.len());
    for w in prev {
        for &l in alpha {
            if w.last() == Some(&-l) {
                continue;
            }
            let mut x = w.clone();
            x.push(l);
            out.push(x);
        }
    }
    out
}

/// Freely reduced words of length <= max_len in shortlex order.
pub fn shortlex_words(alpha: &[Letter], max_len: usize) -> Vec<Word> {
    let mut all = vec![Word::empty()];
    let mut level: Vec<Vec<Letter>> = vec![Vec::new()];
    for _ in 0..max_len {
        level = extend_level(&level, alpha);
        all.extend(level.iter().cloned().map(Word::new));
    }
    all
}

/// First w (shortlex, length <= max_len, over a1..am, s) with u w = w v.
pub fn oracle_conjugate(u: &HElem, v: &HElem, m: u32, max_len: usize) -> Option<HWord> {
    if u.s_exp != v.s_exp {
        return None;
    }
    let alpha = alphabet(m, true);
    let mut level: Vec<Vec<Letter>> = vec![Vec::new()];
    for len in 0..=max_len {
        if len > 0 {
            level = extend_level(&level, &alpha);
        }
        for w in &level {
            let w = Word::new(w.clone());
            if check_conjugation(u, &crate::group::normal_form(&w), v) {
                return Some(w);
            }
        }
    }
    None
}

/// The r values the twisted oracle tries, in order.
pub fn oracle_r_values(p: i64, r_range: i64) -> Vec<i64> {
    if p > 0 {
        (0..p).collect()
    } else {
        std::iter::once(0).chain((1..=r_range).flat_map(|k| [-k, k])).collect()
    }
}

/// First (r, w̃) with ũ φ^-p(w̃) = w̃ φ^-r(ṽ), by r then shortlex w̃. Plain
/// nested loops.
pub fn oracle_twisted(u: &FWord, v: &FWord, p: i64, r_range: i64, w_len: usize, m: u32) -> Option<(i64, FWord)> {
    let words = shortlex_words(&alphabet(m, false), w_len);
    let u = u.reduced();
    for r in oracle_r_values(p, r_range) {
        let vr = phi(v, -r);
        for w in &words {
            if u.mul(&phi(w, -p)) == w.mul(&vr) {
                return Some((r, w.clone()));
            }
        }
    }
    None
}

/// For a fixed (ũ, p): every reduced w̃^-1 ũ φ^-p(w̃) with |w̃| <= w_len,
/// mapped to its shortlex-first w̃.
pub struct TwistedTable {
    p: i64,
    table: HashMap<FWord, FWord>,
}

impl TwistedTable {
    pub fn new(u: &FWord, p: i64, w_len: usize, m: u32) -> TwistedTable {
        let psi = PhiPow::new(m.max(u.max_index()), -p);
        let u = u.reduced();
        let mut table = HashMap::new();
        for w in shortlex_words(&alphabet(m, false), w_len) {
            let t = w.inverse().mul(&u).mul(&psi.apply_word(&w));
            table.entry(t).or_insert(w);
        }
        TwistedTable { p, table }
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    /// Same answer as [`oracle_twisted`] for this table's ũ, p and caps.
    pub fn lookup(&self, v: &FWord, r_range: i64) -> Option<(i64, FWord)> {
        oracle_r_values(self.p, r_range).into_iter().find_map(|r| {
            let t = phi(v, -r);
            self.table.get(&t).map(|w| (r, w.clone()))
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::normal_form;
    use crate::word::parse_word;

    fn w(s: &str) -> Word {
        parse_word(s).unwrap()
    }

    #[test]
    fn conjugate_oracle_examples() {
        let g = normal_form(&w("a2 s A1"));
        assert_eq!(oracle_conjugate(&g, &g, 3, 0), Some(Word::empty()));
        let u = HElem::new(w("a2"), 1);
        let v = HElem::new(w("a2 a1"), 1);
        assert_eq!(oracle_conjugate(&u, &v, 2, 1), Some(w("s")));
        assert_eq!(oracle_conjugate(&HElem::new(w("a2"), 0), &HElem::new(w("a3"), 0), 3, 4), None);
    }

    #[test]
    fn twisted_oracle_examples() {
        assert_eq!(oracle_twisted(&w("a2 a1"), &w("a2"), 0, 3, 0, 2), Some((-1, Word::empty())));
        assert_eq!(oracle_twisted(&w("a3 A1"), &w("a3 A1"), 0, 0, 0, 3), Some((0, Word::empty())));
        assert_eq!(oracle_twisted(&w("a2"), &w("a3"), 0, 5, 4, 3), None);
    }

    #[test]
    fn table_matches_loops() {
        for (u, p) in [("a2", 1), ("a3 A1", 2), ("a1 a2", 0)] {
            let t = TwistedTable::new(&w(u), p, 3, 3);
            for v in shortlex_words(&alphabet(3, false), 2) {
                assert_eq!(t.lookup(&v, 4), oracle_twisted(&w(u), &v, p, 4, 3, 3));
            }
        }
    }

    #[test]
    fn shortlex_counts() {
        let ws = shortlex_words(&alphabet(2, false), 3);
        assert_eq!(ws.len(), 1 + 4 + 12 + 36);
        assert!(ws.windows(2).all(|p| p[0].len() <= p[1].len()));
    }
}
