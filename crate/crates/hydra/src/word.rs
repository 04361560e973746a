//! Words over a_1..a_m and s.
//!
//! A letter is a signed integer: `i` is a_i, `-i` is a_i^-1, and the reserved
//! value [`S`] (resp. `-S`) is the stable letter s (resp. s^-1).

use std::fmt;
use std::str::FromStr;

use crate::error::{domain, HydraError, Result};

pub type Letter = i32;

/// The stable letter s.
pub const S: Letter = i32::MAX;

#[inline]
pub fn a(i: u32) -> Letter {
    debug_assert!(i >= 1 && (i as i64) < S as i64);
    i as Letter
}

#[inline]
pub fn is_s(l: Letter) -> bool {
    l == S || l == -S
}

/// Subscript of an a-letter (0 for s).
#[inline]
pub fn index(l: Letter) -> u32 {
    if is_s(l) {
        0
    } else {
        l.unsigned_abs()
    }
}

/// A finite word. The same type carries reduced a-words (`FWord`), raw mixed
/// words (`RawWord`) and mixed input words (`HWord`); the aliases document
/// which invariant a function expects.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<Letter>);

pub type FWord = Word;
pub type RawWord = Word;
pub type HWord = Word;

impl Word {
    pub fn new(letters: Vec<Letter>) -> Word {
        Word(letters)
    }

    pub fn empty() -> Word {
        Word(Vec::new())
    }

    pub fn letter(l: Letter) -> Word {
        Word(vec![l])
    }

    /// Reduced word from raw letters.
    pub fn reduced_from(letters: &[Letter]) -> Word {
        let mut out = Vec::with_capacity(letters.len());
        push_reduce(&mut out, letters);
        Word(out)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn has_s(&self) -> bool {
        self.0.iter().any(|&l| is_s(l))
    }

    /// Largest a-index present (0 if none).
    pub fn max_index(&self) -> u32 {
        self.0.iter().map(|&l| index(l)).max().unwrap_or(0)
    }

    /// Exponent sum of s.
    pub fn s_exponent(&self) -> i64 {
        self.0
            .iter()
            .map(|&l| match l {
                S => 1,
                l if l == -S => -1,
                _ => 0,
            })
            .sum()
    }

    pub fn is_reduced(&self) -> bool {
        self.0.windows(2).all(|p| p[0] != -p[1])
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        self.is_reduced() && (self.0.len() < 2 || self.0[0] != -self.0[self.0.len() - 1])
    }

    /// Free reduction treating s like any other generator.
    pub fn reduced(&self) -> Word {
        Word::reduced_from(&self.0)
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|&l| -l).collect())
    }

    /// Concatenation without reduction.
    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// Product in the free group; reduces across the junction (and inside
    /// `other` if it is not reduced).
    pub fn mul(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        push_reduce(&mut v, &other.0);
        Word(v)
    }

    pub fn pow(&self, k: i64) -> Word {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut out = Vec::new();
        for _ in 0..k.unsigned_abs() {
            push_reduce(&mut out, &base.0);
        }
        Word(out)
    }

    pub fn slice(&self, start: usize, end: usize) -> Word {
        Word(self.0[start..end].to_vec())
    }

    pub fn prefix(&self, k: usize) -> Word {
        self.slice(0, k)
    }

    pub fn suffix(&self, k: usize) -> Word {
        self.slice(self.len() - k, self.len())
    }

    pub fn starts_with(&self, other: &Word) -> bool {
        self.0.starts_with(&other.0)
    }

    pub fn ends_with(&self, other: &Word) -> bool {
        self.0.ends_with(&other.0)
    }

    /// Position of the first occurrence of `pat` as a subword.
    pub fn find(&self, pat: &Word) -> Option<usize> {
        find_slice(&self.0, &pat.0)
    }

    pub fn contains(&self, pat: &Word) -> bool {
        self.find(pat).is_some()
    }

    /// Length of the longest common prefix.
    pub fn lcp_len(&self, other: &Word) -> usize {
        self.0.iter().zip(other.0.iter()).take_while(|(x, y)| x == y).count()
    }

    /// Rotation starting at position `k` (no reduction).
    pub fn rotate(&self, k: usize) -> Word {
        if self.is_empty() {
            return Word::empty();
        }
        let k = k % self.len();
        let mut v = Vec::with_capacity(self.len());
        v.extend_from_slice(&self.0[k..]);
        v.extend_from_slice(&self.0[..k]);
        Word(v)
    }

    /// All (start, end) subword positions ordered by start, then end.
    pub fn subword_positions(&self) -> impl Iterator<Item = (usize, usize)> {
        let n = self.len();
        (0..=n).flat_map(move |i| (i..=n).map(move |j| (i, j)))
    }

    /// All nonempty subwords, deduplicated, in canonical position order.
    pub fn distinct_subwords(&self) -> Vec<Word> {
        let mut seen = std::collections::HashSet::new();
        let mut out = Vec::new();
        for (i, j) in self.subword_positions() {
            if i < j {
                let w = self.slice(i, j);
                if seen.insert(w.clone()) {
                    out.push(w);
                }
            }
        }
        out
    }

    pub fn check_rank(&self, m: u32) -> Result<()> {
        let k = self.max_index();
        if k > m {
            return domain(format!("generator a{k} exceeds rank {m}"));
        }
        Ok(())
    }
}

/// Append `letters` to an already reduced stack, cancelling as we go.
pub(crate) fn push_reduce(out: &mut Vec<Letter>, letters: &[Letter]) {
    for &l in letters {
        if out.last() == Some(&-l) {
            out.pop();
        } else {
            out.push(l);
        }
    }
}

pub(crate) fn find_slice(hay: &[Letter], pat: &[Letter]) -> Option<usize> {
    if pat.is_empty() {
        return Some(0);
    }
    if pat.len() > hay.len() {
        return None;
    }
    hay.windows(pat.len()).position(|w| w == pat)
}

/// Free reduction of an a-word.
pub fn free_reduce(w: &RawWord) -> Result<FWord> {
    if w.has_s() {
        return domain("free_reduce: word contains s");
    }
    Ok(w.reduced())
}

pub fn invert(w: &FWord) -> FWord {
    w.inverse()
}

/// Returns `(core, y)` with `w = y core y^-1`, `core` cyclically reduced and
/// `y` a prefix of `w`.
pub fn cyclic_reduce(w: &FWord) -> (FWord, FWord) {
    let w = w.reduced();
    let v = w.letters();
    let n = v.len();
    let mut k = 0;
    while 2 * k + 1 < n && v[k] == -v[n - 1 - k] {
        k += 1;
    }
    (w.slice(k, n - k), w.prefix(k))
}

impl From<Vec<Letter>> for Word {
    fn from(v: Vec<Letter>) -> Self {
        Word(v)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "ε");
        }
        let mut i = 0;
        let mut first = true;
        while i < self.0.len() {
            let l = self.0[i];
            let mut j = i;
            while j < self.0.len() && self.0[j] == l {
                j += 1;
            }
            let run = (j - i) as i64;
            let exp = if l < 0 { -run } else { run };
            if !first {
                write!(f, " ")?;
            }
            first = false;
            if is_s(l) {
                write!(f, "s")?;
            } else {
                write!(f, "a{}", index(l))?;
            }
            if exp != 1 {
                write!(f, "^{exp}")?;
            }
            i = j;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{self}]")
    }
}

impl FromStr for Word {
    type Err = HydraError;
    fn from_str(s: &str) -> Result<Word> {
        parse_word(s)
    }
}

/// Parse a word in the token grammar: `a3`, `A3` (= a3^-1), `s`, `S`
/// (= s^-1), each optionally followed by `^n`. `ε` and `1` denote the
/// identity.
pub fn parse_word(src: &str) -> Result<Word> {
    let b = src.as_bytes();
    let mut pos = 0;
    let mut out = Vec::new();
    let err = |pos: usize, msg: &str| HydraError::Parse { pos, msg: msg.to_string() };
    let read_int = |pos: &mut usize, signed: bool| -> Result<i64> {
        let start = *pos;
        let mut neg = false;
        if signed && *pos < b.len() && (b[*pos] == b'-' || b[*pos] == b'+') {
            neg = b[*pos] == b'-';
            *pos += 1;
        }
        let ds = *pos;
        while *pos < b.len() && b[*pos].is_ascii_digit() {
            *pos += 1;
        }
        if ds == *pos {
            return Err(err(start, "expected digits"));
        }
        let v: i64 = src[ds..*pos].parse().map_err(|_| err(ds, "integer out of range"))?;
        Ok(if neg { -v } else { v })
    };
    while pos < b.len() {
        let c = b[pos];
        if c.is_ascii_whitespace() {
            pos += 1;
            continue;
        }
        if src[pos..].starts_with('ε') {
            pos += 'ε'.len_utf8();
            continue;
        }
        if c == b'1' {
            pos += 1;
            continue;
        }
        let tok_start = pos;
        let base: Letter = match c {
            b'a' | b'A' => {
                pos += 1;
                let i = read_int(&mut pos, false)?;
                if i < 1 || i >= S as i64 {
                    return Err(err(tok_start, "generator index must be at least 1"));
                }
                if c == b'a' {
                    i as Letter
                } else {
                    -(i as Letter)
                }
            }
            b's' => {
                pos += 1;
                S
            }
            b'S' => {
                pos += 1;
                -S
            }
            _ => return Err(err(pos, "expected a generator (a<k>, A<k>, s, S)")),
        };
        let mut exp = 1i64;
        if pos < b.len() && b[pos] == b'^' {
            pos += 1;
            exp = read_int(&mut pos, true)?;
        }
        let l = if exp < 0 { -base } else { base };
        for _ in 0..exp.unsigned_abs() {
            out.push(l);
        }
    }
    Ok(Word(out))
}

/// Parse and check that all indices are at most `m`.
pub fn parse_word_rank(src: &str, m: u32) -> Result<Word> {
    let w = parse_word(src)?;
    w.check_rank(m)?;
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        parse_word(s).unwrap()
    }

    #[test]
    fn reduce_examples() {
        assert_eq!(free_reduce(&w("a2 a1 A1")).unwrap(), w("a2"));
        assert_eq!(free_reduce(&w("")).unwrap(), Word::empty());
        assert_eq!(free_reduce(&w("a3 a2 A2 A3 a1")).unwrap(), w("a1"));
        assert!(free_reduce(&w("a1 s")).is_err());
    }

    #[test]
    fn invert_examples() {
        assert_eq!(invert(&w("a1 a2")), w("A2 A1"));
        assert_eq!(invert(&Word::empty()), Word::empty());
        assert_eq!(invert(&w("a2 A1")), w("a1 A2"));
    }

    #[test]
    fn cyclic_examples() {
        assert_eq!(cyclic_reduce(&w("A1 a2 a1")), (w("a2"), w("A1")));
        assert_eq!(cyclic_reduce(&w("a2 a1")), (w("a2 a1"), Word::empty()));
        let (core, y) = cyclic_reduce(&w("A1 A3 a2 a3 a1"));
        assert_eq!(core, w("a2"));
        assert_eq!(y, w("A1 A3"));
        assert_eq!(y.inverse().mul(&w("A1 A3 a2 a3 a1")).mul(&y), core);
    }

    #[test]
    fn parse_and_print() {
        assert_eq!(w("a3^-1 s^2"), Word::new(vec![-3, S, S]));
        assert_eq!(w("A3 s s"), w("a3^-1 s^2"));
        assert_eq!(w("S^2"), w("s^-2"));
        assert_eq!(w("A2^-2"), w("a2^2"));
        assert_eq!(format!("{}", w("A3 s s")), "a3^-1 s^2");
        assert_eq!(format!("{}", Word::empty()), "ε");
        assert_eq!(w("ε"), Word::empty());
        assert!(parse_word("a0").is_err());
        assert!(parse_word("b2").is_err());
        assert!(parse_word("a2^").is_err());
        assert!(parse_word_rank("a4", 3).is_err());
    }

    #[test]
    fn print_parse_roundtrip() {
        for s in ["a1 a1 A2 s S a3", "s^-3 a6^4 A1", "a10 a2"] {
            let x = w(s);
            assert_eq!(w(&x.to_string()), x);
        }
    }
}
