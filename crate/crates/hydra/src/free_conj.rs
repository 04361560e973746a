//! Conjugacy in the free group F.

use crate::error::{domain, Result};
use crate::word::{cyclic_reduce, FWord};

/// A witness w with u w = w v in F, or `None`. The witness is a prefix of
/// u^-1 followed by a suffix of v; among matching rotations the smallest
/// offset wins.
pub fn conjugate_in_f(u: &FWord, v: &FWord) -> Option<FWord> {
    let (cu, yu) = cyclic_reduce(u);
    let (cv, yv) = cyclic_reduce(v);
    if cu.len() != cv.len() {
        return None;
    }
    let k = rotation_offset(&cu, &cv)?;
    // cu = A B, cv = B A = A^-1 cu A
    Some(yu.mul(&cu.prefix(k)).mul(&yv.inverse()))
}

/// Smallest k with rotate(cu, k) == cv.
pub fn rotation_offset(cu: &FWord, cv: &FWord) -> Option<usize> {
    let n = cu.len();
    if n != cv.len() {
        return None;
    }
    if n == 0 {
        return Some(0);
    }
    let a = cu.letters();
    let b = cv.letters();
    (0..n).find(|&k| a[k..] == b[..n - k] && a[..k] == b[n - k..])
}

/// True iff u and v are conjugate in F.
pub fn is_conjugate_in_f(u: &FWord, v: &FWord) -> bool {
    conjugate_in_f(u, v).is_some()
}

/// (u0, k) with u0^k = u and k maximal.
pub fn max_root(u: &FWord) -> Result<(FWord, u64)> {
    let u = u.reduced();
    if u.is_empty() {
        return domain("max_root of the empty word");
    }
    let (core, y) = cyclic_reduce(&u);
    let n = core.len();
    let per = (1..=n).find(|&p| n % p == 0 && core.rotate(p) == core).unwrap_or(n);
    let root = y.mul(&core.prefix(per)).mul(&y.inverse());
    Ok((root, (n / per) as u64))
}

/// Length of the cyclic reduction.
pub fn cyclic_length(w: &FWord) -> usize {
    cyclic_reduce(w).0.len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::{parse_word, Word};

    fn check(u: &Word, w: &Word, v: &Word) -> bool {
        u.mul(w) == w.mul(v)
    }

    fn w(s: &str) -> Word {
        parse_word(s).unwrap()
    }

    #[test]
    fn conjugate_examples() {
        assert_eq!(conjugate_in_f(&w("a1 a2"), &w("a2 a1")), Some(w("a1")));
        assert_eq!(conjugate_in_f(&w("a2"), &w("a3")), None);
        let x = conjugate_in_f(&w("A1 a2 a1"), &w("a2")).unwrap();
        assert_eq!(x, w("A1"));
        assert!(check(&w("A1 a2 a1"), &x, &w("a2")));
        assert_eq!(conjugate_in_f(&Word::empty(), &Word::empty()), Some(Word::empty()));
    }

    #[test]
    fn root_examples() {
        assert_eq!(max_root(&w("a1 a2 a1 a2 a1 a2")).unwrap(), (w("a1 a2"), 3));
        assert_eq!(max_root(&w("a3")).unwrap(), (w("a3"), 1));
        assert_eq!(max_root(&w("A1 a2^4 a1")).unwrap(), (w("A1 a2 a1"), 4));
        assert!(max_root(&Word::empty()).is_err());
    }
}
