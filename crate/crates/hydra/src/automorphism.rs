//! The automorphism phi(a_i) = a_i a_{i-1}, phi(a_1) = a_1, and its powers.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock};

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use parking_lot::RwLock;

use crate::error::{domain, HydraError, Result};
use crate::word::{index, is_s, push_reduce, FWord, Letter, Word};

/// Default cap on letters of intermediate material for budgeted calls.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// Memo table (i, r) -> phi^r(a_i). Inserts are idempotent, so concurrent
/// fill-or-read needs only the lock.
pub struct PhiPowerCache {
    table: RwLock<HashMap<(u32, i64), Arc<Vec<Letter>>>>,
}

impl PhiPowerCache {
    pub fn global() -> &'static PhiPowerCache {
        static CACHE: OnceLock<PhiPowerCache> = OnceLock::new();
        CACHE.get_or_init(|| PhiPowerCache { table: RwLock::new(HashMap::new()) })
    }

    pub fn len(&self) -> usize {
        self.table.read().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// phi^r(a_i) as a reduced word.
    pub fn get(&self, i: u32, r: i64) -> Arc<Vec<Letter>> {
        assert!(i >= 1, "generator index must be positive");
        if i == 1 || r == 0 {
            return Arc::new(vec![i as Letter]);
        }
        if let Some(v) = self.table.read().get(&(i, r)) {
            return v.clone();
        }
        let v = Arc::new(self.build(i, r));
        self.table.write().entry((i, r)).or_insert(v).clone()
    }

    // Closed forms: the pieces concatenate without cancellation.
    fn build(&self, i: u32, r: i64) -> Vec<Letter> {
        let mut out = vec![i as Letter];
        if r > 0 {
            for j in 0..r {
                out.extend_from_slice(&self.get(i - 1, j));
            }
        } else {
            for j in 1..=(-r) {
                let img = self.get(i - 1, -j);
                out.extend(img.iter().rev().map(|&l| -l));
            }
        }
        out
    }
}

/// phi^r applied to a single letter (a-letters only).
pub fn letter_power_image(l: Letter, r: i64) -> Vec<Letter> {
    debug_assert!(!is_s(l));
    let img = PhiPowerCache::global().get(index(l), r);
    if l > 0 {
        img.to_vec()
    } else {
        img.iter().rev().map(|&x| -x).collect()
    }
}

/// Letter images of phi^r for generators 1..=m, for repeated application.
#[derive(Clone)]
pub struct PhiPow {
    r: i64,
    pos: Vec<Arc<Vec<Letter>>>,
    neg: Vec<Vec<Letter>>,
}

impl PhiPow {
    pub fn new(m: u32, r: i64) -> PhiPow {
        let cache = PhiPowerCache::global();
        let mut pos = vec![Arc::new(Vec::new())];
        let mut neg = vec![Vec::new()];
        for i in 1..=m {
            let img = cache.get(i, r);
            neg.push(img.iter().rev().map(|&x| -x).collect());
            pos.push(img);
        }
        PhiPow { r, pos, neg }
    }

    pub fn power(&self) -> i64 {
        self.r
    }

    pub fn rank(&self) -> u32 {
        (self.pos.len() - 1) as u32
    }

    pub fn image_of(&self, l: Letter) -> &[Letter] {
        let i = l.unsigned_abs() as usize;
        if l > 0 {
            &self.pos[i]
        } else {
            &self.neg[i]
        }
    }

    pub fn apply(&self, w: &[Letter]) -> Word {
        if self.r == 0 {
            return Word::reduced_from(w);
        }
        let mut out = Vec::with_capacity(w.len() * 2);
        for &l in w {
            if l.unsigned_abs() as usize >= self.pos.len() {
                push_reduce(&mut out, &letter_power_image(l, self.r));
            } else {
                push_reduce(&mut out, self.image_of(l));
            }
        }
        Word::new(out)
    }

    pub fn apply_word(&self, w: &Word) -> Word {
        self.apply(w.letters())
    }
}

/// phi^r(w), reduced. Unbudgeted: intended for callers that already bound |r|.
pub fn phi(w: &FWord, r: i64) -> FWord {
    if r == 0 {
        return w.reduced();
    }
    let mut out = Vec::with_capacity(w.len() * 2);
    for &l in w.letters() {
        push_reduce(&mut out, &letter_power_image(l, r));
    }
    Word::new(out)
}

/// Total length of the letterwise image of `w` under phi^r before reduction.
pub fn image_material(w: &FWord, r: i64) -> Result<u64> {
    let mut total: u64 = 0;
    let mut per_index: HashMap<u32, u64> = HashMap::new();
    for &l in w.letters() {
        let i = index(l);
        let len = match per_index.get(&i) {
            Some(&x) => x,
            None => {
                let x = letter_image_length(i, r)?;
                per_index.insert(i, x);
                x
            }
        };
        total = total.checked_add(len).ok_or(HydraError::Resource { needed: u64::MAX, budget: u64::MAX })?;
    }
    Ok(total)
}

/// phi^r(w) with the default resource budget.
pub fn apply_phi_power(w: &FWord, r: i64) -> Result<FWord> {
    apply_phi_power_budget(w, r, DEFAULT_BUDGET)
}

pub fn apply_phi_power_budget(w: &FWord, r: i64, budget: u64) -> Result<FWord> {
    if w.has_s() {
        return domain("apply_phi_power: word contains s");
    }
    let needed = image_material(w, r)?;
    if needed > budget {
        return Err(HydraError::Resource { needed, budget });
    }
    Ok(phi(w, r))
}

/// The closed form of phi^r(a_i), built as a concatenation of lower-rank
/// images. Requires i >= 2 and r != 0.
pub fn phi_letter_closed_form(i: u32, r: i64) -> Result<FWord> {
    if i < 2 {
        return domain("closed form needs i >= 2");
    }
    if r == 0 {
        return domain("closed form needs r != 0");
    }
    let needed = letter_image_length(i, r)?;
    if needed > DEFAULT_BUDGET {
        return Err(HydraError::Resource { needed, budget: DEFAULT_BUDGET });
    }
    let mut out = vec![i as Letter];
    if r > 0 {
        for j in 0..r {
            out.extend(letter_power_image(i as Letter - 1, j));
        }
    } else {
        for j in 1..=(-r) {
            out.extend(letter_power_image(-(i as Letter - 1), -j));
        }
    }
    Ok(Word::new(out))
}

fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for t in 0..k {
        acc *= BigUint::from(n - t);
        acc /= BigUint::from(t + 1);
    }
    acc
}

/// |phi^r(a_i)| from the binomial sums, without building the word.
pub fn letter_image_length(i: u32, r: i64) -> Result<u64> {
    if i == 0 {
        return domain("generator index must be positive");
    }
    let mut total = BigUint::zero();
    let a = r.unsigned_abs();
    for j in 0..i as u64 {
        total += if r >= 0 { binomial(a, j) } else if j == 0 { BigUint::one() } else { binomial(a + j - 1, j) };
    }
    total.to_u64().ok_or(HydraError::Resource { needed: u64::MAX, budget: u64::MAX })
}

/// True iff phi(w) = w.
pub fn is_fixed(w: &FWord) -> bool {
    let w = w.reduced();
    phi(&w, 1) == w
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::parse_word;

    fn w(s: &str) -> Word {
        parse_word(s).unwrap()
    }

    #[test]
    fn phi_examples() {
        assert_eq!(apply_phi_power(&w("a3"), 1).unwrap(), w("a3 a2"));
        assert_eq!(apply_phi_power(&w("a4"), -1).unwrap(), w("a4 a2 A1 A3"));
        assert_eq!(apply_phi_power(&w("a3"), 2).unwrap(), w("a3 a2 a2 a1"));
        assert_eq!(phi(&w("a3"), -1), w("a3 a1 A2"));
        assert_eq!(phi(&w("a5"), -1), w("a5 a3 a1 A2 A4"));
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(phi_letter_closed_form(3, 2).unwrap(), w("a3 a2 a2 a1"));
        assert_eq!(phi_letter_closed_form(2, -3).unwrap(), w("a2 a1^-3"));
        assert_eq!(phi(&w("a2 a1^-3"), 3), w("a2"));
        assert_eq!(phi_letter_closed_form(4, -1).unwrap(), w("a4 a2 A1 A3"));
        assert!(phi_letter_closed_form(1, 2).is_err());
        assert!(phi_letter_closed_form(3, 0).is_err());
    }

    #[test]
    fn length_examples() {
        assert_eq!(letter_image_length(3, 3).unwrap(), 7);
        assert_eq!(letter_image_length(1, 17).unwrap(), 1);
        assert_eq!(letter_image_length(3, -2).unwrap(), 6);
        assert_eq!(phi(&w("a3"), -2).len(), 6);
    }

    #[test]
    fn fixed_examples() {
        assert!(is_fixed(&w("a2 a1 A2")));
        assert!(!is_fixed(&w("a3")));
        assert!(is_fixed(&w("a1^5 a2 A1 A2")));
    }

    #[test]
    fn budget_is_enforced() {
        let e = apply_phi_power_budget(&w("a6"), 200, 1000);
        assert!(matches!(e, Err(HydraError::Resource { .. })));
    }

    #[test]
    fn phipow_matches_phi() {
        let x = w("a3 A2 a1 a4 A3 a2");
        for r in -4..=4 {
            assert_eq!(PhiPow::new(4, r).apply_word(&x), phi(&x, r));
        }
    }
}
