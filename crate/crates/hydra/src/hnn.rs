//! H_{j+1} as an HNN extension of H_j with stable letter t = a_{j+1}:
//! t^-1 s t = β with β = s a_j^-1 (β = s when j = 0). Conjugacy by
//! Collins' lemma, recursing on the level.

use crate::automorphism::{is_fixed, phi};
use crate::engine::Certificate;
use crate::error::{domain, Result};
use crate::group::{h_inv, h_mul, h_pow, normal_form, HElem};
use crate::twisted::Method;
use crate::word::{index, FWord, HWord, Letter, Word, S};

/// g0 t^e1 g1 ... t^en gn with every g in H_level and t = a_{level+1}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HnnLevelWord {
    pub level: u32,
    pub bases: Vec<HElem>,
    pub stable: Vec<i8>,
}

/// β = s a_j^-1 in H_j.
pub fn beta(j: u32) -> HElem {
    if j == 0 {
        HElem::s_power(1)
    } else {
        normal_form(&Word::new(vec![S, -(j as Letter)]))
    }
}

fn stable_elem(level: u32, e: i8) -> HElem {
    let t = (level + 1) as Letter;
    HElem::from_fword(&Word::letter(if e > 0 { t } else { -t }))
}

impl HnnLevelWord {
    /// Split a word of rank <= level + 1 at its stable letters.
    pub fn from_word(w: &HWord, level: u32) -> Result<HnnLevelWord> {
        w.check_rank(level + 1)?;
        let t = level + 1;
        let mut bases = Vec::new();
        let mut stable = Vec::new();
        let mut cur: Vec<Letter> = Vec::new();
        for &l in w.letters() {
            if l != S && l != -S && index(l) == t {
                bases.push(normal_form(&Word::new(std::mem::take(&mut cur))));
                stable.push(if l > 0 { 1 } else { -1 });
            } else {
                cur.push(l);
            }
        }
        bases.push(normal_form(&Word::new(cur)));
        Ok(HnnLevelWord { level, bases, stable })
    }

    pub fn base(level: u32, g: HElem) -> HnnLevelWord {
        HnnLevelWord { level, bases: vec![g], stable: Vec::new() }
    }

    pub fn t_length(&self) -> usize {
        self.stable.len()
    }

    pub fn to_word(&self) -> HWord {
        let t = (self.level + 1) as Letter;
        let mut v = self.bases[0].to_word().into_letters();
        for (e, g) in self.stable.iter().zip(&self.bases[1..]) {
            v.push(if *e > 0 { t } else { -t });
            v.extend_from_slice(g.to_word().letters());
        }
        Word::new(v)
    }

    pub fn to_elem(&self) -> HElem {
        normal_form(&self.to_word())
    }

    /// No t^e g t^-e with g in the associated subgroup for that side.
    pub fn is_pinch_free(&self) -> bool {
        (1..self.stable.len()).all(|k| {
            self.stable[k - 1] != -self.stable[k] || pinch_image(self.level, self.stable[k - 1], &self.bases[k]).is_none()
        })
    }

    /// U U is pinch-free.
    pub fn is_cyclically_pinch_free(&self) -> bool {
        let w = self.to_word();
        HnnLevelWord::from_word(&w.concat(&w), self.level).expect("same level").is_pinch_free()
    }
}

/// For t^e g t^-e: the base element it equals, if g lies in the right
/// subgroup (⟨s⟩ when e = -1, ⟨β⟩ when e = 1).
fn pinch_image(level: u32, e: i8, g: &HElem) -> Option<HElem> {
    let n = g.s_exp;
    if e < 0 {
        g.u_tilde.is_empty().then(|| h_pow(&beta(level), n))
    } else {
        (*g == h_pow(&beta(level), n)).then(|| HElem::s_power(n))
    }
}

/// Remove pinches until none is left.
pub fn pinch_reduce(w: &HnnLevelWord) -> HnnLevelWord {
    let mut bases = vec![w.bases[0].clone()];
    let mut stable: Vec<i8> = Vec::new();
    for (&e, g) in w.stable.iter().zip(&w.bases[1..]) {
        if let Some(&prev) = stable.last() {
            if prev == -e {
                if let Some(img) = pinch_image(w.level, prev, bases.last().expect("nonempty")) {
                    stable.pop();
                    bases.pop();
                    let before = bases.pop().expect("nonempty");
                    bases.push(h_mul(&h_mul(&before, &img), g));
                    continue;
                }
            }
        }
        stable.push(e);
        bases.push(g.clone());
    }
    HnnLevelWord { level: w.level, bases, stable }
}

/// Cyclically reduced form U and c with c^-1 w c = U.
pub fn hnn_cyclic_reduce(w: &HnnLevelWord) -> (HnnLevelWord, HElem) {
    let level = w.level;
    let mut x = pinch_reduce(w);
    let mut c = HElem::identity();
    loop {
        if x.stable.is_empty() {
            return (x, c);
        }
        // conjugate by g0
        let g0 = x.bases[0].clone();
        c = h_mul(&c, &g0);
        let n = x.bases.len();
        x.bases[n - 1] = h_mul(&x.bases[n - 1], &g0);
        x.bases[0] = HElem::identity();
        let (e1, en) = (x.stable[0], *x.stable.last().expect("nonempty"));
        let wrap = if en == -e1 { pinch_image(level, en, &x.bases[n - 1]) } else { None };
        let Some(img) = wrap else { return (x, c) };
        // conjugate by t^e1: g1 t^e2 ... t^en gn t^e1, whose tail is a pinch
        c = h_mul(&c, &stable_elem(level, e1));
        let mut bases = x.bases[1..n - 1].to_vec();
        let last = bases.pop().expect("n >= 2");
        bases.push(h_mul(&last, &img));
        let stable = x.stable[1..x.stable.len() - 1].to_vec();
        x = pinch_reduce(&HnnLevelWord { level, bases, stable });
    }
}

/// Pinch-free and cyclically reduced form of w.
pub fn hnn_reduce(w: &HnnLevelWord) -> HnnLevelWord {
    hnn_cyclic_reduce(w).0
}

enum Dec {
    Yes(HElem),
    No,
    Unknown,
}

fn abelian(w: &FWord, m: usize) -> Vec<i64> {
    let mut v = vec![0i64; m + 1];
    for &l in w.letters() {
        v[index(l) as usize] += l.signum() as i64;
    }
    v
}

/// q with φ^q(x) = y: exact when the abelianization pins q down or x is
/// fixed, otherwise a scan over |q| <= bound.
fn phi_exponent(x: &FWord, y: &FWord, bound: i64) -> Option<Option<i64>> {
    if x == y {
        return Some(Some(0));
    }
    if is_fixed(x) {
        return Some(None);
    }
    let m = x.max_index().max(y.max_index()) as usize;
    let (ax, ay) = (abelian(x, m), abelian(y, m));
    if let Some(k) = (2..=m).rev().find(|&k| ax[k] != 0) {
        let d = ay[k - 1] - ax[k - 1];
        if d % ax[k] != 0 {
            return Some(None);
        }
        let q = d / ax[k];
        return Some((phi(x, q) == *y).then_some(q));
    }
    for q in (1..=bound).flat_map(|k| [k, -k]) {
        if phi(x, q) == *y {
            return Some(Some(q));
        }
    }
    None
}

/// Conjugacy of u and v in H_j (both of rank <= j). Yes carries g with
/// g^-1 u g = v.
fn decide(u: &HElem, v: &HElem, j: u32, bound: i64) -> Dec {
    if u.s_exp != v.s_exp {
        return Dec::No;
    }
    if u == v {
        return Dec::Yes(HElem::identity());
    }
    if j == 0 {
        return Dec::No;
    }
    let level = j - 1;
    let wu = HnnLevelWord::from_word(&u.to_word(), level).expect("rank checked");
    let wv = HnnLevelWord::from_word(&v.to_word(), level).expect("rank checked");
    let (ru, cu) = hnn_cyclic_reduce(&wu);
    let (rv, cv) = hnn_cyclic_reduce(&wv);
    if ru.t_length() != rv.t_length() {
        return Dec::No;
    }
    let inner = if ru.t_length() == 0 { base_case(&ru.bases[0], &rv.bases[0], level, bound) } else { collins(&ru, &rv, bound) };
    match inner {
        // cu^-1 u cu = ru, g^-1 ru g = rv, cv^-1 v cv = rv
        Dec::Yes(g) => Dec::Yes(h_mul(&h_mul(&cu, &g), &h_inv(&cv))),
        d => d,
    }
}

/// Both in the base H_level.
fn base_case(gu: &HElem, gv: &HElem, level: u32, bound: i64) -> Dec {
    let mut unknown = false;
    match decide(gu, gv, level, bound) {
        Dec::Yes(g) => return Dec::Yes(g),
        Dec::Unknown => unknown = true,
        Dec::No => {}
    }
    let n = gu.s_exp;
    let targets = [HElem::s_power(n), h_pow(&beta(level), n)];
    let mut into = |g: &HElem| -> [Option<HElem>; 2] {
        targets.clone().map(|x| match decide(g, &x, level, bound) {
            Dec::Yes(c) => Some(c),
            Dec::Unknown => {
                unknown = true;
                None
            }
            Dec::No => None,
        })
    };
    let (cu, cv) = (into(gu), into(gv));
    // t^-1 s^n t = β^n
    let t = stable_elem(level, 1);
    if let (Some(g), Some(h)) = (&cu[0], &cv[1]) {
        return Dec::Yes(h_mul(&h_mul(g, &t), &h_inv(h)));
    }
    if let (Some(g), Some(h)) = (&cu[1], &cv[0]) {
        return Dec::Yes(h_mul(&h_mul(g, &h_inv(&t)), &h_inv(h)));
    }
    if unknown {
        Dec::Unknown
    } else {
        Dec::No
    }
}

/// Both cyclically reduced with equal positive t-length. With u' the
/// cyclic permutation of u ending in its last stable letter: u' = z^-1 v* z
/// for a cyclic permutation v* of v ending in a stable letter and z in ⟨s⟩
/// or ⟨β⟩.
fn collins(u: &HnnLevelWord, v: &HnnLevelWord, bound: i64) -> Dec {
    let level = u.level;
    // rotate u to end in its last stable letter: u' = Pu^-1 u Pu
    let mut pu = u.bases[0].clone();
    for (k, &e) in u.stable.iter().enumerate() {
        if k > 0 {
            pu = h_mul(&pu, &u.bases[k]);
        }
        pu = h_mul(&pu, &stable_elem(level, e));
    }
    let u0 = u.to_elem();
    let ue = h_mul(&h_mul(&h_inv(&pu), &u0), &pu);
    let t = stable_elem(level, 1);
    let (tu, ti) = (h_mul(&h_mul(&t, &ue), &h_inv(&t)), h_inv(&t));
    let n = v.t_length();
    let mut unknown = false;
    // v = P Q with P = g0 t^e1 g1 ... t^ek, v* = Q P = P^-1 v P
    let mut p = v.bases[0].clone();
    let ve = v.to_elem();
    for k in 0..n {
        p = h_mul(&p, &stable_elem(level, v.stable[k]));
        let vs = h_mul(&h_mul(&h_inv(&p), &ve), &p);
        // z = s^q: s^-q v* s^q = φ^q(ṽ*) s^p
        // z = β^q = t^-1 s^q t: the same with t v* t^-1 and t u t^-1
        let tv = h_mul(&h_mul(&t, &vs), &ti);
        for (x, y, z_is_beta) in [(&vs, &ue, false), (&tv, &tu, true)] {
            if x.s_exp != y.s_exp {
                continue;
            }
            match phi_exponent(&x.u_tilde, &y.u_tilde, bound) {
                Some(Some(q)) => {
                    let mut z = HElem::s_power(q);
                    if z_is_beta {
                        z = h_mul(&h_mul(&ti, &z), &t);
                    }
                    // u' = z^-1 P^-1 v P z, so Pu (P z)^-1 conjugates u to v
                    return Dec::Yes(h_mul(&pu, &h_inv(&h_mul(&p, &z))));
                }
                Some(None) => {}
                None => unknown = true,
            }
        }
        p = h_mul(&p, &v.bases[k + 1]);
    }
    if unknown {
        Dec::Unknown
    } else {
        Dec::No
    }
}

/// Conjugacy in H_m through the iterated HNN structure. `search_bound`
/// limits the q-scan used when the abelianization does not determine q.
pub fn collins_decide(u: &HWord, v: &HWord, m: u32, search_bound: i64) -> Result<Certificate> {
    u.check_rank(m)?;
    v.check_rank(m)?;
    if search_bound < 0 {
        return domain("search_bound must be nonnegative");
    }
    let (gu, gv) = (normal_form(u), normal_form(v));
    if gu.s_exp != gv.s_exp {
        return Ok(Certificate::negative(Method::UnequalSExp));
    }
    match decide(&gu, &gv, m, search_bound) {
        Dec::Yes(g) => Certificate::positive(&gu, &gv, g.to_word(), Method::Hnn),
        Dec::No => Ok(Certificate::negative(Method::Hnn)),
        Dec::Unknown => Ok(Certificate::inconclusive(Method::Hnn)),
    }
}

/// The default q-scan bound ℓ(u) + ℓ(v) + 2.
pub fn default_search_bound(u: &HWord, v: &HWord) -> i64 {
    (u.len() + v.len()) as i64 + 2
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::check_conjugation;
    use crate::word::parse_word;

    fn w(s: &str) -> HWord {
        parse_word(s).unwrap()
    }

    #[test]
    fn pinch_examples() {
        let x = HnnLevelWord::from_word(&w("A3 s a3"), 2).unwrap();
        let r = hnn_reduce(&x);
        assert_eq!(r.t_length(), 0);
        assert_eq!(r.bases[0], normal_form(&w("s A2")));

        let x = HnnLevelWord::from_word(&w("a3 s A2 A3"), 2).unwrap();
        assert_eq!(pinch_reduce(&x).bases, vec![HElem::s_power(1)]);

        let x = HnnLevelWord::from_word(&w("a2 s a1"), 2).unwrap();
        assert_eq!(hnn_reduce(&x), x);
    }

    #[test]
    fn cyclic_reduce_conjugates() {
        for s in ["a2 a3 s A3 A2", "a3 s a3 A2 s A3 s", "A3 a1 a3 s a3 s^2 A3"] {
            let x = HnnLevelWord::from_word(&w(s), 2).unwrap();
            let (r, c) = hnn_cyclic_reduce(&x);
            assert!(check_conjugation(&x.to_elem(), &c, &r.to_elem()), "{s}");
            assert!(r.is_cyclically_pinch_free(), "{s}");
        }
    }

    #[test]
    fn collins_examples() {
        let c = collins_decide(&w("a2 s"), &w("a2 a1 s"), 2, 6).unwrap();
        assert!(c.conjugate && c.verified);
        let c = collins_decide(&w("s"), &w("s s"), 1, 4).unwrap();
        assert!(!c.conjugate && c.method == Method::UnequalSExp);
        let c = collins_decide(&w("a2"), &w("a3"), 3, 4).unwrap();
        assert!(!c.conjugate && !c.inconclusive);
        let c = collins_decide(&w("s"), &w("A1 s"), 2, 4).unwrap();
        assert!(c.conjugate);
        let c = collins_decide(&w("s"), &w("A1 s"), 1, 4).unwrap();
        assert!(!c.conjugate && !c.inconclusive);
    }
}
