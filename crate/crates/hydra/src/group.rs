//! Elements of H_m as normal forms ũ s^p.

use std::fmt;

use crate::automorphism::{letter_power_image, phi};
use crate::error::{domain, Result};
use crate::word::{is_s, push_reduce, FWord, HWord, Letter, RawWord, Word, S};

/// The normal form ũ s^p with ũ reduced.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HElem {
    pub u_tilde: FWord,
    pub s_exp: i64,
}

impl HElem {
    pub fn new(u: FWord, p: i64) -> HElem {
        HElem { u_tilde: u.reduced(), s_exp: p }
    }

    pub fn identity() -> HElem {
        HElem::default()
    }

    pub fn from_fword(u: &FWord) -> HElem {
        HElem::new(u.clone(), 0)
    }

    pub fn s_power(p: i64) -> HElem {
        HElem::new(Word::empty(), p)
    }

    /// The mixed word ũ s^p.
    pub fn to_word(&self) -> HWord {
        let mut v = self.u_tilde.letters().to_vec();
        let l = if self.s_exp < 0 { -S } else { S };
        v.extend(std::iter::repeat(l).take(self.s_exp.unsigned_abs() as usize));
        Word::new(v)
    }

    pub fn is_identity(&self) -> bool {
        self.s_exp == 0 && self.u_tilde.is_empty()
    }
}

impl fmt::Display for HElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} | s^{}", self.u_tilde, self.s_exp)
    }
}

/// Normal form by pushing every s to the right.
pub fn normal_form(w: &HWord) -> HElem {
    let mut u = Vec::with_capacity(w.len());
    let mut p = 0i64;
    for &l in w.letters() {
        if l == S {
            p += 1;
        } else if l == -S {
            p -= 1;
        } else {
            push_reduce(&mut u, &letter_power_image(l, -p));
        }
    }
    HElem { u_tilde: Word::new(u), s_exp: p }
}

/// One shuffling step: the s^e at `at` passes over the a-letters up to `to`
/// (exclusive), where it either cancels against s^-e or reaches the end.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Shuffle {
    pub at: usize,
    pub to: usize,
    pub e: i64,
    pub cancels: bool,
}

/// The stage sequence u_0 = w, ..., u_r with u_r s^p = w; the u_i are not
/// reduced. Each step moves the leftmost s-letter whose next s-letter is of
/// opposite sign (or absent).
#[derive(Clone, Debug)]
pub struct Stages {
    pub words: Vec<RawWord>,
    pub exps: Vec<i64>,
    pub moves: Vec<Shuffle>,
}

impl Stages {
    pub fn last(&self) -> &RawWord {
        self.words.last().expect("at least one stage")
    }

    pub fn s_exp(&self) -> i64 {
        *self.exps.last().expect("at least one stage")
    }
}

fn image_with_offsets(xs: &[Letter], e: i64) -> (Vec<Letter>, Vec<usize>) {
    let mut img = Vec::new();
    let mut offs = Vec::with_capacity(xs.len() + 1);
    for &x in xs {
        offs.push(img.len());
        img.extend(letter_power_image(x, -e));
    }
    offs.push(img.len());
    (img, offs)
}

pub fn normal_form_stages(w: &HWord) -> Stages {
    let mut cur: Vec<Letter> = w.letters().to_vec();
    let mut words = vec![w.clone()];
    let mut exps = vec![0i64];
    let mut moves = Vec::new();
    let mut p = 0i64;
    loop {
        let s_pos: Vec<usize> = (0..cur.len()).filter(|&k| is_s(cur[k])).collect();
        if s_pos.is_empty() {
            break;
        }
        let pick = (0..s_pos.len())
            .find(|&t| t + 1 == s_pos.len() || cur[s_pos[t + 1]] == -cur[s_pos[t]])
            .expect("last s-letter always qualifies");
        let at = s_pos[pick];
        let e = if cur[at] == S { 1 } else { -1 };
        let cancels = pick + 1 < s_pos.len();
        let to = if cancels { s_pos[pick + 1] } else { cur.len() };
        let (img, _) = image_with_offsets(&cur[at + 1..to], e);
        let mut next = cur[..at].to_vec();
        next.extend(img);
        if cancels {
            next.extend_from_slice(&cur[to + 1..]);
        } else {
            p += e;
        }
        moves.push(Shuffle { at, to, e, cancels });
        cur = next;
        words.push(Word::new(cur.clone()));
        exps.push(p);
    }
    Stages { words, exps, moves }
}

pub fn h_mul(g: &HElem, h: &HElem) -> HElem {
    let mut u = g.u_tilde.letters().to_vec();
    push_reduce(&mut u, phi(&h.u_tilde, -g.s_exp).letters());
    HElem { u_tilde: Word::new(u), s_exp: g.s_exp + h.s_exp }
}

pub fn h_inv(g: &HElem) -> HElem {
    HElem { u_tilde: phi(&g.u_tilde.inverse(), g.s_exp), s_exp: -g.s_exp }
}

pub fn h_pow(g: &HElem, k: i64) -> HElem {
    let base = if k < 0 { h_inv(g) } else { g.clone() };
    let mut acc = HElem::identity();
    for _ in 0..k.unsigned_abs() {
        acc = h_mul(&acc, &base);
    }
    acc
}

pub fn h_equal(g: &HElem, h: &HElem) -> bool {
    g == h
}

/// g^-1 u g
pub fn h_conj(u: &HElem, g: &HElem) -> HElem {
    h_mul(&h_inv(g), &h_mul(u, g))
}

/// True iff u w = w v.
pub fn check_conjugation(u: &HElem, w: &HElem, v: &HElem) -> bool {
    h_mul(u, w) == h_mul(w, v)
}

/// Positions in `w` of the letters that survive free reduction, in order.
fn survivors(w: &[Letter]) -> Vec<usize> {
    let mut stack: Vec<usize> = Vec::new();
    for (k, &l) in w.iter().enumerate() {
        if let Some(&t) = stack.last() {
            if w[t] == -l {
                stack.pop();
                continue;
            }
        }
        stack.push(k);
    }
    stack
}

/// A mixed word equal in H to the subword `sub` of the normal form of `w`,
/// traced back through the shuffling stages. Its length is at most
/// (2m+1) length(w).
pub fn short_subword_word(w: &HWord, sub: &FWord) -> Result<HWord> {
    let st = normal_form_stages(w);
    let last = st.last().letters();
    let surv = survivors(last);
    let u: Vec<Letter> = surv.iter().map(|&k| last[k]).collect();
    if sub.is_empty() {
        return Ok(Word::empty());
    }
    let start = match crate::word::find_slice(&u, sub.letters()) {
        Some(x) => x,
        None => return domain("short_subword_word: not a subword of the normal form"),
    };
    let (mut x, mut y) = (surv[start], surv[start + sub.len() - 1] + 1);
    let mut left: Vec<Vec<Letter>> = Vec::new();
    let mut right: Vec<Vec<Letter>> = Vec::new();
    for i in (0..st.moves.len()).rev() {
        let mv = &st.moves[i];
        let prev = st.words[i].letters();
        let xs = &prev[mv.at + 1..mv.to];
        let (img, offs) = image_with_offsets(xs, mv.e);
        let s_e = if mv.e > 0 { S } else { -S };
        let blk = (mv.at, mv.at + img.len());
        // shift for positions after the block
        let tail_shift = |q: usize| -> usize {
            let consumed = mv.to - mv.at + usize::from(mv.cancels);
            q - img.len() + consumed
        };
        // locate a boundary position q in u_{i+1}: returns (letter index k within xs, offset)
        let locate = |q: usize| -> (usize, usize) {
            let rel = q - blk.0;
            let k = offs.partition_point(|&o| o <= rel) - 1;
            (k, rel - offs[k])
        };
        let x_in_blk = x >= blk.0 && x < blk.1;
        let y_in_blk = y > blk.0 && y <= blk.1;
        let (nx, ny);
        let mut mu: Vec<Letter> = Vec::new();
        let mut lam: Vec<Letter> = Vec::new();
        if y <= blk.0 {
            nx = x;
            ny = y;
        } else if x >= blk.1 {
            nx = tail_shift(x);
            ny = tail_shift(y);
        } else {
            if x_in_blk {
                let (k, o) = locate(x);
                if o == 0 {
                    nx = mv.at + 1 + k;
                } else {
                    mu.extend_from_slice(&img[offs[k] + o..offs[k + 1]]);
                    nx = mv.at + 2 + k;
                }
                mu.push(s_e);
            } else {
                nx = x;
            }
            if y_in_blk {
                let (k, o) = locate(y);
                lam.push(-s_e);
                if o == 0 {
                    ny = mv.at + 1 + k;
                } else {
                    ny = mv.at + 1 + k;
                    lam.extend_from_slice(&img[offs[k]..offs[k] + o]);
                }
            } else {
                ny = tail_shift(y);
            }
            if x_in_blk && y_in_blk && nx > ny {
                // the span sits inside a single letter image
                left.push(img[x - blk.0..y - blk.0].to_vec());
                return Ok(assemble(left, Vec::new(), right));
            }
        }
        if !mu.is_empty() {
            left.push(mu);
        }
        if !lam.is_empty() {
            right.push(lam);
        }
        x = nx;
        y = ny;
    }
    Ok(assemble(left, w.letters()[x..y].to_vec(), right))
}

fn assemble(left: Vec<Vec<Letter>>, core: Vec<Letter>, right: Vec<Vec<Letter>>) -> HWord {
    let mut v: Vec<Letter> = left.into_iter().flatten().collect();
    v.extend(core);
    v.extend(right.into_iter().rev().flatten());
    Word::new(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::parse_word;

    fn w(s: &str) -> Word {
        parse_word(s).unwrap()
    }

    fn nf(s: &str) -> HElem {
        normal_form(&w(s))
    }

    const EX: &str = "s a6 A5 S S a5 s s a3";

    #[test]
    fn normal_form_example() {
        let st = normal_form_stages(&w(EX));
        assert_eq!(st.moves.len(), 3);
        assert_eq!(st.s_exp(), 1);
        let u3 = w("a6 a4 a2 A1 A3 A5 a4 a2 A1 A3 A5 a5 a4 a3 a1 A2");
        assert_eq!(st.last(), &u3);
        let h = nf(EX);
        assert_eq!(h.s_exp, 1);
        assert_eq!(h.u_tilde, w("a6 a4 a2 A1 A3 A5 a4 a2 A1 A3 a4 a3 a1 A2"));
        assert_eq!(h.u_tilde.len(), 14);
        assert_eq!(h.u_tilde, u3.reduced());
        assert_eq!(nf("S a2 s"), HElem::new(w("a2 a1"), 0));
    }

    #[test]
    fn mul_examples() {
        let g = HElem::new(w("a2"), 1);
        assert_eq!(h_mul(&g, &HElem::new(w("a2"), 0)), HElem::new(w("a2 a2 A1"), 1));
        let h = HElem::new(w("a3 A1"), -2);
        assert_eq!(h_mul(&HElem::identity(), &h), h);
        assert!(h_mul(&h, &h_inv(&h)).is_identity());
    }

    #[test]
    fn equality_examples() {
        assert!(h_equal(&nf("s a1"), &nf("a1 s")));
        assert!(!h_equal(&nf("s a2"), &nf("a2 s")));
        assert_eq!(nf("s a2"), HElem::new(w("a2 A1"), 1));
    }

    #[test]
    fn conjugation_examples() {
        let u = HElem::new(w("a2"), 1);
        let v = HElem::new(w("a2 a1"), 1);
        assert!(check_conjugation(&u, &HElem::s_power(1), &v));
        assert!(check_conjugation(&v, &HElem::identity(), &v));
        assert!(!check_conjugation(&HElem::new(w("a2"), 0), &HElem::identity(), &HElem::new(w("a3"), 0)));
    }

    #[test]
    fn short_subword_example() {
        let x = w(EX);
        let sub = w("A3 a4 a3");
        let y = short_subword_word(&x, &sub).unwrap();
        assert_eq!(normal_form(&y), HElem::from_fword(&sub));
        assert!(y.len() <= 13 * x.len());
        assert!(short_subword_word(&x, &w("a6 a6")).is_err());
    }
}
