//! Conjugacy in H_m: normal forms, then the 0-, I- and H-twisted solvers.

use crate::error::{HydraError, Result};
use crate::group::{check_conjugation, h_inv, normal_form, HElem};
use crate::twisted::{
    compress_conjugator, linearize_conjugator, solve_0_twisted, solve_h_twisted, solve_i_twisted, BoundPolicy,
    Method, Outcome, TwistedSolution,
};
use crate::word::HWord;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub conjugate: bool,
    /// Compressed witness w with w^-1 u w = v.
    pub witness: Option<HWord>,
    /// Witness before compression.
    pub raw_witness: Option<HWord>,
    pub method: Method,
    pub inconclusive: bool,
    pub verified: bool,
}

impl Certificate {
    pub fn negative(method: Method) -> Certificate {
        Certificate { conjugate: false, witness: None, raw_witness: None, method, inconclusive: false, verified: false }
    }

    pub fn inconclusive(method: Method) -> Certificate {
        Certificate { inconclusive: true, ..Certificate::negative(method) }
    }

    /// Positive certificate for `raw`; fails if it does not conjugate u to v.
    pub fn positive(u: &HElem, v: &HElem, raw: HWord, method: Method) -> Result<Certificate> {
        let witness = shortest_witness(&raw, u, v)?;
        if !check_conjugation(u, &normal_form(&witness), v) {
            return Err(HydraError::Internal(format!("witness {witness} failed verification")));
        }
        Ok(Certificate {
            conjugate: true,
            witness: Some(witness),
            raw_witness: Some(raw),
            method,
            inconclusive: false,
            verified: true,
        })
    }
}

/// u^k w conjugates u to v for every k; keep the shortest compression.
fn shortest_witness(raw: &HWord, u: &HElem, v: &HElem) -> Result<HWord> {
    let uw = u.to_word();
    let mut best = compress_conjugator(raw, u, v)?;
    let (mut up, mut un) = (raw.clone(), raw.clone());
    for _ in 0..WITNESS_POWERS {
        up = uw.mul(&up);
        un = uw.inverse().mul(&un);
        for cand in [&up, &un] {
            let c = compress_conjugator(cand, u, v)?;
            if c.len() < best.len() {
                best = c;
            }
        }
    }
    Ok(best)
}

const WITNESS_POWERS: usize = 3;

/// Decide whether u and v are conjugate in H_m. `m` is the rank of the
/// ambient group and must be at least the rank of both words.
pub fn decide_conjugacy(u: &HWord, v: &HWord, m: u32, policy: &BoundPolicy) -> Result<Certificate> {
    u.check_rank(m)?;
    v.check_rank(m)?;
    policy.validate()?;
    let (gu, gv) = (normal_form(u), normal_form(v));
    decide_elems(&gu, &gv, m, policy)
}

/// As [`decide_conjugacy`] for elements already in normal form.
pub fn decide_elems(u: &HElem, v: &HElem, m: u32, policy: &BoundPolicy) -> Result<Certificate> {
    if u.s_exp != v.s_exp {
        return Ok(Certificate::negative(Method::UnequalSExp));
    }
    if u.s_exp < 0 {
        // w^-1 u^-1 w = v^-1 iff w^-1 u w = v
        return decide_elems(&h_inv(u), &h_inv(v), m, policy);
    }
    let p = u.s_exp;
    let (ut, vt) = (&u.u_tilde, &v.u_tilde);
    if p == 0 {
        return match solve_0_twisted(ut, vt, policy) {
            Outcome::Found(sol) => Certificate::positive(u, v, sol.conjugator().to_word(), Method::Zero),
            Outcome::Absent => Ok(Certificate::negative(Method::Zero)),
            Outcome::Inconclusive => Ok(Certificate::inconclusive(Method::Zero)),
        };
    }
    if let Some(sol) = solve_i_twisted(ut, vt, p)? {
        return Certificate::positive(u, v, sol.conjugator().to_word(), Method::IConfig);
    }
    match solve_h_twisted(ut, vt, p, m, policy)? {
        Outcome::Found(sol) => Certificate::positive(u, v, h_raw_witness(&sol, u, v)?, Method::HConfig),
        Outcome::Absent => Ok(Certificate::negative(Method::HConfig)),
        Outcome::Inconclusive => Ok(Certificate::inconclusive(Method::HConfig)),
    }
}

/// Linearized conjugator when the solution has swap chunks, else w̃ s^r;
/// whichever is shorter as a word.
fn h_raw_witness(sol: &TwistedSolution, u: &HElem, v: &HElem) -> Result<HWord> {
    let plain = sol.conjugator().to_word();
    if sol.chunks.is_empty() {
        return Ok(plain);
    }
    linearize_conjugator(sol, u, v)?;
    let lin = sol.linear_word(u.s_exp);
    Ok(if lin.len() < plain.len() { lin } else { plain })
}
