mod common;

use common::*;
use hydra::group::check_conjugation;
use hydra::oracle::{oracle_twisted, shortlex_words, alphabet};
use hydra::twisted::{
    solve_0_twisted, solve_h_twisted, solve_i_twisted, twisted_holds, Chunk, FormTag, Outcome, TwistedSolution,
};
use hydra::{phi, BoundPolicy, HElem, Word};

/// ũ φ^-p(w̃) = w̃ φ^-r(ṽ), recomputed here.
fn holds(u: &Word, v: &Word, p: i64, sol: &TwistedSolution) -> bool {
    u.mul(&phi(&sol.w_tilde, -p)) == sol.w_tilde.mul(&phi(v, -sol.r))
}

fn solve(u: &Word, v: &Word, p: i64, m: u32) -> Outcome {
    let pol = BoundPolicy::default();
    if p == 0 {
        return solve_0_twisted(u, v, &pol);
    }
    if let Some(s) = solve_i_twisted(u, v, p).unwrap() {
        return Outcome::Found(s);
    }
    solve_h_twisted(u, v, p, m, &pol).unwrap()
}

#[test]
fn union_matches_oracle_small() {
    let words = shortlex_words(&alphabet(2, false), 2);
    for p in 0..=2i64 {
        for u in &words {
            for v in &words {
                let got = solve(u, v, p, 2);
                let want = oracle_twisted(u, v, p, 6, 5, 2);
                if let Some(sol) = got.found() {
                    assert!(holds(u, v, p, sol), "{u} {v} p={p}");
                } else {
                    assert!(want.is_none(), "{u} {v} p={p}: oracle {want:?}");
                }
                assert!(!got.is_inconclusive());
            }
        }
    }
}

#[test]
fn solutions_conjugate_in_h() {
    let words = shortlex_words(&alphabet(2, false), 3);
    let mut seen = 0;
    for p in 0..=2i64 {
        for u in words.iter().step_by(3) {
            for v in words.iter().step_by(5) {
                if let Outcome::Found(sol) = solve(u, v, p, 2) {
                    seen += 1;
                    let (gu, gv) = (HElem::new(u.clone(), p), HElem::new(v.clone(), p));
                    assert!(check_conjugation(&gu, &sol.conjugator(), &gv), "{u} {v} p={p}");
                }
            }
        }
    }
    assert!(seen > 50);
}

#[test]
fn deterministic() {
    let words = shortlex_words(&alphabet(2, false), 3);
    for u in words.iter().step_by(7) {
        for v in words.iter().step_by(11) {
            for p in 0..=2 {
                assert_eq!(solve(u, v, p, 2), solve(u, v, p, 2));
            }
        }
    }
}

/// Every swap chunk's M1 is π φ^(ep)(π) ... φ^(ep(q-1))(π).
#[test]
fn swap_chunks_are_m1_products() {
    let words = shortlex_words(&alphabet(2, false), 3);
    let mut swaps = 0;
    for p in 1..=2i64 {
        for u in &words {
            for v in words.iter().step_by(2) {
                let Outcome::Found(sol) = solve(u, v, p, 2) else { continue };
                if let Some(form) = &sol.form {
                    if form.tag == FormTag::X3 {
                        assert!(sol.chunks.iter().any(|c| matches!(c, Chunk::Swap { .. })));
                    }
                }
                for c in &sol.chunks {
                    let Chunk::Swap { pi, q, e, m1 } = c else { continue };
                    swaps += 1;
                    let mut prod = Word::empty();
                    for k in 0..*q as i64 {
                        prod = prod.mul(&phi(pi, e * p * k));
                    }
                    assert_eq!(&prod, m1, "{u} {v} p={p}");
                }
            }
        }
    }
    assert!(swaps > 0);
}

#[test]
fn frozen_h_config_solutions() {
    let src = include_str!("fixtures/h_config.tsv");
    for line in src.lines().filter(|l| !l.trim().is_empty()) {
        let f: Vec<&str> = line.split('\t').collect();
        let (u, v, p, r, wt, tag) = (w(f[0]), w(f[1]), f[2].parse().unwrap(), f[3].parse().unwrap(), w(f[4]), f[5]);
        assert!(twisted_holds(&u, &v, p, r, &wt), "{line}");
        assert!(solve_i_twisted(&u, &v, p).unwrap().is_none(), "{line}");
        let Outcome::Found(sol) = solve_h_twisted(&u, &v, p, 2, &BoundPolicy::default()).unwrap() else {
            panic!("{line}: no solution");
        };
        assert_eq!((sol.r, &sol.w_tilde), (r, &wt), "{line}");
        assert_eq!(format!("{:?}", sol.form.unwrap().tag), tag, "{line}");
    }
}

#[test]
fn policy_knobs() {
    let pol = BoundPolicy::parse("k_multiplier=2\n# comment\nhard_cap=none\n").unwrap();
    assert_eq!(pol.k_multiplier, 2.0);
    assert!(pol.hard_cap.is_none());
    assert!(BoundPolicy::parse("bogus=1").is_err());
    // a tiny hard cap turns a long search into an inconclusive answer
    let tight = BoundPolicy { hard_cap: Some(1), ..BoundPolicy::default() };
    let out = solve_h_twisted(&w("a2"), &w("a1^2 a2"), 1, 2, &tight).unwrap();
    assert!(out.is_inconclusive());
}
