mod common;

use common::*;
use hydra::hnn::{collins_decide, default_search_bound};
use hydra::{check_conjugation, decide_conjugacy, normal_form, BoundPolicy, Method};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn constructed_pairs_found(m in 1u32..=4, u in mixed_word(4, 8), c in mixed_word(4, 6)) {
        let clamp = |x: &hydra::Word| hydra::Word::new(x.letters().iter().map(|&l| {
            if l.unsigned_abs() <= m || l.abs() == hydra::S { l } else { l.signum() * m as i32 }
        }).collect());
        let (u, c) = (clamp(&u), clamp(&c));
        let v = c.inverse().concat(&u).concat(&c);
        let cert = decide_conjugacy(&u, &v, m, &BoundPolicy::default()).unwrap();
        prop_assert!(cert.conjugate && cert.verified && !cert.inconclusive);
        let g = normal_form(cert.witness.as_ref().unwrap());
        prop_assert!(check_conjugation(&normal_form(&u), &g, &normal_form(&v)));
    }

    #[test]
    fn s_exponent_is_invariant(u in mixed_word(3, 6), v in mixed_word(3, 6)) {
        let cert = decide_conjugacy(&u, &v, 3, &BoundPolicy::default()).unwrap();
        if cert.conjugate {
            prop_assert_eq!(normal_form(&u).s_exp, normal_form(&v).s_exp);
        }
        if normal_form(&u).s_exp != normal_form(&v).s_exp {
            prop_assert_eq!(cert.method, Method::UnequalSExp);
            prop_assert!(!cert.conjugate);
        }
    }

    #[test]
    fn agrees_with_hnn(u in mixed_word(3, 6), v in mixed_word(3, 6)) {
        let a = decide_conjugacy(&u, &v, 3, &BoundPolicy::default()).unwrap();
        let b = collins_decide(&u, &v, 3, default_search_bound(&u, &v)).unwrap();
        if !a.inconclusive && !b.inconclusive {
            prop_assert_eq!(a.conjugate, b.conjugate, "{} vs {}", u, v);
        }
        for c in [&a, &b] {
            if c.conjugate {
                let g = normal_form(c.witness.as_ref().unwrap());
                prop_assert!(check_conjugation(&normal_form(&u), &g, &normal_form(&v)));
            }
        }
    }
}

#[test]
fn negatives_have_no_short_conjugator() {
    // equal s-exponent pairs the engine rejects: the BFS oracle finds nothing
    let pairs = [("a2", "a3"), ("a1 s", "a2 s"), ("a2 s^2", "a3 s^2"), ("a2 a1 s", "a2^2 s"), ("s a3", "s a1 a3")];
    for (a, b) in pairs {
        let cert = decide_conjugacy(&w(a), &w(b), 3, &BoundPolicy::default()).unwrap();
        assert!(!cert.conjugate && !cert.inconclusive, "{a} {b}");
        assert!(hydra::oracle::oracle_conjugate(&normal_form(&w(a)), &normal_form(&w(b)), 3, 5).is_none(), "{a} {b}");
    }
}

#[test]
fn raw_and_compressed_witnesses() {
    let u = w("a3 s");
    let v = w("S^5 a3 s^5 s");
    let cert = decide_conjugacy(&u, &v, 3, &BoundPolicy::default()).unwrap();
    assert!(cert.conjugate);
    let (raw, wit) = (cert.raw_witness.unwrap(), cert.witness.unwrap());
    assert!(wit.len() <= raw.len());
    for x in [&raw, &wit] {
        assert!(check_conjugation(&normal_form(&u), &normal_form(x), &normal_form(&v)));
    }
}
