mod common;

use std::time::Duration;

use common::*;
use wellorder::{
    holds_finite_bruteforce, parse_ordinal, parse_sentence, DecideError, Decider, Limits, Ordinal,
    Status,
};

const SAMPLE: [&str; 8] = ["1", "2", "5", "w", "w+1", "w*2", "w^2", "w^2+w*3+2"];

#[test]
fn valid_verdicts_hold_on_samples() {
    let mut d = Decider::default();
    let sample: Vec<Ordinal> = SAMPLE.iter().map(|s| parse_ordinal(s).unwrap()).collect();
    let corpus = random_sentences(21, 150, 2)
        .into_iter()
        .chain(sentences(&RANK3))
        .chain(sentences(&THEOREMS));
    for f in corpus {
        let v = d.decide(&f, false).unwrap();
        match v.status {
            Status::Valid => {
                for a in &sample {
                    assert!(d.holds(a, &f).unwrap(), "{f} VALID but false in {a}");
                }
                for n in 1..=6 {
                    assert!(
                        holds_finite_bruteforce(n, &f).unwrap(),
                        "{f} VALID but false in {n}"
                    );
                }
            }
            Status::Invalid => {
                let cex = v.counterexample.expect("counterexample");
                assert!(
                    d.holds(&cex, &f.clone().not()).unwrap(),
                    "{cex} does not refute {f}"
                );
                assert_eq!(v.witness_term.expect("witness").eval(), cex);
            }
        }
    }
}

#[test]
fn witness_terms_are_coherent() {
    let mut d = Decider::default();
    for k in 1..=4 {
        for allow_empty in [false, true] {
            let c = d.reachable_closure(k, allow_empty).unwrap();
            for e in &c.entries {
                assert_eq!(e.witness.eval(), e.ordinal);
                assert_eq!(d.type_of(&e.ordinal, k), e.ktype, "k = {k}, {}", e.ordinal);
            }
        }
    }
}

#[test]
fn closure_covers_sampled_ordinals() {
    let mut d = Decider::default();
    for k in 1..=3 {
        let c = d.reachable_closure(k, false).unwrap();
        for a in probe_set() {
            let t = d.type_of(&a, k);
            assert!(c.contains(t), "{a} missing at k = {k}");
            assert!(d.is_wo_type(t).unwrap());
        }
    }
}

#[test]
fn empty_order_is_optional() {
    let mut d = Decider::default();
    let f = parse_sentence("exists x forall y (x = y | x < y)").unwrap();
    assert!(d.decide(&f, false).unwrap().is_valid());
    let v = d.decide(&f, true).unwrap();
    assert_eq!(v.counterexample, Some(Ordinal::zero()));
    let e = d.table_mut().type_empty(3);
    assert!(!d.is_wo_type(e).unwrap());
}

#[test]
fn resource_caps_never_produce_verdicts() {
    let mut d = Decider::new(Limits {
        max_types: 10,
        ..Limits::default()
    });
    let f = parse_sentence("forall x forall y forall z (x < y & y < z -> x < z)").unwrap();
    assert!(matches!(
        d.decide(&f, false),
        Err(DecideError::Resources { .. })
    ));

    let mut d = Decider::new(Limits {
        max_time: Some(Duration::ZERO),
        ..Limits::default()
    });
    assert!(matches!(
        d.decide(&f, false),
        Err(DecideError::Resources { .. })
    ));

    let deep = parse_sentence("forall a forall b forall c forall d forall e (a = a)").unwrap();
    assert!(matches!(
        Decider::default().decide(&deep, false),
        Err(DecideError::LevelTooHigh { .. })
    ));
}
