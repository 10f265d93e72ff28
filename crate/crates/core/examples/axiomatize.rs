//! Complete axiomatizations of Th(α, <) and their separation.
//!
//! cargo run --example axiomatize -- "w*2+1"

use wellorder::axiomgen::{replay, t_alpha_with, FiniteForm};
use wellorder::{parse_ordinal, t_alpha, AxiomOptions, Decider};

fn main() {
    let target = std::env::args().nth(1).unwrap_or_else(|| "w*2+1".into());
    let a = parse_ordinal(&target).expect("ordinal");
    let r = t_alpha(&a).expect("nonzero ordinal");
    let trace: Vec<String> = r.trace.iter().map(|s| s.to_string()).collect();
    println!("T({a}), rank {}:\n  {}", r.rank, r.sentence);
    println!("trace: {}", trace.join(" "));
    assert_eq!(
        replay(&r.trace, AxiomOptions::default()).unwrap(),
        r.sentence
    );

    let direct = t_alpha_with(
        &a,
        AxiomOptions {
            finite: FiniteForm::Direct,
            ..Default::default()
        },
    )
    .unwrap();
    println!("direct finite part: rank {}", direct.rank);

    let mut d = Decider::default();
    for b in ["1", "3", "w", "w+1", "w*2", "w*2+1", "w*2+2", "w^2"] {
        let b = parse_ordinal(b).unwrap();
        println!("  {b:>8} ⊨ T({a}): {}", d.holds(&b, &r.sentence).unwrap());
    }
}
