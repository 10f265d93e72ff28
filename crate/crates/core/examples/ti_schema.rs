//! Transfinite induction instances are valid in every well order.
//!
//! cargo run --example ti_schema -- "exists z (v < z)"

use wellorder::{parse_formula, ti_instance, Decider, Var};

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let phis: Vec<&str> = if args.is_empty() {
        vec![
            "exists z (v < z)",
            "forall z (z < v -> exists w (z < w & w < v))",
            "false",
        ]
    } else {
        args.iter().map(String::as_str).collect()
    };
    let mut d = Decider::default();
    for src in phis {
        let phi = parse_formula(src).expect("formula");
        let inst = ti_instance(&phi, &Var::new("x"), &Var::new("y")).expect("one free variable");
        let v = d.decide(&inst, false).expect("decided");
        println!("φ = {phi}\n  {inst}\n  rank {}: {}", v.rank, v.status);
    }
}
