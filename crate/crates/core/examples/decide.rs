//! Decide sentences over all well orders.
//!
//! cargo run --example decide -- "forall x exists y (x < y)"

use wellorder::{parse_sentence, Decider, Status};

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let inputs: Vec<&str> = if args.is_empty() {
        vec![
            "exists x forall y (x = y | x < y)",
            "forall x ((exists y (x < y)) -> exists y (x < y & forall z (x < z -> y < z | y = z)))",
            "forall x exists y (x < y)",
            "forall x ((exists y (y < x)) -> exists y (y < x & forall z (z < x -> z < y | z = y)))",
        ]
    } else {
        args.iter().map(String::as_str).collect()
    };
    let mut d = Decider::default();
    for src in inputs {
        let f = parse_sentence(src).expect("sentence");
        let v = d.decide(&f, false).expect("decided");
        match v.status {
            Status::Valid => println!(
                "VALID    rank {} over {} types: {f}",
                v.rank, v.closure_size
            ),
            Status::Invalid => println!(
                "INVALID  rank {}, fails in {} = {}: {f}",
                v.rank,
                v.counterexample.unwrap(),
                v.witness_term.unwrap()
            ),
        }
    }
    let v = d
        .decide(&parse_sentence("exists x true").unwrap(), true)
        .unwrap();
    println!(
        "with the empty order, `exists x true` fails in {}",
        v.counterexample.unwrap()
    );
}
