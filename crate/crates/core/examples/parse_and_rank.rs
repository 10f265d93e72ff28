//! Parse formulas, print them back and inspect rank and free variables.
//!
//! cargo run --example parse_and_rank -- "forall x exists y (x < y)"

use wellorder::{parse_formula, relativize, Guard, Var};

fn main() {
    let inputs: Vec<String> = std::env::args().skip(1).collect();
    let inputs = if inputs.is_empty() {
        vec![
            "forall x exists y (x < y)".to_string(),
            "∀x ((∃y (y < x)) → ∃y (y < x ∧ ¬∃z (z < y)))".to_string(),
            "~(a = b) & a < b -> a <= b".to_string(),
        ]
    } else {
        inputs
    };
    for src in &inputs {
        match parse_formula(src) {
            Ok(f) => {
                let free: Vec<String> = f.free_variables().iter().map(|v| v.to_string()).collect();
                println!("{src}");
                println!("  printed:   {f}");
                println!("  full:      {}", f.to_string_full());
                println!("  rank:      {}", f.quantifier_rank());
                println!("  free:      {{{}}}", free.join(", "));
                let below = relativize(&f, &Guard::Below(Var::new("p")));
                println!("  below p:   {} (rank {})", below.formula, below.rank);
            }
            Err(e) => println!("{src}\n  error: {e}"),
        }
    }
}
