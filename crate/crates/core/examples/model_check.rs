//! Evaluate sentences in particular ordinals.
//!
//! cargo run --example model_check -- "w*2+1" "exists x forall y (y < x | y = x)"

use wellorder::{parse_ordinal, parse_sentence, Decider};

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let mut d = Decider::default();
    if let [a, f] = &args[..] {
        let a = parse_ordinal(a).expect("ordinal");
        let f = parse_sentence(f).expect("sentence");
        println!("{a} ⊨ {f}: {}", d.holds(&a, &f).unwrap());
        return;
    }
    let sentences = [
        ("has a maximum", "exists x forall y (y < x | y = x)"),
        (
            "has a limit point",
            "exists x ((exists y (y < x)) & forall y (y < x -> exists z (y < z & z < x)))",
        ),
        (
            "at least 3 elements",
            "exists x exists y exists z (x < y & y < z)",
        ),
    ];
    let ordinals = ["1", "2", "5", "w", "w+1", "w*2", "w^2+w*3+2"];
    print!("{:24}", "");
    for a in ordinals {
        print!("{a:>11}");
    }
    println!();
    for (name, src) in sentences {
        let f = parse_sentence(src).unwrap();
        print!("{name:24}");
        for a in ordinals {
            print!("{:>11}", d.holds(&parse_ordinal(a).unwrap(), &f).unwrap());
        }
        println!();
    }
}
