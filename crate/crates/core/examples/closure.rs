//! The reachable rank-k types, each with a witness term over 1, + and ·ω.

use wellorder::Decider;

fn main() {
    let max: u32 = std::env::args()
        .nth(1)
        .map(|s| s.parse().expect("level"))
        .unwrap_or(3);
    let mut d = Decider::default();
    for k in 1..=max {
        let start = std::time::Instant::now();
        let c = d.reachable_closure(k, false).expect("within limits");
        println!(
            "k={k}: {} types, {} interned, {:.1?}",
            c.len(),
            d.table().len(),
            start.elapsed()
        );
        if k <= 2 {
            for e in &c.entries {
                println!(
                    "  depth {}  {:>8}  {}",
                    e.depth,
                    e.ordinal.to_string(),
                    e.witness
                );
            }
        }
    }
}
