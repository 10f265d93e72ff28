//! Rank-k types of finite and infinite ordinals and their algebra.

use wellorder::{parse_ordinal, TypeTable};

fn main() {
    let mut t = TypeTable::new();
    for k in 1..=3 {
        let classes: Vec<String> = (1..=8)
            .map(|n| t.type_of_finite(n, k).index().to_string())
            .collect();
        println!("k={k}: type ids of 1..8 = {}", classes.join(" "));
    }

    let two = t.type_of_finite(2, 1);
    println!("rank-1 type of 2: {}", t.render(two));

    for k in 1..=3 {
        let w = t.type_of_ordinal(&parse_ordinal("w").unwrap(), k);
        let three = t.type_of_finite(3, k);
        let s = t.sum(three, w).unwrap();
        println!("k={k}: 3 + w has the type of w: {}", s == w);
    }

    let a = parse_ordinal("w^2").unwrap();
    let b = parse_ordinal("w^2*2").unwrap();
    for k in 1..=3 {
        let (ta, tb) = (t.type_of_ordinal(&a, k), t.type_of_ordinal(&b, k));
        let st = t.stats(ta);
        println!(
            "k={k}: w^2 and w^2*2 {} (|type| = {}, {} nodes, encoding {}...)",
            if ta == tb { "agree" } else { "differ" },
            st.cardinality,
            st.total_nodes,
            &t.encoding(ta)[..12]
        );
    }
}
