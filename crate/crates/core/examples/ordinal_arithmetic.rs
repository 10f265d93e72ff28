//! Cantor normal form arithmetic below ω^ω.

use wellorder::parse_ordinal;

fn main() {
    let a = parse_ordinal("w^2*3 + w + 5").unwrap();
    let b = parse_ordinal("w*2 + 1").unwrap();
    println!("a = {a}");
    println!("b = {b}");
    println!("a + b = {}", a.add(&b));
    println!("b + a = {}", b.add(&a));
    println!("a * w = {}", a.mul_omega_right().unwrap());
    println!("w * a = {}", a.mul_omega_left());
    let (limit, n) = a.split_limit_finite();
    println!("a = w*({limit}) + {n}");
    println!("a < b: {}", a < b);
    println!("successor of b: {}, limit: {}", b.successor(), b.is_limit());
    for bad in ["w + w^2", "w*0", "w^"] {
        println!("parse {bad:?}: {}", parse_ordinal(bad).unwrap_err());
    }
}
