#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wellorder::{parse_sentence, Formula, Ordinal, Var};

pub const VARS: [&str; 3] = ["x", "y", "z"];

/// Random formula of quantifier rank at most `q` whose free variables lie in `bound`.
pub fn random_formula(
    rng: &mut ChaCha8Rng,
    q: usize,
    bound: &mut Vec<&'static str>,
    depth: usize,
) -> Formula {
    let atom = |rng: &mut ChaCha8Rng, bound: &[&'static str]| {
        if bound.is_empty() {
            return if rng.gen_bool(0.5) {
                Formula::True
            } else {
                Formula::False
            };
        }
        // Mostly distinct variables, with the innermost one involved.
        let inner = bound.len() - 1;
        let other = rng.gen_range(0..bound.len());
        let (i, j) = if other == inner && bound.len() > 1 && rng.gen_bool(0.9) {
            (inner, rng.gen_range(0..inner))
        } else {
            (inner, other)
        };
        let (i, j) = if rng.gen_bool(0.5) { (i, j) } else { (j, i) };
        let a = Var::new(bound[i]);
        let b = Var::new(bound[j]);
        if rng.gen_bool(0.6) {
            Formula::lt(&a, &b)
        } else {
            Formula::eq(&a, &b)
        }
    };
    let choice = if depth == 0 { 0 } else { rng.gen_range(0..10) };
    match choice {
        0 | 1 => atom(rng, bound),
        2 => random_formula(rng, q, bound, depth - 1).not(),
        3 | 4 => {
            let l = random_formula(rng, q, bound, depth - 1);
            let r = random_formula(rng, q, bound, depth - 1);
            match rng.gen_range(0..4) {
                0 => l.and(r),
                1 => l.or(r),
                2 => l.implies(r),
                _ => l.iff(r),
            }
        }
        _ if q == 0 => atom(rng, bound),
        _ => {
            let fresh: Vec<&'static str> = VARS
                .iter()
                .copied()
                .filter(|v| !bound.contains(v))
                .collect();
            let v = if !fresh.is_empty() && rng.gen_bool(0.9) {
                fresh[rng.gen_range(0..fresh.len())]
            } else {
                VARS[rng.gen_range(0..VARS.len())]
            };
            bound.push(v);
            let body = random_formula(rng, q - 1, bound, depth - 1);
            bound.pop();
            if rng.gen_bool(0.5) {
                Formula::forall(&Var::new(v), body)
            } else {
                Formula::exists(&Var::new(v), body)
            }
        }
    }
}

/// `count` random sentences of rank at most `q`, at least one quantifier each.
pub fn random_sentences(seed: u64, count: usize, q: usize) -> Vec<Formula> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let f = random_formula(&mut rng, q, &mut Vec::new(), 6);
        if f.has_quantifier() && f.quantifier_rank() <= q {
            out.push(f);
        }
    }
    out
}

pub fn sentences(src: &[&str]) -> Vec<Formula> {
    src.iter()
        .map(|s| parse_sentence(s).unwrap_or_else(|e| panic!("{s}: {e}")))
        .collect()
}

pub const RANK3: [&str; 30] = [
    "forall x forall y forall z (x < y & y < z -> x < z)",
    "exists x exists y exists z (x < y & y < z)",
    "forall x exists y (x < y & forall z (x < z -> y < z | y = z))",
    "forall x ((exists y (x < y)) -> exists y (x < y & forall z (z < y -> z < x | z = x)))",
    "exists x ((forall y (x < y | x = y)) & exists y (x < y & forall z (x < z -> y < z | y = z)))",
    "forall x forall y (x < y -> exists z (x < z & z < y))",
    "exists x exists y (x < y & forall z (z < x | z = x | y < z | y = z))",
    "forall x exists y exists z (x < y & y < z)",
    "exists x forall y exists z (y < x -> y < z & z < x)",
    "forall x forall y exists z (x < z & y < z)",
    "exists x exists y (x < y & forall z (z = x | z < x | x < z))",
    "forall x ((forall y (y < x -> exists z (y < z & z < x))) -> forall y (y < x | y = x))",
    "exists x ((forall y (y < x -> exists z (y < z & z < x))) & exists y (y < x))",
    "forall x forall y forall z (x = y | x = z | y = z)",
    "exists x exists y exists z (!(x = y) & !(x = z) & !(y = z))",
    "forall x exists y forall z (z < y <-> z < x | z = x)",
    "exists x forall y forall z (y < z -> y < x)",
    "forall x ((exists y exists z (x < y & y < z)) | forall y (y < x | y = x))",
    "exists x exists y (x < y & !exists z (x < z & z < y))",
    "forall x forall y (x < y -> (exists z (x < z & !(z < y) & !(z = y))) | !exists z (y < z))",
    "(forall x exists y (x < y)) -> exists x exists y exists z (x < y & y < z & !(z = x))",
    "exists x ((exists y (y < x)) & forall y (y < x -> exists z (y < z & z < x)))",
    "forall x forall y exists z (x < y -> x < z & (z < y | z = y))",
    "!(forall x exists y forall z (x < y & !(z = y)))",
    "exists z forall x forall y (x < y -> x < z | y = z | z < y)",
    "forall x forall y forall z (x < y & x < z -> y < z | z < y | y = z)",
    "exists x forall y exists z (x < z | y = x)",
    "forall x ((forall y (x < y | x = y)) <-> !exists z exists w (z < x & w = z))",
    "exists x exists y (!(x = y) & forall z (z = x | z = y))",
    "(forall x exists y forall z (z < x -> z < y)) & exists x forall y (x < y | x = y)",
];

pub const THEOREMS: [&str; 15] = [
    "exists x forall y (x = y | x < y)",
    "forall x forall y forall z (x < y & y < z -> x < z)",
    "forall x forall y (x < y | x = y | y < x)",
    "forall x !(x < x)",
    "forall x forall y !(x < y & y < x)",
    "forall x ((exists y (x < y)) -> exists y (x < y & forall z (x < z -> y < z | y = z)))",
    "exists x true",
    "forall x (x = x)",
    "forall x forall y (x = y -> y = x)",
    "(forall x exists y (x < y)) -> exists x exists y (x < y)",
    "(exists x exists y (!(x = y))) -> exists x exists y (x < y)",
    "forall x ((exists y (y < x)) -> exists y (y < x & !exists z (z < y)))",
    "forall x exists y (y = x | (y < x & !exists z (z < y)))",
    "!exists x forall y (y < x)",
    "forall x ((forall y !(y < x)) -> forall z (x < z | x = z))",
];

pub const NON_THEOREMS: [&str; 15] = [
    "forall x exists y (x < y)",
    "exists x exists y (x < y)",
    "forall x forall y (x = y)",
    "exists x forall y (y < x | y = x)",
    "!exists x forall y (y < x | y = x)",
    "forall x forall y (x < y -> exists z (x < z & z < y))",
    "exists x exists y exists z (x < y & y < z)",
    "forall x ((exists y (y < x)) -> exists y (y < x & forall z (z < x -> z < y | z = y)))",
    "exists x ((exists y (y < x)) & forall y (y < x -> exists z (y < z & z < x)))",
    "forall x ((exists y (y < x)) & !exists y (x < y))",
    "exists x exists y (x < y & forall z (z = x | z = y))",
    "forall x exists y exists z (x < y & y < z)",
    "forall x forall y (x = y | x < y)",
    "exists x forall y (x < y)",
    "false",
];

pub const TI_PHIS: [&str; 10] = [
    "exists z (v < z)",
    "forall z (z < v | z = v | v < z)",
    "exists z (z < v)",
    "forall z (v < z)",
    "v = v",
    "false",
    "exists z (z < v & forall w (w < v -> w < z | w = z))",
    "forall z (z < v -> exists w (z < w & w < v))",
    "(exists z (v < z)) | forall z (z < v | z = v)",
    "!exists z (v < z & forall w (v < w -> z < w | z = w))",
];

/// Whether the duplicator wins the k-round EF game on the finite orders of sizes `n` and `m`.
pub fn ef_duplicator_wins(n: usize, m: usize, k: u32) -> bool {
    fn partial_iso(p: &[(usize, usize)]) -> bool {
        p.iter().all(|&(a1, b1)| {
            p.iter()
                .all(|&(a2, b2)| (a1 < a2) == (b1 < b2) && (a1 == a2) == (b1 == b2))
        })
    }
    fn go(n: usize, m: usize, k: u32, p: &mut Vec<(usize, usize)>) -> bool {
        if !partial_iso(p) {
            return false;
        }
        if k == 0 {
            return true;
        }
        let spoiler_left = (0..n).all(|a| {
            (0..m).any(|b| {
                p.push((a, b));
                let r = go(n, m, k - 1, p);
                p.pop();
                r
            })
        });
        spoiler_left
            && (0..m).all(|b| {
                (0..n).any(|a| {
                    p.push((a, b));
                    let r = go(n, m, k - 1, p);
                    p.pop();
                    r
                })
            })
    }
    go(n, m, k, &mut Vec::new())
}

/// All ordinals `w^2*a + w*b + c` with coefficients at most 4, excluding 0.
pub fn probe_set() -> Vec<Ordinal> {
    let mut out = Vec::new();
    for a in 0..=4u64 {
        for b in 0..=4u64 {
            for c in 0..=4u64 {
                let terms = [(2, a), (1, b), (0, c)].into_iter().filter(|&(_, k)| k > 0);
                let o = Ordinal::from_terms(terms).unwrap();
                if !o.is_zero() {
                    out.push(o);
                }
            }
        }
    }
    out
}

/// Direct Tarskian evaluation on `0 < 1 < ... < n-1`, independent of the library's evaluators.
pub fn tarski(n: usize, f: &Formula, env: &mut Vec<(String, usize)>) -> bool {
    let val = |env: &[(String, usize)], v: &Var| {
        env.iter()
            .rev()
            .find(|(x, _)| x == v.as_str())
            .expect("bound")
            .1
    };
    match f {
        Formula::True => true,
        Formula::False => false,
        Formula::Lt(a, b) => val(env, a) < val(env, b),
        Formula::Eq(a, b) => val(env, a) == val(env, b),
        Formula::Not(g) => !tarski(n, g, env),
        Formula::And(a, b) => tarski(n, a, env) && tarski(n, b, env),
        Formula::Or(a, b) => tarski(n, a, env) || tarski(n, b, env),
        Formula::Implies(a, b) => !tarski(n, a, env) || tarski(n, b, env),
        Formula::Iff(a, b) => tarski(n, a, env) == tarski(n, b, env),
        Formula::Forall(v, g) | Formula::Exists(v, g) => {
            let universal = matches!(f, Formula::Forall(..));
            for e in 0..n {
                env.push((v.as_str().to_string(), e));
                let r = tarski(n, g, env);
                env.pop();
                if r != universal {
                    return r;
                }
            }
            universal
        }
    }
}
