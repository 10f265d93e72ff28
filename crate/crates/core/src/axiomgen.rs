//! Sentences axiomatizing the theory of each ordinal below ω^ω, and
//! instances of the transfinite induction schema.
//!
//! `T_1` says there is at most one element; `T_ω` says there is a least
//! element, every element has an immediate successor, and every
//! non-minimal element has an immediate predecessor. Sums are handled by
//! cutting the order at a point `x` and relativizing the two summands to
//! `(-inf, x)` and `[x, inf)`. For a limit `α`, `T_{ω·α}` relativizes `T_α`
//! to the non-successor points and asks that every point sits in a block
//! between two consecutive non-successor points.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::formula::{fresh_var, relativize, Formula, Guard, Var};
use crate::ordinal::Ordinal;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AxiomError {
    #[error("the empty order has no axiomatization under the nonempty convention")]
    Zero,
    #[error("induction formula has parameters other than `{param}`: {}", .extra.join(", "))]
    Parameters { param: String, extra: Vec<String> },
    #[error("induction formula has more than one free variable: {}", .0.join(", "))]
    AmbiguousParameter(Vec<String>),
    #[error("schema variables must be distinct")]
    SameVariable,
    #[error("malformed construction trace at step {0}")]
    BadTrace(usize),
}

/// How to read the non-successor formula λ(x).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LambdaReading {
    /// `forall y (y < x -> exists z (z < x & y < z))`
    #[default]
    Corrected,
    /// `forall y (y < x -> exists z (z < x & y < x))`, true at every point.
    Literal,
}

/// How finite summands are built.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FiniteForm {
    /// Iterated sums of `T_1`.
    #[default]
    IteratedSum,
    /// One "exactly n elements" sentence.
    Direct,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct AxiomOptions {
    pub lambda: LambdaReading,
    pub finite: FiniteForm,
}

/// One step of a construction, in postfix order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rule {
    One,
    Omega,
    /// Direct sentence for a finite order of this size.
    Finite(u64),
    Sum,
    LimitMult,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rule::One => f.write_str("T_1"),
            Rule::Omega => f.write_str("T_w"),
            Rule::Finite(n) => write!(f, "T_{n}(direct)"),
            Rule::Sum => f.write_str("sum"),
            Rule::LimitMult => f.write_str("w-mult-limit"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomResult {
    pub sentence: Formula,
    pub rank: usize,
    pub trace: Vec<Rule>,
}

fn v(s: &str) -> Var {
    Var::new(s)
}

/// `forall x forall y (x = y)`
pub fn t_one() -> Formula {
    let (x, y) = (v("x"), v("y"));
    Formula::forall(&x, Formula::forall(&y, Formula::eq(&x, &y)))
}

/// Least element, immediate successors, immediate predecessors of
/// non-minimal points.
pub fn t_omega() -> Formula {
    let (x, y, z) = (v("x"), v("y"), v("z"));
    let least = Formula::exists(
        &x,
        Formula::forall(&y, Formula::eq(&x, &y).or(Formula::lt(&x, &y))),
    );
    let successor = Formula::forall(
        &x,
        Formula::exists(
            &y,
            Formula::lt(&x, &y).and(Formula::forall(
                &z,
                Formula::lt(&x, &z).implies(Formula::eq(&y, &z).or(Formula::lt(&y, &z))),
            )),
        ),
    );
    let predecessor = Formula::forall(
        &x,
        Formula::exists(&y, Formula::lt(&y, &x)).implies(Formula::exists(
            &y,
            Formula::lt(&y, &x).and(Formula::forall(
                &z,
                Formula::lt(&z, &x).implies(Formula::eq(&z, &y).or(Formula::lt(&z, &y))),
            )),
        )),
    );
    Formula::conjunction([least, successor, predecessor])
}

/// `exists x1 ... exists xn (x1 < ... < xn & forall y (y = x1 | ... | y = xn))`
pub fn t_finite_direct(n: u64) -> Formula {
    let xs: Vec<Var> = (1..=n).map(|i| Var::new(format!("x{i}"))).collect();
    let y = v("y");
    let chain = Formula::conjunction(xs.windows(2).map(|w| Formula::lt(&w[0], &w[1])));
    let cover = Formula::forall(
        &y,
        Formula::disjunction(xs.iter().map(|x| Formula::eq(&y, x))),
    );
    let body = if n >= 2 { chain.and(cover) } else { cover };
    xs.iter().rev().fold(body, |acc, x| Formula::exists(x, acc))
}

/// λ(x): x is not a successor, i.e. the minimum or a limit point.
pub fn lambda_formula(x: &Var) -> Formula {
    lambda_formula_with(x, LambdaReading::Corrected)
}

pub fn lambda_formula_with(x: &Var, reading: LambdaReading) -> Formula {
    let used = BTreeSet::from([x.clone()]);
    let y = fresh_var(&v("y"), &used);
    let mut used = used;
    used.insert(y.clone());
    let z = fresh_var(&v("z"), &used);
    let inner = match reading {
        LambdaReading::Corrected => Formula::lt(&y, &z),
        LambdaReading::Literal => Formula::lt(&y, x),
    };
    Formula::forall(
        &y,
        Formula::lt(&y, x).implies(Formula::exists(&z, Formula::lt(&z, x).and(inner))),
    )
}

fn vars_of(fs: &[&Formula]) -> BTreeSet<Var> {
    fs.iter().flat_map(|f| f.all_variables()).collect()
}

/// `exists x (exists y (y < x) & A^{<x} & B^{>=x})`. The middle conjunct
/// keeps the left part nonempty; a sentence such as `T_1` is also true in
/// the empty order.
pub fn sum_rule(left: &Formula, right: &Formula) -> Formula {
    let used = vars_of(&[left, right]);
    let x = fresh_var(&v("x"), &used);
    let mut used = used;
    used.insert(x.clone());
    let y = fresh_var(&v("y"), &used);
    let nonempty = Formula::exists(&y, Formula::lt(&y, &x));
    let below = relativize(left, &Guard::Below(x.clone())).formula;
    let above = relativize(right, &Guard::AtLeast(x.clone())).formula;
    Formula::exists(&x, Formula::conjunction([nonempty, below, above]))
}

/// `T_{ω·α}` from `T_α` for a limit `α`.
pub fn limit_rule(inner: &Formula, reading: LambdaReading) -> Formula {
    let used = inner.all_variables();
    let hole = fresh_var(&v("h"), &used);
    let guard = Guard::Pred {
        hole: hole.clone(),
        body: lambda_formula_with(&hole, reading),
    };
    let relativized = relativize(inner, &guard).formula;
    let (x, y, z) = (v("x"), v("y"), v("z"));
    let lam = |u: &Var| lambda_formula_with(u, reading);
    // max { y <= x : λ(y) } exists
    let block_start = Formula::forall(
        &x,
        Formula::exists(
            &y,
            Formula::conjunction([
                Formula::le(&y, &x),
                lam(&y),
                Formula::forall(
                    &z,
                    Formula::le(&z, &x)
                        .and(lam(&z))
                        .implies(Formula::le(&z, &y)),
                ),
            ]),
        ),
    );
    // min { y > x : λ(y) } exists
    let next_start = Formula::forall(
        &x,
        Formula::exists(
            &y,
            Formula::conjunction([
                Formula::lt(&x, &y),
                lam(&y),
                Formula::forall(
                    &z,
                    Formula::lt(&x, &z)
                        .and(lam(&z))
                        .implies(Formula::le(&y, &z)),
                ),
            ]),
        ),
    );
    Formula::conjunction([relativized, block_start, next_start])
}

struct Part {
    formula: Formula,
    trace: Vec<Rule>,
    rank: usize,
}

impl Part {
    fn leaf(formula: Formula, rule: Rule) -> Self {
        let rank = formula.quantifier_rank();
        Part {
            formula,
            trace: vec![rule],
            rank,
        }
    }
}

/// `T_α` with default options.
pub fn t_alpha(a: &Ordinal) -> Result<AxiomResult, AxiomError> {
    t_alpha_with(a, AxiomOptions::default())
}

/// Writes `a = ω·β + n` and `β = δ + m` with `δ` zero or a limit, forms the
/// summands `T_{ω·δ}` (limit rule on `T_δ`), `m` copies of `T_ω` and the
/// finite part, and joins adjacent summands, cheapest rank first.
pub fn t_alpha_with(a: &Ordinal, opts: AxiomOptions) -> Result<AxiomResult, AxiomError> {
    if a.is_zero() {
        return Err(AxiomError::Zero);
    }
    let part = build(a, opts);
    Ok(AxiomResult {
        rank: part.formula.quantifier_rank(),
        sentence: part.formula,
        trace: part.trace,
    })
}

fn build(a: &Ordinal, opts: AxiomOptions) -> Part {
    let (beta, n) = a.split_limit_finite();
    let mut parts = Vec::new();
    if !beta.is_zero() {
        // beta = delta + m with delta = ω·d zero or a limit
        let (d, m) = beta.split_limit_finite();
        let delta = d.mul_omega_left();
        if !delta.is_zero() {
            let inner = build(&delta, opts);
            let formula = limit_rule(&inner.formula, opts.lambda);
            let mut trace = inner.trace;
            trace.push(Rule::LimitMult);
            let rank = formula.quantifier_rank();
            parts.push(Part {
                formula,
                trace,
                rank,
            });
        }
        for _ in 0..m {
            parts.push(Part::leaf(t_omega(), Rule::Omega));
        }
    }
    match opts.finite {
        FiniteForm::IteratedSum => {
            for _ in 0..n {
                parts.push(Part::leaf(t_one(), Rule::One));
            }
        }
        FiniteForm::Direct if n > 0 => parts.push(Part::leaf(t_finite_direct(n), Rule::Finite(n))),
        FiniteForm::Direct => {}
    }
    join(parts)
}

fn join(mut parts: Vec<Part>) -> Part {
    assert!(!parts.is_empty());
    while parts.len() > 1 {
        let i = (0..parts.len() - 1)
            .min_by_key(|&i| parts[i].rank.max(parts[i + 1].rank))
            .expect("two parts");
        let right = parts.remove(i + 1);
        let left = parts.remove(i);
        let formula = sum_rule(&left.formula, &right.formula);
        let mut trace = left.trace;
        trace.extend(right.trace);
        trace.push(Rule::Sum);
        let rank = formula.quantifier_rank();
        parts.insert(
            i,
            Part {
                formula,
                trace,
                rank,
            },
        );
    }
    parts.pop().unwrap()
}

/// Rebuilds a sentence from its construction trace.
pub fn replay(trace: &[Rule], opts: AxiomOptions) -> Result<Formula, AxiomError> {
    let mut stack: Vec<Formula> = Vec::new();
    for (i, rule) in trace.iter().enumerate() {
        let f = match rule {
            Rule::One => t_one(),
            Rule::Omega => t_omega(),
            Rule::Finite(n) => t_finite_direct(*n),
            Rule::Sum => {
                let b = stack.pop().ok_or(AxiomError::BadTrace(i))?;
                let a = stack.pop().ok_or(AxiomError::BadTrace(i))?;
                sum_rule(&a, &b)
            }
            Rule::LimitMult => {
                let a = stack.pop().ok_or(AxiomError::BadTrace(i))?;
                limit_rule(&a, opts.lambda)
            }
        };
        stack.push(f);
    }
    match (stack.pop(), stack.is_empty()) {
        (Some(f), true) => Ok(f),
        _ => Err(AxiomError::BadTrace(trace.len())),
    }
}

/// `forall x (forall y (y < x -> φ(y)) -> φ(x)) -> forall x φ(x)`, where
/// the induction variable of `phi` is its free variable (if any).
pub fn ti_instance(phi: &Formula, x: &Var, y: &Var) -> Result<Formula, AxiomError> {
    let free = phi.free_variables();
    let param = match free.len() {
        0 => x.clone(),
        1 => free.into_iter().next().unwrap(),
        _ => {
            return Err(AxiomError::AmbiguousParameter(
                free.iter().map(|v| v.to_string()).collect(),
            ))
        }
    };
    ti_instance_for(phi, &param, x, y)
}

/// Schema instance for `phi` with designated variable `param`.
pub fn ti_instance_for(
    phi: &Formula,
    param: &Var,
    x: &Var,
    y: &Var,
) -> Result<Formula, AxiomError> {
    if x == y {
        return Err(AxiomError::SameVariable);
    }
    let extra: Vec<String> = phi
        .free_variables()
        .iter()
        .filter(|v| *v != param)
        .map(|v| v.to_string())
        .collect();
    if !extra.is_empty() {
        return Err(AxiomError::Parameters {
            param: param.to_string(),
            extra,
        });
    }
    let at_x = phi.substitute(param, x);
    let at_y = phi.substitute(param, y);
    let step = Formula::forall(
        x,
        Formula::forall(y, Formula::lt(y, x).implies(at_y)).implies(at_x.clone()),
    );
    Ok(step.implies(Formula::forall(x, at_x)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_formula;

    fn o(s: &str) -> Ordinal {
        s.parse().unwrap()
    }

    fn p(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    #[test]
    fn base_sentences() {
        assert_eq!(t_one().to_string(), "forall x forall y (x = y)");
        let r = t_alpha(&o("1")).unwrap();
        assert_eq!(r.sentence, t_one());
        assert_eq!(r.trace, vec![Rule::One]);
        let w = t_alpha(&o("w")).unwrap();
        assert_eq!(w.sentence, t_omega());
        assert_eq!(w.rank, 3);
        assert_eq!(
            t_omega(),
            p("(exists x forall y (x = y | x < y)) \
               & (forall x exists y (x < y & forall z (x < z -> y = z | y < z))) \
               & (forall x ((exists y (y < x)) -> exists y (y < x & forall z (z < x -> z = y | z < y))))")
        );
        assert_eq!(t_alpha(&Ordinal::zero()), Err(AxiomError::Zero));
    }

    #[test]
    fn omega_plus_two_shape() {
        let r = t_alpha(&o("w + 2")).unwrap();
        assert_eq!(
            r.trace,
            vec![Rule::Omega, Rule::One, Rule::One, Rule::Sum, Rule::Sum]
        );
        let t2 = sum_rule(&t_one(), &t_one());
        assert_eq!(r.sentence, sum_rule(&t_omega(), &t2));
        assert_eq!(r.rank, r.sentence.quantifier_rank());
    }

    #[test]
    fn sum_rule_shape() {
        let s = sum_rule(&t_one(), &t_one());
        assert_eq!(
            s,
            p("exists x1 ((exists y1 (y1 < x1)) \
               & (forall x (x < x1 -> forall y (y < x1 -> x = y))) \
               & (forall x ((x1 = x | x1 < x) -> forall y ((x1 = y | x1 < y) -> x = y))))")
        );
    }

    #[test]
    fn limit_assembly() {
        let r = t_alpha(&o("w^2")).unwrap();
        assert_eq!(r.trace, vec![Rule::Omega, Rule::LimitMult]);
        let r = t_alpha(&o("w^2 + w*3 + 2")).unwrap();
        assert_eq!(r.trace.iter().filter(|&&x| x == Rule::Omega).count(), 4);
        assert_eq!(r.trace.iter().filter(|&&x| x == Rule::One).count(), 2);
        assert_eq!(r.trace.iter().filter(|&&x| x == Rule::LimitMult).count(), 1);
        // w^3 = w·w^2: limit rule applied twice
        let r = t_alpha(&o("w^3")).unwrap();
        assert_eq!(r.trace, vec![Rule::Omega, Rule::LimitMult, Rule::LimitMult]);
        // w^2·2 = w·(w·2): the inner w·2 is a limit built by the sum rule
        let r = t_alpha(&o("w^2*2")).unwrap();
        assert_eq!(
            r.trace,
            vec![Rule::Omega, Rule::Omega, Rule::Sum, Rule::LimitMult]
        );
    }

    #[test]
    fn traces_replay() {
        for a in [
            "1",
            "2",
            "3",
            "w",
            "w + 1",
            "w*2",
            "w^2",
            "w^2 + w*3 + 2",
            "w^3*2 + w + 4",
        ] {
            for opts in [
                AxiomOptions::default(),
                AxiomOptions {
                    finite: FiniteForm::Direct,
                    ..Default::default()
                },
                AxiomOptions {
                    lambda: LambdaReading::Literal,
                    ..Default::default()
                },
            ] {
                let r = t_alpha_with(&o(a), opts).unwrap();
                assert_eq!(replay(&r.trace, opts).unwrap(), r.sentence, "{a}");
                assert_eq!(r.rank, r.sentence.quantifier_rank());
                assert!(r.sentence.is_sentence());
            }
        }
        assert_eq!(
            replay(&[Rule::Sum], AxiomOptions::default()),
            Err(AxiomError::BadTrace(0))
        );
        assert_eq!(
            replay(&[Rule::One, Rule::One], AxiomOptions::default()),
            Err(AxiomError::BadTrace(2))
        );
    }

    #[test]
    fn direct_finite_form() {
        assert_eq!(t_finite_direct(1), p("exists x1 forall y (y = x1)"));
        assert_eq!(
            t_finite_direct(2),
            p("exists x1 exists x2 (x1 < x2 & forall y (y = x1 | y = x2))")
        );
        let r = t_alpha_with(
            &o("w + 3"),
            AxiomOptions {
                finite: FiniteForm::Direct,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(r.trace, vec![Rule::Omega, Rule::Finite(3), Rule::Sum]);
    }

    #[test]
    fn lambda_readings() {
        assert_eq!(
            lambda_formula(&v("x")),
            p("forall y (y < x -> exists z (z < x & y < z))")
        );
        assert_eq!(
            lambda_formula_with(&v("x"), LambdaReading::Literal),
            p("forall y (y < x -> exists z (z < x & y < x))")
        );
        assert_eq!(
            lambda_formula(&v("y")),
            p("forall y1 (y1 < y -> exists z (z < y & y1 < z))")
        );
    }

    #[test]
    fn ti_examples() {
        let f = ti_instance(&Formula::False, &v("x"), &v("y")).unwrap();
        assert_eq!(
            f,
            p("(forall x ((forall y (y < x -> false)) -> false)) -> forall x false")
        );
        let phi = p("exists z (v < z)");
        let f = ti_instance(&phi, &v("x"), &v("y")).unwrap();
        assert!(f.is_sentence());
        assert_eq!(f.quantifier_rank(), 3);
        assert_eq!(
            f,
            p("(forall x ((forall y (y < x -> exists z (y < z))) -> exists z (x < z))) -> forall x exists z (x < z)")
        );
        assert!(matches!(
            ti_instance(&p("a < b"), &v("x"), &v("y")),
            Err(AxiomError::AmbiguousParameter(_))
        ));
        assert!(matches!(
            ti_instance_for(&p("a < b"), &v("a"), &v("x"), &v("y")),
            Err(AxiomError::Parameters { .. })
        ));
        assert_eq!(
            ti_instance(&phi, &v("x"), &v("x")),
            Err(AxiomError::SameVariable)
        );
    }

    #[test]
    fn ti_substitution_avoids_capture() {
        // the formula binds `y`, which is also the schema variable
        let phi = p("exists y (v < y)");
        let f = ti_instance(&phi, &v("x"), &v("y")).unwrap();
        assert!(f.is_sentence());
        assert_eq!(
            f,
            p("(forall x ((forall y (y < x -> exists y1 (y < y1))) -> exists y (x < y))) -> forall x exists y (x < y)")
        );
    }
}
