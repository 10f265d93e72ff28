//! Ordinals below ω^ω in Cantor normal form.
//!
//! An [`Ordinal`] is a list of `(exponent, coefficient)` pairs with strictly
//! decreasing exponents and positive coefficients. The empty list is `0`.
//! The textual form uses `w` for ω, e.g. `w^2*3 + w + 5`; `ω` is accepted on
//! input as an alias.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrdinalError {
    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("coefficient must be positive (at {pos})")]
    ZeroCoefficient { pos: usize },
    #[error("exponents must be strictly decreasing; write the terms in canonical order, e.g. `{suggestion}`")]
    NotDecreasing { suggestion: String },
    #[error("0 has no product with w on the right")]
    Zero,
    #[error("arithmetic overflow")]
    Overflow,
}

/// One CNF term `ω^exponent · coefficient`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Term {
    pub exponent: u32,
    pub coefficient: u64,
}

/// An ordinal `< ω^ω` in Cantor normal form.
///
/// The derived ordering is lexicographic on the term list, which coincides
/// with the ordinal order for normal forms.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Ordinal {
    terms: Vec<Term>,
}

impl Ordinal {
    pub fn zero() -> Self {
        Ordinal { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Ordinal::finite(1)
    }

    pub fn omega() -> Self {
        Ordinal::omega_pow(1)
    }

    pub fn finite(n: u64) -> Self {
        if n == 0 {
            Ordinal::zero()
        } else {
            Ordinal {
                terms: vec![Term {
                    exponent: 0,
                    coefficient: n,
                }],
            }
        }
    }

    /// `ω^e`.
    pub fn omega_pow(e: u32) -> Self {
        Ordinal {
            terms: vec![Term {
                exponent: e,
                coefficient: 1,
            }],
        }
    }

    /// Builds an ordinal from `(exponent, coefficient)` pairs, checking the
    /// normal-form invariants.
    pub fn from_terms<I>(terms: I) -> Result<Self, OrdinalError>
    where
        I: IntoIterator<Item = (u32, u64)>,
    {
        let terms: Vec<Term> = terms
            .into_iter()
            .map(|(exponent, coefficient)| Term {
                exponent,
                coefficient,
            })
            .collect();
        if terms.iter().any(|t| t.coefficient == 0) {
            return Err(OrdinalError::ZeroCoefficient { pos: 0 });
        }
        if terms.windows(2).any(|w| w[0].exponent <= w[1].exponent) {
            return Err(OrdinalError::NotDecreasing {
                suggestion: canonical_suggestion(&terms),
            });
        }
        Ok(Ordinal { terms })
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn leading_exponent(&self) -> Option<u32> {
        self.terms.first().map(|t| t.exponent)
    }

    /// The coefficient of `ω^0`.
    pub fn finite_part(&self) -> u64 {
        match self.terms.last() {
            Some(t) if t.exponent == 0 => t.coefficient,
            _ => 0,
        }
    }

    /// Returns `Some(n)` when the ordinal is the natural number `n`.
    pub fn as_finite(&self) -> Option<u64> {
        match self.terms.as_slice() {
            [] => Some(0),
            [t] if t.exponent == 0 => Some(t.coefficient),
            _ => None,
        }
    }

    pub fn compare(&self, other: &Ordinal) -> Ordering {
        self.cmp(other)
    }

    /// Ordinal addition. Terms of `self` below the leading exponent of
    /// `other` are absorbed.
    pub fn add(&self, other: &Ordinal) -> Ordinal {
        self.checked_add(other)
            .expect("ordinal coefficient overflow")
    }

    pub fn checked_add(&self, other: &Ordinal) -> Result<Ordinal, OrdinalError> {
        let Some(lead) = other.terms.first() else {
            return Ok(self.clone());
        };
        let mut terms: Vec<Term> = self
            .terms
            .iter()
            .copied()
            .take_while(|t| t.exponent >= lead.exponent)
            .collect();
        let mut rest = other.terms.iter().copied();
        if let Some(last) = terms.last_mut() {
            if last.exponent == lead.exponent {
                last.coefficient = last
                    .coefficient
                    .checked_add(lead.coefficient)
                    .ok_or(OrdinalError::Overflow)?;
                rest.next();
            }
        }
        terms.extend(rest);
        Ok(Ordinal { terms })
    }

    /// `self · ω`, which is `ω^(e1 + 1)` for the leading exponent `e1`.
    pub fn mul_omega_right(&self) -> Result<Ordinal, OrdinalError> {
        let e = self.leading_exponent().ok_or(OrdinalError::Zero)?;
        Ok(Ordinal::omega_pow(
            e.checked_add(1).ok_or(OrdinalError::Overflow)?,
        ))
    }

    /// `ω · self`: every exponent shifts up by one.
    pub fn mul_omega_left(&self) -> Ordinal {
        Ordinal {
            terms: self
                .terms
                .iter()
                .map(|t| Term {
                    exponent: t
                        .exponent
                        .checked_add(1)
                        .expect("ordinal exponent overflow"),
                    coefficient: t.coefficient,
                })
                .collect(),
        }
    }

    /// Returns the unique `(beta, n)` with `self = ω·beta + n`.
    pub fn split_limit_finite(&self) -> (Ordinal, u64) {
        let n = self.finite_part();
        let beta = Ordinal {
            terms: self
                .terms
                .iter()
                .filter(|t| t.exponent > 0)
                .map(|t| Term {
                    exponent: t.exponent - 1,
                    coefficient: t.coefficient,
                })
                .collect(),
        };
        (beta, n)
    }

    pub fn successor(&self) -> Ordinal {
        self.add(&Ordinal::one())
    }

    pub fn is_limit(&self) -> bool {
        !self.is_zero() && self.finite_part() == 0
    }
}

impl fmt::Display for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write_term(f, *t)?;
        }
        Ok(())
    }
}

fn write_term(f: &mut impl fmt::Write, t: Term) -> fmt::Result {
    match (t.exponent, t.coefficient) {
        (0, c) => write!(f, "{c}"),
        (1, 1) => f.write_str("w"),
        (1, c) => write!(f, "w*{c}"),
        (e, 1) => write!(f, "w^{e}"),
        (e, c) => write!(f, "w^{e}*{c}"),
    }
}

fn canonical_suggestion(terms: &[Term]) -> String {
    let mut sorted = terms.to_vec();
    sorted.sort_by_key(|t| std::cmp::Reverse(t.exponent));
    let mut merged: Vec<Term> = Vec::new();
    for t in sorted {
        match merged.last_mut() {
            Some(last) if last.exponent == t.exponent => {
                last.coefficient = last.coefficient.saturating_add(t.coefficient)
            }
            _ => merged.push(t),
        }
    }
    let mut out = String::new();
    for (i, t) in merged.into_iter().filter(|t| t.coefficient > 0).enumerate() {
        if i > 0 {
            out.push_str(" + ");
        }
        let _ = write_term(&mut out, t);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

impl FromStr for Ordinal {
    type Err = OrdinalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_ordinal(s)
    }
}

/// Parses `ord := "0" | term ("+" term)*` with
/// `term := NAT | "w" ("^" NAT)? ("*" POSNAT)?`.
pub fn parse_ordinal(text: &str) -> Result<Ordinal, OrdinalError> {
    let mut p = OrdParser {
        chars: text.char_indices().collect(),
        i: 0,
    };
    p.skip_ws();
    if p.at_end() {
        return Err(p.error("expected an ordinal"));
    }
    let mut terms = Vec::new();
    let mut positions = Vec::new();
    loop {
        p.skip_ws();
        positions.push(p.pos());
        terms.push(p.term()?);
        p.skip_ws();
        if p.at_end() {
            break;
        }
        if !p.eat('+') {
            return Err(p.error("expected `+` or end of input"));
        }
    }
    // a lone "0" is the zero ordinal; zero terms inside a sum are rejected
    if terms.len() == 1 && terms[0].coefficient == 0 && terms[0].exponent == 0 {
        return Ok(Ordinal::zero());
    }
    if let Some(i) = terms.iter().position(|t| t.coefficient == 0) {
        return Err(OrdinalError::ZeroCoefficient { pos: positions[i] });
    }
    if terms.windows(2).any(|w| w[0].exponent <= w[1].exponent) {
        return Err(OrdinalError::NotDecreasing {
            suggestion: canonical_suggestion(&terms),
        });
    }
    Ok(Ordinal { terms })
}

struct OrdParser {
    chars: Vec<(usize, char)>,
    i: usize,
}

impl OrdParser {
    fn at_end(&self) -> bool {
        self.i >= self.chars.len()
    }

    fn pos(&self) -> usize {
        self.i
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.i).map(|&(_, c)| c)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.i += 1;
            true
        } else {
            false
        }
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.i += 1;
        }
    }

    fn error(&self, msg: &str) -> OrdinalError {
        let msg = if self.at_end() {
            format!("{msg} (at end of input)")
        } else {
            msg.to_string()
        };
        OrdinalError::Syntax { pos: self.i, msg }
    }

    fn nat(&mut self) -> Result<u64, OrdinalError> {
        let start = self.i;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.i += 1;
        }
        if start == self.i {
            return Err(self.error("expected a natural number"));
        }
        let digits: String = self.chars[start..self.i].iter().map(|&(_, c)| c).collect();
        digits.parse().map_err(|_| OrdinalError::Overflow)
    }

    fn term(&mut self) -> Result<Term, OrdinalError> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() => Ok(Term {
                exponent: 0,
                coefficient: self.nat()?,
            }),
            Some('w') | Some('ω') => {
                self.i += 1;
                self.skip_ws();
                let mut exponent = 1u32;
                if self.eat('^') {
                    self.skip_ws();
                    exponent = u32::try_from(self.nat()?).map_err(|_| OrdinalError::Overflow)?;
                    self.skip_ws();
                }
                let mut coefficient = 1u64;
                if self.eat('*') {
                    self.skip_ws();
                    let pos = self.pos();
                    coefficient = self.nat()?;
                    if coefficient == 0 {
                        return Err(OrdinalError::ZeroCoefficient { pos });
                    }
                }
                Ok(Term {
                    exponent,
                    coefficient,
                })
            }
            _ => Err(self.error("expected a natural number or `w`")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn o(s: &str) -> Ordinal {
        s.parse().unwrap()
    }

    fn pairs(a: &Ordinal) -> Vec<(u32, u64)> {
        a.terms()
            .iter()
            .map(|t| (t.exponent, t.coefficient))
            .collect()
    }

    #[test]
    fn parse_examples() {
        assert_eq!(pairs(&o("w^2*3 + w + 5")), vec![(2, 3), (1, 1), (0, 5)]);
        assert_eq!(o("0"), Ordinal::zero());
        assert!(matches!(
            parse_ordinal("w*0"),
            Err(OrdinalError::ZeroCoefficient { .. })
        ));
        assert_eq!(o("ω^2"), Ordinal::omega_pow(2));
        assert_eq!(o("w^0*3"), Ordinal::finite(3));
        assert_eq!(o("w^1"), Ordinal::omega());
    }

    #[test]
    fn parse_rejects_non_canonical_order() {
        let err = parse_ordinal("w + w^2").unwrap_err();
        assert!(matches!(err, OrdinalError::NotDecreasing { .. }));
        assert!(err.to_string().contains("w^2 + w"), "{err}");
        assert!(parse_ordinal("3 + 2").is_err());
        assert!(parse_ordinal("w + 0").is_err());
        assert!(parse_ordinal("").is_err());
        assert!(parse_ordinal("w +").is_err());
        assert!(parse_ordinal("v").is_err());
    }

    #[test]
    fn display_is_canonical() {
        for s in [
            "0",
            "1",
            "w",
            "w*3",
            "w^2",
            "w^2*3 + w + 5",
            "w^4 + w^2*2 + 7",
        ] {
            assert_eq!(o(s).to_string(), s);
        }
        assert_eq!(o("w^1*1 + w^0*2").to_string(), "w + 2");
    }

    #[test]
    fn compare_examples() {
        assert_eq!(o("w").compare(&o("w")), Ordering::Equal);
        assert_eq!(o("w*2 + 1").compare(&o("w^2")), Ordering::Less);
        assert_eq!(o("w + 3").compare(&o("w + 2")), Ordering::Greater);
        assert!(o("w") < o("w + 1"));
        assert!(o("7") < o("w"));
    }

    #[test]
    fn add_examples() {
        assert_eq!(o("w + 2").add(&o("w*3 + 1")), o("w*4 + 1"));
        assert_eq!(Ordinal::zero().add(&o("w + 1")), o("w + 1"));
        assert_eq!(o("w + 1").add(&Ordinal::zero()), o("w + 1"));
        assert_eq!(o("w^2 + w").add(&o("w^2")), o("w^2*2"));
        assert_eq!(o("3").add(&o("w")), o("w"));
    }

    #[test]
    fn omega_products() {
        assert_eq!(o("w^2*3 + w + 5").mul_omega_right().unwrap(), o("w^3"));
        assert_eq!(o("1").mul_omega_right().unwrap(), o("w"));
        assert_eq!(Ordinal::zero().mul_omega_right(), Err(OrdinalError::Zero));
        assert_eq!(o("w^2*3 + w + 5").mul_omega_left(), o("w^3*3 + w^2 + w*5"));
        assert_eq!(o("1").mul_omega_left(), o("w"));
        assert_eq!(Ordinal::zero().mul_omega_left(), Ordinal::zero());
    }

    #[test]
    fn split_and_successor() {
        assert_eq!(o("w^2 + w*3 + 2").split_limit_finite(), (o("w + 3"), 2));
        assert_eq!(o("7").split_limit_finite(), (Ordinal::zero(), 7));
        assert_eq!(o("w").split_limit_finite(), (o("1"), 0));
        assert_eq!(o("w").successor(), o("w + 1"));
        assert!(o("w^2").is_limit());
        assert!(!o("w + 1").is_limit());
        assert!(!Ordinal::zero().is_limit());
    }

    #[test]
    fn checked_arithmetic_reports_overflow() {
        let big = Ordinal::finite(u64::MAX);
        assert_eq!(
            big.checked_add(&Ordinal::one()),
            Err(OrdinalError::Overflow)
        );
        assert!(parse_ordinal("99999999999999999999999").is_err());
    }

    fn arb_ordinal() -> impl Strategy<Value = Ordinal> {
        proptest::collection::vec(0u64..=9, 6).prop_map(|coeffs| {
            Ordinal::from_terms(
                coeffs
                    .into_iter()
                    .enumerate()
                    .rev()
                    .filter(|&(_, c)| c > 0)
                    .map(|(e, c)| (e as u32, c)),
            )
            .unwrap()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(10_000))]

        #[test]
        fn add_is_associative(a in arb_ordinal(), b in arb_ordinal(), c in arb_ordinal()) {
            prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
        }

        #[test]
        fn add_does_not_decrease(a in arb_ordinal(), b in arb_ordinal()) {
            prop_assert_ne!(a.add(&b).compare(&a), Ordering::Less);
            prop_assert_eq!(a.add(&Ordinal::one()), a.successor());
        }

        #[test]
        fn split_inverts(a in arb_ordinal()) {
            let (beta, n) = a.split_limit_finite();
            prop_assert_eq!(beta.mul_omega_left().add(&Ordinal::finite(n)), a);
        }

        #[test]
        fn right_omega_product_is_single_term(a in arb_ordinal()) {
            prop_assume!(!a.is_zero());
            let p = a.mul_omega_right().unwrap();
            prop_assert_eq!(p.terms().len(), 1);
            prop_assert_eq!(p.terms()[0], Term { exponent: a.leading_exponent().unwrap() + 1, coefficient: 1 });
        }

        #[test]
        fn display_reparses(a in arb_ordinal()) {
            prop_assert_eq!(parse_ordinal(&a.to_string()).unwrap(), a);
        }
    }
}
