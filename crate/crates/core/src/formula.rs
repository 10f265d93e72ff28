//! First-order formulas over the single binary relation `<`.
//!
//! Surface syntax (lowest to highest precedence): `<->`, `->` (right
//! associative), `|`, `&`, `~`. Quantifiers `forall x φ` / `exists x φ`
//! extend as far right as possible. `x <= y` is sugar for `x < y | x = y`.
//! Unicode `∀ ∃ ¬ ∧ ∨ → ↔ ≤ ⊤ ⊥` are accepted as aliases.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

/// A variable name: a nonempty ASCII identifier.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var(String);

impl Var {
    /// Panics if `name` is not a valid identifier.
    pub fn new(name: impl Into<String>) -> Self {
        let name = name.into();
        assert!(is_identifier(&name), "invalid variable name {name:?}");
        Var(name)
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl From<&str> for Var {
    fn from(s: &str) -> Self {
        Var::new(s)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
        && !KEYWORDS.contains(&s)
}

const KEYWORDS: [&str; 4] = ["forall", "exists", "true", "false"];

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    True,
    False,
    Lt(Var, Var),
    Eq(Var, Var),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Forall(Var, Box<Formula>),
    Exists(Var, Box<Formula>),
}

// Constructors. These keep call sites in the generators readable.
impl Formula {
    pub fn lt(x: &Var, y: &Var) -> Self {
        Formula::Lt(x.clone(), y.clone())
    }

    pub fn eq(x: &Var, y: &Var) -> Self {
        Formula::Eq(x.clone(), y.clone())
    }

    /// `x <= y`, desugared to `x < y | x = y`.
    pub fn le(x: &Var, y: &Var) -> Self {
        Formula::lt(x, y).or(Formula::eq(x, y))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(self) -> Self {
        Formula::Not(Box::new(self))
    }

    pub fn and(self, other: Formula) -> Self {
        Formula::And(Box::new(self), Box::new(other))
    }

    pub fn or(self, other: Formula) -> Self {
        Formula::Or(Box::new(self), Box::new(other))
    }

    pub fn implies(self, other: Formula) -> Self {
        Formula::Implies(Box::new(self), Box::new(other))
    }

    pub fn iff(self, other: Formula) -> Self {
        Formula::Iff(Box::new(self), Box::new(other))
    }

    pub fn forall(v: &Var, body: Formula) -> Self {
        Formula::Forall(v.clone(), Box::new(body))
    }

    pub fn exists(v: &Var, body: Formula) -> Self {
        Formula::Exists(v.clone(), Box::new(body))
    }

    /// Left-nested conjunction; `true` when empty.
    pub fn conjunction(parts: impl IntoIterator<Item = Formula>) -> Self {
        parts
            .into_iter()
            .reduce(Formula::and)
            .unwrap_or(Formula::True)
    }

    /// Left-nested disjunction; `false` when empty.
    pub fn disjunction(parts: impl IntoIterator<Item = Formula>) -> Self {
        parts
            .into_iter()
            .reduce(Formula::or)
            .unwrap_or(Formula::False)
    }
}

impl Formula {
    /// Maximum nesting depth of quantifiers.
    pub fn quantifier_rank(&self) -> usize {
        match self {
            Formula::True | Formula::False | Formula::Lt(..) | Formula::Eq(..) => 0,
            Formula::Not(a) => a.quantifier_rank(),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Iff(a, b) => a.quantifier_rank().max(b.quantifier_rank()),
            Formula::Forall(_, b) | Formula::Exists(_, b) => 1 + b.quantifier_rank(),
        }
    }

    pub fn free_variables(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<Var>, out: &mut BTreeSet<Var>) {
        match self {
            Formula::True | Formula::False => {}
            Formula::Lt(x, y) | Formula::Eq(x, y) => {
                for v in [x, y] {
                    if !bound.contains(v) {
                        out.insert(v.clone());
                    }
                }
            }
            Formula::Not(a) => a.collect_free(bound, out),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Iff(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Forall(v, b) | Formula::Exists(v, b) => {
                bound.push(v.clone());
                b.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    pub fn is_sentence(&self) -> bool {
        self.free_variables().is_empty()
    }

    /// Every variable name occurring in the formula, bound or free.
    pub fn all_variables(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.visit_vars(&mut |v| {
            out.insert(v.clone());
        });
        out
    }

    fn visit_vars(&self, f: &mut impl FnMut(&Var)) {
        match self {
            Formula::True | Formula::False => {}
            Formula::Lt(x, y) | Formula::Eq(x, y) => {
                f(x);
                f(y);
            }
            Formula::Not(a) => a.visit_vars(f),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Iff(a, b) => {
                a.visit_vars(f);
                b.visit_vars(f);
            }
            Formula::Forall(v, b) | Formula::Exists(v, b) => {
                f(v);
                b.visit_vars(f);
            }
        }
    }

    pub fn has_quantifier(&self) -> bool {
        self.quantifier_rank() > 0
    }

    /// Capture-avoiding substitution of the variable `to` for free
    /// occurrences of `from`.
    pub fn substitute(&self, from: &Var, to: &Var) -> Formula {
        if from == to {
            return self.clone();
        }
        match self {
            Formula::True | Formula::False => self.clone(),
            Formula::Lt(x, y) => Formula::Lt(swap(x, from, to), swap(y, from, to)),
            Formula::Eq(x, y) => Formula::Eq(swap(x, from, to), swap(y, from, to)),
            Formula::Not(a) => a.substitute(from, to).not(),
            Formula::And(a, b) => a.substitute(from, to).and(b.substitute(from, to)),
            Formula::Or(a, b) => a.substitute(from, to).or(b.substitute(from, to)),
            Formula::Implies(a, b) => a.substitute(from, to).implies(b.substitute(from, to)),
            Formula::Iff(a, b) => a.substitute(from, to).iff(b.substitute(from, to)),
            Formula::Forall(v, b) | Formula::Exists(v, b) => {
                let is_forall = matches!(self, Formula::Forall(..));
                let rebuild = |v: &Var, b: Formula| {
                    if is_forall {
                        Formula::forall(v, b)
                    } else {
                        Formula::exists(v, b)
                    }
                };
                if v == from || !b.free_variables().contains(from) {
                    return self.clone();
                }
                if v == to {
                    let mut avoid = b.all_variables();
                    avoid.insert(from.clone());
                    avoid.insert(to.clone());
                    let fresh = fresh_var(v, &avoid);
                    let renamed = b.substitute(v, &fresh);
                    rebuild(&fresh, renamed.substitute(from, to))
                } else {
                    rebuild(v, b.substitute(from, to))
                }
            }
        }
    }

    /// Renames bound variables that belong to `avoid`, using the
    /// deterministic `name<N>` scheme.
    pub fn rename_bound(&self, avoid: &BTreeSet<Var>) -> Formula {
        match self {
            Formula::True | Formula::False | Formula::Lt(..) | Formula::Eq(..) => self.clone(),
            Formula::Not(a) => a.rename_bound(avoid).not(),
            Formula::And(a, b) => a.rename_bound(avoid).and(b.rename_bound(avoid)),
            Formula::Or(a, b) => a.rename_bound(avoid).or(b.rename_bound(avoid)),
            Formula::Implies(a, b) => a.rename_bound(avoid).implies(b.rename_bound(avoid)),
            Formula::Iff(a, b) => a.rename_bound(avoid).iff(b.rename_bound(avoid)),
            Formula::Forall(v, b) | Formula::Exists(v, b) => {
                let body = b.rename_bound(avoid);
                let (v, body) = if avoid.contains(v) {
                    let mut used = body.all_variables();
                    used.extend(avoid.iter().cloned());
                    let fresh = fresh_var(v, &used);
                    let body = body.substitute(v, &fresh);
                    (fresh, body)
                } else {
                    (v.clone(), body)
                };
                if matches!(self, Formula::Forall(..)) {
                    Formula::forall(&v, body)
                } else {
                    Formula::exists(&v, body)
                }
            }
        }
    }

    /// Prints with every binary connective parenthesized.
    pub fn to_string_full(&self) -> String {
        let mut s = String::new();
        write_full(self, &mut s);
        s
    }

    /// Folds `true`/`false` through the connectives.
    pub fn fold_constants(&self) -> Formula {
        use Formula::*;
        match self {
            True | False | Lt(..) | Eq(..) => self.clone(),
            Not(a) => match a.fold_constants() {
                True => False,
                False => True,
                a => a.not(),
            },
            And(a, b) => match (a.fold_constants(), b.fold_constants()) {
                (False, _) | (_, False) => False,
                (True, x) | (x, True) => x,
                (a, b) => a.and(b),
            },
            Or(a, b) => match (a.fold_constants(), b.fold_constants()) {
                (True, _) | (_, True) => True,
                (False, x) | (x, False) => x,
                (a, b) => a.or(b),
            },
            Implies(a, b) => match (a.fold_constants(), b.fold_constants()) {
                (False, _) | (_, True) => True,
                (True, x) => x,
                (a, False) => a.not(),
                (a, b) => a.implies(b),
            },
            Iff(a, b) => match (a.fold_constants(), b.fold_constants()) {
                (True, x) | (x, True) => x,
                (False, False) => True,
                (a, b) => a.iff(b),
            },
            Forall(v, b) => Formula::forall(v, b.fold_constants()),
            Exists(v, b) => Formula::exists(v, b.fold_constants()),
        }
    }
}

fn swap(x: &Var, from: &Var, to: &Var) -> Var {
    if x == from {
        to.clone()
    } else {
        x.clone()
    }
}

/// `base` itself if unused, otherwise `base` with the smallest numeric
/// suffix that avoids `used`.
pub fn fresh_var(base: &Var, used: &BTreeSet<Var>) -> Var {
    let stem = base.as_str().trim_end_matches(|c: char| c.is_ascii_digit());
    let stem = if stem.is_empty() || stem.ends_with('_') {
        base.as_str()
    } else {
        stem
    };
    if !used.contains(base) {
        return base.clone();
    }
    (1..)
        .map(|i| Var(format!("{stem}{i}")))
        .find(|v| !used.contains(v))
        .expect("unbounded suffix search")
}

// ----------------------------------------------------------------------------
// relativization

/// The set that quantifiers get restricted to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Guard {
    /// `(-inf, x)`
    Below(Var),
    /// `[x, inf)`
    AtLeast(Var),
    /// `[x, y)`
    Interval(Var, Var),
    /// `{ v : body(v) }`, where `hole` is the only free variable of `body`.
    Pred { hole: Var, body: Formula },
}

impl Guard {
    fn variables(&self) -> BTreeSet<Var> {
        match self {
            Guard::Below(x) | Guard::AtLeast(x) => BTreeSet::from([x.clone()]),
            Guard::Interval(x, y) => BTreeSet::from([x.clone(), y.clone()]),
            Guard::Pred { body, hole } => {
                let mut fv = body.free_variables();
                fv.remove(hole);
                fv
            }
        }
    }

    /// The membership condition for `v`.
    pub fn condition(&self, v: &Var) -> Formula {
        match self {
            Guard::Below(x) => Formula::lt(v, x),
            Guard::AtLeast(x) => Formula::eq(x, v).or(Formula::lt(x, v)),
            Guard::Interval(x, y) => Formula::eq(x, v)
                .or(Formula::lt(x, v))
                .and(Formula::lt(v, y)),
            Guard::Pred { hole, body } => body.substitute(hole, v),
        }
    }

    pub fn rank(&self) -> usize {
        match self {
            Guard::Pred { body, .. } => body.quantifier_rank(),
            _ => 0,
        }
    }
}

/// Result of [`relativize`]: the formula plus its quantifier rank.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relativized {
    pub formula: Formula,
    pub rank: usize,
}

/// Restricts every quantifier of `f` to the set described by `guard`:
/// `exists v b` becomes `exists v (g(v) & b)` and `forall v b` becomes
/// `forall v (g(v) -> b)`. Bound variables clashing with the guard's
/// variables are renamed first.
pub fn relativize(f: &Formula, guard: &Guard) -> Relativized {
    let f = f.rename_bound(&guard.variables());
    let formula = relativize_inner(&f, guard);
    let rank = formula.quantifier_rank();
    debug_assert_eq!(rank, relativized_rank(&f, guard.rank()));
    Relativized { formula, rank }
}

fn relativize_inner(f: &Formula, guard: &Guard) -> Formula {
    match f {
        Formula::True | Formula::False | Formula::Lt(..) | Formula::Eq(..) => f.clone(),
        Formula::Not(a) => relativize_inner(a, guard).not(),
        Formula::And(a, b) => relativize_inner(a, guard).and(relativize_inner(b, guard)),
        Formula::Or(a, b) => relativize_inner(a, guard).or(relativize_inner(b, guard)),
        Formula::Implies(a, b) => relativize_inner(a, guard).implies(relativize_inner(b, guard)),
        Formula::Iff(a, b) => relativize_inner(a, guard).iff(relativize_inner(b, guard)),
        Formula::Exists(v, b) => {
            Formula::exists(v, guard.condition(v).and(relativize_inner(b, guard)))
        }
        Formula::Forall(v, b) => {
            Formula::forall(v, guard.condition(v).implies(relativize_inner(b, guard)))
        }
    }
}

/// Rank of `f` relativized to a guard of rank `guard_rank`: each quantifier
/// contributes `1 + max(guard_rank, rank of the relativized body)`.
pub fn relativized_rank(f: &Formula, guard_rank: usize) -> usize {
    match f {
        Formula::True | Formula::False | Formula::Lt(..) | Formula::Eq(..) => 0,
        Formula::Not(a) => relativized_rank(a, guard_rank),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
            relativized_rank(a, guard_rank).max(relativized_rank(b, guard_rank))
        }
        Formula::Forall(_, b) | Formula::Exists(_, b) => {
            1 + guard_rank.max(relativized_rank(b, guard_rank))
        }
    }
}

// ----------------------------------------------------------------------------
// printing

const PREC_QUANT: u8 = 0;
const PREC_IFF: u8 = 1;
const PREC_IMP: u8 = 2;
const PREC_OR: u8 = 3;
const PREC_AND: u8 = 4;
const PREC_NOT: u8 = 5;
const PREC_ATOM: u8 = 6;

fn precedence(f: &Formula) -> u8 {
    match f {
        Formula::Forall(..) | Formula::Exists(..) => PREC_QUANT,
        Formula::Iff(..) => PREC_IFF,
        Formula::Implies(..) => PREC_IMP,
        Formula::Or(..) => PREC_OR,
        Formula::And(..) => PREC_AND,
        Formula::Not(..) => PREC_NOT,
        _ => PREC_ATOM,
    }
}

fn write_min(f: &Formula, out: &mut String) {
    match f {
        Formula::True => out.push_str("true"),
        Formula::False => out.push_str("false"),
        Formula::Lt(x, y) => {
            out.push_str(&format!("{x} < {y}"));
        }
        Formula::Eq(x, y) => {
            out.push_str(&format!("{x} = {y}"));
        }
        Formula::Not(a) => {
            out.push('~');
            write_operand(a, precedence(a) >= PREC_NOT, out);
        }
        Formula::And(a, b) => write_binary(a, b, " & ", PREC_AND, out),
        Formula::Or(a, b) => write_binary(a, b, " | ", PREC_OR, out),
        Formula::Iff(a, b) => write_binary(a, b, " <-> ", PREC_IFF, out),
        Formula::Implies(a, b) => {
            // right associative
            write_operand(a, precedence(a) > PREC_IMP, out);
            out.push_str(" -> ");
            write_operand(b, precedence(b) >= PREC_IMP, out);
        }
        Formula::Forall(v, b) | Formula::Exists(v, b) => {
            out.push_str(if matches!(f, Formula::Forall(..)) {
                "forall "
            } else {
                "exists "
            });
            out.push_str(v.as_str());
            out.push(' ');
            let bare = matches!(
                **b,
                Formula::Forall(..) | Formula::Exists(..) | Formula::True | Formula::False
            );
            write_operand(b, bare, out);
        }
    }
}

// left-associative chains
fn write_binary(a: &Formula, b: &Formula, op: &str, prec: u8, out: &mut String) {
    write_operand(a, precedence(a) >= prec, out);
    out.push_str(op);
    write_operand(b, precedence(b) > prec, out);
}

fn write_operand(f: &Formula, bare: bool, out: &mut String) {
    if bare {
        write_min(f, out);
    } else {
        out.push('(');
        write_min(f, out);
        out.push(')');
    }
}

fn write_full(f: &Formula, out: &mut String) {
    let bin = |a: &Formula, b: &Formula, op: &str, out: &mut String| {
        out.push('(');
        write_full(a, out);
        out.push_str(op);
        write_full(b, out);
        out.push(')');
    };
    match f {
        Formula::True | Formula::False | Formula::Lt(..) | Formula::Eq(..) => write_min(f, out),
        Formula::Not(a) => {
            out.push('~');
            if precedence(a) >= PREC_NOT {
                write_full(a, out);
            } else {
                out.push('(');
                write_full(a, out);
                out.push(')');
            }
        }
        Formula::And(a, b) => bin(a, b, " & ", out),
        Formula::Or(a, b) => bin(a, b, " | ", out),
        Formula::Implies(a, b) => bin(a, b, " -> ", out),
        Formula::Iff(a, b) => bin(a, b, " <-> ", out),
        Formula::Forall(v, b) | Formula::Exists(v, b) => {
            out.push('(');
            out.push_str(if matches!(f, Formula::Forall(..)) {
                "forall "
            } else {
                "exists "
            });
            out.push_str(v.as_str());
            out.push(' ');
            write_full(b, out);
            out.push(')');
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        write_min(self, &mut s);
        f.write_str(&s)
    }
}

pub fn print_formula(f: &Formula) -> String {
    f.to_string()
}

// ----------------------------------------------------------------------------
// parsing

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("syntax error at end of input: {msg}")]
    UnexpectedEnd { msg: String },
    #[error("not a sentence: free variable(s) {}", .vars.join(", "))]
    Unbound { vars: Vec<String> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Forall,
    Exists,
    True,
    False,
    Ident(String),
    Not,
    And,
    Or,
    Imp,
    Iff,
    Lt,
    Le,
    Eq,
    LParen,
    RParen,
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let start = i;
        let tok = match c {
            c if c.is_whitespace() => {
                i += 1;
                continue;
            }
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '~' | '¬' | '!' => Tok::Not,
            '&' | '∧' => Tok::And,
            '|' | '∨' => Tok::Or,
            '=' => Tok::Eq,
            '→' => Tok::Imp,
            '↔' => Tok::Iff,
            '≤' => Tok::Le,
            '∀' => Tok::Forall,
            '∃' => Tok::Exists,
            '⊤' => Tok::True,
            '⊥' => Tok::False,
            '-' if chars.get(i + 1) == Some(&'>') => {
                i += 1;
                Tok::Imp
            }
            '<' if chars.get(i + 1) == Some(&'-') && chars.get(i + 2) == Some(&'>') => {
                i += 2;
                Tok::Iff
            }
            '<' if chars.get(i + 1) == Some(&'=') => {
                i += 1;
                Tok::Le
            }
            '<' => Tok::Lt,
            c if c.is_ascii_alphabetic() || c == '_' => {
                while i + 1 < chars.len()
                    && (chars[i + 1].is_ascii_alphanumeric() || chars[i + 1] == '_')
                {
                    i += 1;
                }
                let word: String = chars[start..=i].iter().collect();
                match word.as_str() {
                    "forall" => Tok::Forall,
                    "exists" => Tok::Exists,
                    "true" => Tok::True,
                    "false" => Tok::False,
                    _ => Tok::Ident(word),
                }
            }
            other => {
                return Err(ParseError::Syntax {
                    pos: start,
                    msg: format!("unexpected character {other:?}"),
                })
            }
        };
        i += 1;
        toks.push((start, tok));
    }
    Ok(toks)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    i: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.i).map(|(_, t)| t)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.i).map(|(_, t)| t.clone());
        self.i += 1;
        t
    }

    fn error(&self, msg: &str) -> ParseError {
        match self.toks.get(self.i) {
            Some((pos, _)) => ParseError::Syntax {
                pos: *pos,
                msg: msg.to_string(),
            },
            None => ParseError::UnexpectedEnd {
                msg: msg.to_string(),
            },
        }
    }

    fn ident(&mut self) -> Result<Var, ParseError> {
        match self.peek() {
            Some(Tok::Ident(name)) => {
                let v = Var(name.clone());
                self.i += 1;
                Ok(v)
            }
            _ => Err(self.error("expected a variable")),
        }
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Some(Tok::Forall) | Some(Tok::Exists) => {
                let quant = self.next();
                let v = self.ident()?;
                let body = self.formula()?;
                Ok(if quant == Some(Tok::Forall) {
                    Formula::forall(&v, body)
                } else {
                    Formula::exists(&v, body)
                })
            }
            _ => self.iff(),
        }
    }

    // Quantifiers may also start the right operand of a binary connective,
    // where they extend maximally right.
    fn operand(
        &mut self,
        next: fn(&mut Self) -> Result<Formula, ParseError>,
    ) -> Result<Formula, ParseError> {
        match self.peek() {
            Some(Tok::Forall) | Some(Tok::Exists) => self.formula(),
            _ => next(self),
        }
    }

    fn iff(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.imp()?;
        while self.peek() == Some(&Tok::Iff) {
            self.i += 1;
            let rhs = self.operand(Self::imp)?;
            lhs = lhs.iff(rhs);
        }
        Ok(lhs)
    }

    fn imp(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.or()?;
        if self.peek() == Some(&Tok::Imp) {
            self.i += 1;
            let rhs = self.operand(Self::imp)?;
            return Ok(lhs.implies(rhs));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.and()?;
        while self.peek() == Some(&Tok::Or) {
            self.i += 1;
            let rhs = self.operand(Self::and)?;
            lhs = lhs.or(rhs);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.neg()?;
        while self.peek() == Some(&Tok::And) {
            self.i += 1;
            let rhs = self.operand(Self::neg)?;
            lhs = lhs.and(rhs);
        }
        Ok(lhs)
    }

    fn neg(&mut self) -> Result<Formula, ParseError> {
        if self.peek() == Some(&Tok::Not) {
            self.i += 1;
            return Ok(self.operand(Self::neg)?.not());
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Some(Tok::LParen) => {
                self.i += 1;
                let f = self.formula()?;
                if self.peek() != Some(&Tok::RParen) {
                    return Err(self.error("expected `)`"));
                }
                self.i += 1;
                Ok(f)
            }
            Some(Tok::True) => {
                self.i += 1;
                Ok(Formula::True)
            }
            Some(Tok::False) => {
                self.i += 1;
                Ok(Formula::False)
            }
            Some(Tok::Ident(_)) => {
                let x = self.ident()?;
                let op = self.next();
                let y = match op {
                    Some(Tok::Lt) | Some(Tok::Eq) | Some(Tok::Le) => self.ident()?,
                    _ => {
                        self.i -= 1;
                        return Err(self.error("expected `<`, `=` or `<=`"));
                    }
                };
                Ok(match op {
                    Some(Tok::Lt) => Formula::Lt(x, y),
                    Some(Tok::Eq) => Formula::Eq(x, y),
                    _ => Formula::le(&x, &y),
                })
            }
            _ => Err(self.error("expected a formula")),
        }
    }
}

/// Parses a formula; free variables are allowed.
pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    let mut p = Parser {
        toks: lex(text)?,
        i: 0,
    };
    let f = p.formula()?;
    if p.i < p.toks.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(f)
}

/// Parses a formula and rejects it if it has free variables.
pub fn parse_sentence(text: &str) -> Result<Formula, ParseError> {
    let f = parse_formula(text)?;
    let free = f.free_variables();
    if !free.is_empty() {
        return Err(ParseError::Unbound {
            vars: free.into_iter().map(|v| v.0).collect(),
        });
    }
    Ok(f)
}

impl std::str::FromStr for Formula {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_formula(s)
    }
}
