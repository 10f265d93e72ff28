//! Deciding sentences over all well orders.
//!
//! A sentence of rank `k` holds in every well order iff it holds in every
//! ordinal below ω^ω iff it is provable from transfinite induction. The
//! ordinals below ω^ω realize only finitely many level-k types, and that
//! set is the least one containing the singleton type and closed under
//! `sum` and `omega_mult`. [`Decider::decide`] checks the sentence on each
//! of those types and, on failure, reads a counterexample ordinal off the
//! derivation that produced the failing type.

use std::fmt;
use std::rc::Rc;
use std::time::{Duration, Instant};

use rustc_hash::FxHashMap;
use thiserror::Error;

use crate::evaluator::{EvalError, Evaluator};
use crate::formula::{Formula, Var};
use crate::ordinal::Ordinal;
use crate::typealg::{KType, TypeTable};

/// Expression over `0`, `1`, `+` and right multiplication by ω.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum BuildTerm {
    Zero,
    One,
    Sum(Rc<BuildTerm>, Rc<BuildTerm>),
    TimesOmega(Rc<BuildTerm>),
}

impl BuildTerm {
    /// The ordinal the term denotes.
    pub fn eval(&self) -> Ordinal {
        match self {
            BuildTerm::Zero => Ordinal::zero(),
            BuildTerm::One => Ordinal::one(),
            BuildTerm::Sum(a, b) => a.eval().add(&b.eval()),
            BuildTerm::TimesOmega(a) => {
                let a = a.eval();
                if a.is_zero() {
                    a
                } else {
                    a.mul_omega_right().expect("nonzero")
                }
            }
        }
    }

    pub fn size(&self) -> usize {
        match self {
            BuildTerm::Zero | BuildTerm::One => 1,
            BuildTerm::Sum(a, b) => 1 + a.size() + b.size(),
            BuildTerm::TimesOmega(a) => 1 + a.size(),
        }
    }
}

impl fmt::Display for BuildTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BuildTerm::Zero => f.write_str("0"),
            BuildTerm::One => f.write_str("1"),
            BuildTerm::Sum(a, b) => write!(f, "({a} + {b})"),
            BuildTerm::TimesOmega(a) => write!(f, "{a}*w"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ClosureEntry {
    pub ktype: KType,
    /// First derivation found.
    pub witness: Rc<BuildTerm>,
    pub depth: usize,
    /// `witness.eval()`, cached.
    pub ordinal: Ordinal,
}

/// The level-k types of ordinals below ω^ω, in discovery order.
#[derive(Debug, Clone)]
pub struct Closure {
    pub level: u32,
    pub allow_empty: bool,
    pub entries: Vec<ClosureEntry>,
    index: FxHashMap<KType, usize>,
}

impl Closure {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn contains(&self, t: KType) -> bool {
        self.index.contains_key(&t)
    }

    pub fn entry(&self, t: KType) -> Option<&ClosureEntry> {
        self.index.get(&t).map(|&i| &self.entries[i])
    }

    fn push(&mut self, ktype: KType, witness: Rc<BuildTerm>, depth: usize) -> bool {
        if self.index.contains_key(&ktype) {
            return false;
        }
        let ordinal = witness.eval();
        self.index.insert(ktype, self.entries.len());
        self.entries.push(ClosureEntry {
            ktype,
            witness,
            depth,
            ordinal,
        });
        true
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub max_time: Option<Duration>,
    /// Cap on the number of interned types in the table.
    pub max_types: usize,
    /// Highest closure level accepted.
    pub max_level: u32,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_time: Some(Duration::from_secs(120)),
            max_types: 1_000_000,
            max_level: 4,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Progress {
    pub level: u32,
    pub entries: usize,
    pub interned: usize,
    pub elapsed: Duration,
}

impl fmt::Display for Progress {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "level {}: {} closure entries, {} interned types after {:.1}s",
            self.level,
            self.entries,
            self.interned,
            self.elapsed.as_secs_f64()
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecideError {
    #[error("not a sentence: free variable(s) {}", .0.iter().map(|v| v.as_str()).collect::<Vec<_>>().join(", "))]
    NotSentence(Vec<Var>),
    #[error("level {level} exceeds the configured maximum {max}")]
    LevelTooHigh { level: u32, max: u32 },
    #[error("undecided by resources ({reason}); {progress}")]
    Resources { reason: String, progress: Progress },
    #[error("evaluation failed: {0}")]
    Eval(EvalError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Valid,
    Invalid,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Valid => "VALID",
            Status::Invalid => "INVALID",
        })
    }
}

/// Outcome of [`Decider::decide`]. `Valid` means true in every (nonempty,
/// unless `allow_empty`) well order, equivalently in every ordinal below
/// ω^ω, equivalently provable from transfinite induction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub status: Status,
    pub rank: usize,
    pub closure_size: usize,
    pub counterexample: Option<Ordinal>,
    pub witness_term: Option<Rc<BuildTerm>>,
}

impl Verdict {
    pub fn is_valid(&self) -> bool {
        self.status == Status::Valid
    }
}

/// Owns a type table, an evaluator and cached closures.
#[derive(Debug)]
pub struct Decider {
    table: TypeTable,
    evaluator: Evaluator,
    closures: FxHashMap<(u32, bool), Rc<Closure>>,
    limits: Limits,
}

impl Default for Decider {
    fn default() -> Self {
        Self::new(Limits::default())
    }
}

impl Decider {
    pub fn new(limits: Limits) -> Self {
        Decider {
            table: TypeTable::new(),
            evaluator: Evaluator::new(),
            closures: FxHashMap::default(),
            limits,
        }
    }

    pub fn limits(&self) -> Limits {
        self.limits
    }

    pub fn set_limits(&mut self, limits: Limits) {
        self.limits = limits;
    }

    pub fn table(&self) -> &TypeTable {
        &self.table
    }

    pub fn table_mut(&mut self) -> &mut TypeTable {
        &mut self.table
    }

    pub fn evaluator(&self) -> &Evaluator {
        &self.evaluator
    }

    /// Split borrow for callers that evaluate directly.
    pub fn parts(&mut self) -> (&mut TypeTable, &mut Evaluator) {
        (&mut self.table, &mut self.evaluator)
    }

    pub fn holds(&mut self, a: &Ordinal, f: &Formula) -> Result<bool, EvalError> {
        self.evaluator
            .set_deadline(self.limits.max_time.map(|d| Instant::now() + d));
        let r = self.evaluator.holds(&mut self.table, a, f);
        self.evaluator.set_deadline(None);
        r
    }

    pub fn type_of(&mut self, a: &Ordinal, k: u32) -> KType {
        self.table.type_of_ordinal(a, k)
    }

    pub fn equiv(&mut self, a: &Ordinal, b: &Ordinal, k: u32) -> bool {
        crate::evaluator::equiv(&mut self.table, a, b, k)
    }

    /// The reachable closure at level `k`.
    ///
    /// Every ordinal in `[1, ω^ω)` is a finite sum of powers `ω^e`, and
    /// `type(α)·ω = type(ω^(e+1))`, so the closure under `sum` and
    /// `omega_mult` is generated from the powers alone by appending one
    /// power at a time. Entries are produced breadth-first: first the
    /// powers (derived by repeated `·ω`), then sums in layers of
    /// increasing derivation depth.
    pub fn reachable_closure(
        &mut self,
        k: u32,
        allow_empty: bool,
    ) -> Result<Rc<Closure>, DecideError> {
        if let Some(c) = self.closures.get(&(k, allow_empty)) {
            return Ok(c.clone());
        }
        if k > self.limits.max_level {
            return Err(DecideError::LevelTooHigh {
                level: k,
                max: self.limits.max_level,
            });
        }
        let start = Instant::now();
        let mut closure = Closure {
            level: k,
            allow_empty,
            entries: Vec::new(),
            index: FxHashMap::default(),
        };
        if allow_empty {
            let e = self.table.type_empty(k);
            closure.push(e, Rc::new(BuildTerm::Zero), 0);
        }

        let mut gens: Vec<(KType, Rc<BuildTerm>, usize)> = Vec::new();
        let mut t = self.table.type_singleton(k);
        let mut term = Rc::new(BuildTerm::One);
        loop {
            if gens.iter().any(|g| g.0 == t) {
                break;
            }
            gens.push((t, term.clone(), gens.len()));
            t = self.table.omega_mult(t);
            term = Rc::new(BuildTerm::TimesOmega(term));
        }
        let mut frontier = Vec::new();
        for (t, term, depth) in &gens {
            if closure.push(*t, term.clone(), *depth) {
                frontier.push(closure.len() - 1);
            }
        }
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for &i in &frontier {
                let (base, base_term, base_depth) = {
                    let e = &closure.entries[i];
                    (e.ktype, e.witness.clone(), e.depth)
                };
                for (g, g_term, g_depth) in &gens {
                    let s = self.table.sum_unchecked(base, *g);
                    let term = Rc::new(BuildTerm::Sum(base_term.clone(), g_term.clone()));
                    if closure.push(s, term, base_depth.max(*g_depth) + 1) {
                        next.push(closure.len() - 1);
                    }
                }
                self.check_budget(start, k, closure.len())?;
            }
            frontier = next;
        }
        let closure = Rc::new(closure);
        self.closures.insert((k, allow_empty), closure.clone());
        Ok(closure)
    }

    fn check_budget(&self, start: Instant, level: u32, entries: usize) -> Result<(), DecideError> {
        let over_time = self.limits.max_time.is_some_and(|d| start.elapsed() > d);
        let over_size = self.table.len() > self.limits.max_types;
        if over_time || over_size {
            return Err(DecideError::Resources {
                reason: if over_time {
                    "time budget".into()
                } else {
                    "type table cap".into()
                },
                progress: Progress {
                    level,
                    entries,
                    interned: self.table.len(),
                    elapsed: start.elapsed(),
                },
            });
        }
        Ok(())
    }

    /// Decides `f` over all well orders (nonempty unless `allow_empty`).
    pub fn decide(&mut self, f: &Formula, allow_empty: bool) -> Result<Verdict, DecideError> {
        let free = f.free_variables();
        if !free.is_empty() {
            return Err(DecideError::NotSentence(free.into_iter().collect()));
        }
        let start = Instant::now();
        let rank = f.quantifier_rank();
        let k = rank as u32;
        let closure = self.reachable_closure(k, allow_empty)?;
        let deadline = self.limits.max_time.map(|d| start + d);
        self.evaluator.set_deadline(deadline);
        let result = self.check_all(&closure, f, start);
        self.evaluator.set_deadline(None);
        let failing = result?;
        Ok(match failing {
            None => Verdict {
                status: Status::Valid,
                rank,
                closure_size: closure.len(),
                counterexample: None,
                witness_term: None,
            },
            Some(e) => Verdict {
                status: Status::Invalid,
                rank,
                closure_size: closure.len(),
                counterexample: Some(e.ordinal.clone()),
                witness_term: Some(e.witness.clone()),
            },
        })
    }

    fn check_all<'c>(
        &mut self,
        closure: &'c Closure,
        f: &Formula,
        start: Instant,
    ) -> Result<Option<&'c ClosureEntry>, DecideError> {
        for e in &closure.entries {
            match self.evaluator.holds_on_type(&mut self.table, e.ktype, f) {
                Ok(true) => {}
                Ok(false) => return Ok(Some(e)),
                Err(EvalError::Deadline) => {
                    return Err(DecideError::Resources {
                        reason: "time budget".into(),
                        progress: Progress {
                            level: closure.level,
                            entries: closure.len(),
                            interned: self.table.len(),
                            elapsed: start.elapsed(),
                        },
                    })
                }
                Err(err) => return Err(DecideError::Eval(err)),
            }
        }
        Ok(None)
    }

    /// Whether `t` is the type of some nonempty ordinal below ω^ω.
    pub fn is_wo_type(&mut self, t: KType) -> Result<bool, DecideError> {
        let k = self.table.level(t);
        Ok(self.reachable_closure(k, false)?.contains(t))
    }
}

/// Closure by the literal definition: start from the singleton (and the
/// empty type) and close under pairwise `sum` and `omega_mult`,
/// breadth-first. Quadratic in the closure size; a reference for
/// [`Decider::reachable_closure`].
pub fn reachable_closure_naive(table: &mut TypeTable, k: u32, allow_empty: bool) -> Vec<KType> {
    let mut found: Vec<KType> = Vec::new();
    let mut seen = FxHashMap::default();
    let mut add = |t: KType, found: &mut Vec<KType>| {
        if seen.insert(t, ()).is_none() {
            found.push(t);
            true
        } else {
            false
        }
    };
    if allow_empty {
        let e = table.type_empty(k);
        add(e, &mut found);
    }
    let s = table.type_singleton(k);
    add(s, &mut found);
    let mut done = 0;
    while done < found.len() {
        let upto = found.len();
        for i in done..upto {
            let t = found[i];
            let w = table.omega_mult(t);
            add(w, &mut found);
            for j in 0..upto {
                let u = found[j];
                let a = table.sum_unchecked(t, u);
                add(a, &mut found);
                let b = table.sum_unchecked(u, t);
                add(b, &mut found);
            }
        }
        done = upto;
    }
    found
}
