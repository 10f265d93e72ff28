//! Model checking on ordinals below ω^ω.
//!
//! A formula with free variables is evaluated against an [`EvalState`]: the
//! level-ℓ types of the intervals cut out of an order by finitely many
//! named points. Quantifiers either reuse an existing point or split one of
//! the intervals at a point, whose left and right parts are read off the
//! interval's type; every quantifier descends one level. Points that no
//! remaining free variable refers to are merged back into their
//! neighbours, so states stay small and memoization catches most repeats.
//!
//! [`holds_finite_bruteforce`] is the plain Tarskian evaluator on explicit
//! finite orders, kept as an independent oracle.

use std::collections::BTreeMap;
use std::time::Instant;

use rustc_hash::FxHashMap;
use thiserror::Error;

use crate::formula::{Formula, Var};
use crate::ordinal::Ordinal;
use crate::typealg::{KType, TypeTable};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("formula has quantifier rank {rank} but the state is only at level {level}")]
    RankExceedsLevel { rank: usize, level: u32 },
    #[error("free variable `{0}` is not assigned to a point")]
    Unassigned(Var),
    #[error("not a sentence: free variable(s) {}", .0.iter().map(|v| v.as_str()).collect::<Vec<_>>().join(", "))]
    NotSentence(Vec<Var>),
    #[error("malformed state: {0}")]
    BadState(String),
    #[error("brute-force evaluation is limited to n <= {max_n} and rank <= {max_rank}")]
    BoundExceeded { max_n: usize, max_rank: usize },
    #[error("time budget exhausted")]
    Deadline,
}

/// A pointed order described up to ≡_level: `segments[0] p_0 segments[1]
/// p_1 ... p_{m-1} segments[m]`, with formula variables assigned to point
/// indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvalState {
    pub level: u32,
    pub segments: Vec<KType>,
    pub assignment: BTreeMap<Var, usize>,
}

impl EvalState {
    /// The state of a whole order with no named points.
    pub fn single(level: u32, t: KType) -> Self {
        EvalState {
            level,
            segments: vec![t],
            assignment: BTreeMap::new(),
        }
    }

    pub fn points(&self) -> usize {
        self.segments.len().saturating_sub(1)
    }

    fn validate(&self, table: &TypeTable) -> Result<(), EvalError> {
        if self.segments.is_empty() {
            return Err(EvalError::BadState(
                "a state needs at least one segment".into(),
            ));
        }
        if let Some(t) = self
            .segments
            .iter()
            .find(|&&t| table.level(t) != self.level)
        {
            return Err(EvalError::BadState(format!(
                "segment at level {} in a level-{} state",
                table.level(*t),
                self.level
            )));
        }
        if let Some((v, &p)) = self.assignment.iter().find(|(_, &p)| p >= self.points()) {
            return Err(EvalError::BadState(format!(
                "`{v}` assigned to missing point {p}"
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Node {
    True,
    False,
    Lt(u32, u32),
    Eq(u32, u32),
    Not(u32),
    And(u32, u32),
    Or(u32, u32),
    Implies(u32, u32),
    Iff(u32, u32),
    Forall(u32, u32),
    Exists(u32, u32),
}

/// Hash-consed formulas with variables numbered.
#[derive(Debug, Default)]
struct Arena {
    nodes: Vec<Node>,
    free: Vec<Box<[u32]>>,
    rank: Vec<u32>,
    index: FxHashMap<Node, u32>,
    vars: FxHashMap<Var, u32>,
    names: Vec<Var>,
}

impl Arena {
    fn var(&mut self, v: &Var) -> u32 {
        if let Some(&i) = self.vars.get(v) {
            return i;
        }
        let i = self.names.len() as u32;
        self.names.push(v.clone());
        self.vars.insert(v.clone(), i);
        i
    }

    fn add(&mut self, node: Node) -> u32 {
        if let Some(&id) = self.index.get(&node) {
            return id;
        }
        let merge = |a: &[u32], b: &[u32]| {
            let mut v: Vec<u32> = a.iter().chain(b).copied().collect();
            v.sort_unstable();
            v.dedup();
            v.into_boxed_slice()
        };
        let (free, rank): (Box<[u32]>, u32) = match node {
            Node::True | Node::False => (Box::new([]), 0),
            Node::Lt(x, y) | Node::Eq(x, y) => (merge(&[x], &[y]), 0),
            Node::Not(a) => (self.free[a as usize].clone(), self.rank[a as usize]),
            Node::And(a, b) | Node::Or(a, b) | Node::Implies(a, b) | Node::Iff(a, b) => (
                merge(&self.free[a as usize], &self.free[b as usize]),
                self.rank[a as usize].max(self.rank[b as usize]),
            ),
            Node::Forall(v, b) | Node::Exists(v, b) => (
                self.free[b as usize]
                    .iter()
                    .copied()
                    .filter(|&u| u != v)
                    .collect(),
                1 + self.rank[b as usize],
            ),
        };
        let id = self.nodes.len() as u32;
        self.nodes.push(node);
        self.free.push(free);
        self.rank.push(rank);
        self.index.insert(node, id);
        id
    }

    fn compile(&mut self, f: &Formula) -> u32 {
        let node = match f {
            Formula::True => Node::True,
            Formula::False => Node::False,
            Formula::Lt(x, y) => Node::Lt(self.var(x), self.var(y)),
            Formula::Eq(x, y) => Node::Eq(self.var(x), self.var(y)),
            Formula::Not(a) => Node::Not(self.compile(a)),
            Formula::And(a, b) => Node::And(self.compile(a), self.compile(b)),
            Formula::Or(a, b) => Node::Or(self.compile(a), self.compile(b)),
            Formula::Implies(a, b) => Node::Implies(self.compile(a), self.compile(b)),
            Formula::Iff(a, b) => Node::Iff(self.compile(a), self.compile(b)),
            Formula::Forall(v, b) => {
                let v = self.var(v);
                Node::Forall(v, self.compile(b))
            }
            Formula::Exists(v, b) => {
                let v = self.var(v);
                Node::Exists(v, self.compile(b))
            }
        };
        self.add(node)
    }
}

/// Counters for one [`Evaluator`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct EvalStats {
    pub evaluations: u64,
    pub memo_hits: u64,
    /// Segment splits tried by quantifiers.
    pub splits: u64,
    /// Times a subformula met a state below its rank. Always zero unless
    /// the caller handed in an under-leveled state.
    pub under_level: u64,
    /// Smallest `level - rank` seen when a quantifier split a segment.
    pub min_split_slack: Option<u32>,
}

/// Segment-state model checker. Memo entries refer to ids of one
/// [`TypeTable`]; use an evaluator with a single table only.
#[derive(Debug, Default)]
pub struct Evaluator {
    arena: Arena,
    memo: FxHashMap<Box<[u32]>, bool>,
    stats: EvalStats,
    table_serial: Option<u64>,
    deadline: Option<Instant>,
}

type Seg = Vec<KType>;

impl Evaluator {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set_deadline(&mut self, deadline: Option<Instant>) {
        self.deadline = deadline;
    }

    pub fn stats(&self) -> EvalStats {
        self.stats
    }

    pub fn memo_len(&self) -> usize {
        self.memo.len()
    }

    fn bind_table(&mut self, table: &TypeTable) {
        match self.table_serial {
            Some(s) => assert_eq!(
                s,
                table.serial(),
                "evaluator used with two different type tables"
            ),
            None => self.table_serial = Some(table.serial()),
        }
    }

    /// Truth value of `f` in every pointed order described by `st`.
    pub fn eval(
        &mut self,
        table: &mut TypeTable,
        f: &Formula,
        st: &EvalState,
    ) -> Result<bool, EvalError> {
        self.bind_table(table);
        st.validate(table)?;
        let rank = f.quantifier_rank();
        if rank > st.level as usize {
            self.stats.under_level += 1;
            return Err(EvalError::RankExceedsLevel {
                rank,
                level: st.level,
            });
        }
        if let Some(v) = f
            .free_variables()
            .into_iter()
            .find(|v| !st.assignment.contains_key(v))
        {
            return Err(EvalError::Unassigned(v));
        }
        let node = self.arena.compile(f);
        let free = self.arena.free[node as usize].clone();
        let full: Vec<u32> = free
            .iter()
            .map(|&v| st.assignment[&self.arena.names[v as usize]] as u32)
            .collect();
        let (segs, binding) = normalize(table, st.level, &st.segments, &full);
        self.eval_node(table, node, st.level, &segs, &binding)
    }

    /// `a ⊨ f` for a sentence `f`.
    pub fn holds(
        &mut self,
        table: &mut TypeTable,
        a: &Ordinal,
        f: &Formula,
    ) -> Result<bool, EvalError> {
        let free = f.free_variables();
        if !free.is_empty() {
            return Err(EvalError::NotSentence(free.into_iter().collect()));
        }
        let k = f.quantifier_rank() as u32;
        let t = table.type_of_ordinal(a, k);
        self.eval(table, f, &EvalState::single(k, t))
    }

    /// Evaluates a sentence against a type directly.
    pub fn holds_on_type(
        &mut self,
        table: &mut TypeTable,
        t: KType,
        f: &Formula,
    ) -> Result<bool, EvalError> {
        let free = f.free_variables();
        if !free.is_empty() {
            return Err(EvalError::NotSentence(free.into_iter().collect()));
        }
        let level = table.level(t);
        self.eval(table, f, &EvalState::single(level, t))
    }

    fn check_deadline(&self) -> Result<(), EvalError> {
        if let Some(d) = self.deadline {
            if self.stats.evaluations.is_multiple_of(4096) && Instant::now() > d {
                return Err(EvalError::Deadline);
            }
        }
        Ok(())
    }

    // `binding[i]` is the point of the i-th free variable of `node`; every
    // point is bound by someone.
    fn eval_node(
        &mut self,
        table: &mut TypeTable,
        node: u32,
        level: u32,
        segs: &[KType],
        binding: &[u32],
    ) -> Result<bool, EvalError> {
        self.stats.evaluations += 1;
        self.check_deadline()?;
        let rank = self.arena.rank[node as usize];
        if rank > level {
            self.stats.under_level += 1;
            return Err(EvalError::RankExceedsLevel {
                rank: rank as usize,
                level,
            });
        }
        let n = self.arena.nodes[node as usize];
        let point_of = |arena: &Arena, v: u32| {
            let i = arena.free[node as usize]
                .binary_search(&v)
                .expect("free variable");
            binding[i]
        };
        match n {
            Node::True => return Ok(true),
            Node::False => return Ok(false),
            Node::Lt(x, y) => return Ok(point_of(&self.arena, x) < point_of(&self.arena, y)),
            Node::Eq(x, y) => return Ok(point_of(&self.arena, x) == point_of(&self.arena, y)),
            _ => {}
        }

        let key = memo_key(node, level, segs, binding);
        if let Some(&b) = self.memo.get(&key) {
            self.stats.memo_hits += 1;
            return Ok(b);
        }
        let result = match n {
            Node::Not(a) => !self.child(table, node, a, level, segs, binding)?,
            Node::And(a, b) => {
                self.child(table, node, a, level, segs, binding)?
                    && self.child(table, node, b, level, segs, binding)?
            }
            Node::Or(a, b) => {
                self.child(table, node, a, level, segs, binding)?
                    || self.child(table, node, b, level, segs, binding)?
            }
            Node::Implies(a, b) => {
                !self.child(table, node, a, level, segs, binding)?
                    || self.child(table, node, b, level, segs, binding)?
            }
            Node::Iff(a, b) => {
                self.child(table, node, a, level, segs, binding)?
                    == self.child(table, node, b, level, segs, binding)?
            }
            Node::Exists(v, b) => self.quantifier(table, node, v, b, level, segs, binding, true)?,
            Node::Forall(v, b) => {
                !self.quantifier(table, node, v, b, level, segs, binding, false)?
            }
            _ => unreachable!(),
        };
        self.memo.insert(key, result);
        Ok(result)
    }

    /// Same-level evaluation of a connective's operand.
    fn child(
        &mut self,
        table: &mut TypeTable,
        parent: u32,
        child: u32,
        level: u32,
        segs: &[KType],
        binding: &[u32],
    ) -> Result<bool, EvalError> {
        let pfree = &self.arena.free[parent as usize];
        let cfree = &self.arena.free[child as usize];
        if pfree.len() == cfree.len() {
            return self.eval_node(table, child, level, segs, binding);
        }
        let sub: Vec<u32> = cfree
            .iter()
            .map(|v| binding[pfree.binary_search(v).expect("child free var")])
            .collect();
        let (segs, sub) = normalize(table, level, segs, &sub);
        self.eval_node(table, child, level, &segs, &sub)
    }

    /// With `want = true` (exists): is there a witness making the body
    /// true? With `want = false` (forall): is there a witness making it
    /// false?
    #[allow(clippy::too_many_arguments)]
    fn quantifier(
        &mut self,
        table: &mut TypeTable,
        node: u32,
        var: u32,
        body: u32,
        level: u32,
        segs: &[KType],
        binding: &[u32],
        want: bool,
    ) -> Result<bool, EvalError> {
        let next = level - 1;
        let rank = self.arena.rank[node as usize];
        let pfree = self.arena.free[node as usize].clone();
        let bfree = self.arena.free[body as usize].clone();
        let lowered: Seg = segs.iter().map(|&t| table.lower_to(t, next)).collect();
        let points = segs.len() - 1;

        // body binding for a given position of the new variable
        let body_binding = |new_point: u32, shift_from: Option<u32>| -> Vec<u32> {
            bfree
                .iter()
                .map(|&v| {
                    if v == var {
                        new_point
                    } else {
                        let p = binding[pfree.binary_search(&v).expect("body free var")];
                        match shift_from {
                            Some(i) if p >= i => p + 1,
                            _ => p,
                        }
                    }
                })
                .collect()
        };

        for p in 0..points as u32 {
            let sub = body_binding(p, None);
            let (s, b) = normalize(table, next, &lowered, &sub);
            if self.eval_node(table, body, next, &s, &b)? == want {
                return Ok(true);
            }
        }
        for (i, &seg) in segs.iter().enumerate() {
            let pairs = table.pairs(seg).to_vec();
            for (l, r) in pairs {
                self.stats.splits += 1;
                let slack = level - rank;
                self.stats.min_split_slack =
                    Some(self.stats.min_split_slack.map_or(slack, |m| m.min(slack)));
                let mut split: Seg = Vec::with_capacity(lowered.len() + 1);
                split.extend_from_slice(&lowered[..i]);
                split.push(l);
                split.push(r);
                split.extend_from_slice(&lowered[i + 1..]);
                let sub = body_binding(i as u32, Some(i as u32));
                let (s, b) = normalize(table, next, &split, &sub);
                if self.eval_node(table, body, next, &s, &b)? == want {
                    return Ok(true);
                }
            }
        }
        Ok(false)
    }
}

fn memo_key(node: u32, level: u32, segs: &[KType], binding: &[u32]) -> Box<[u32]> {
    let mut key = Vec::with_capacity(3 + segs.len() + binding.len());
    key.push(node);
    key.push(level);
    key.push(segs.len() as u32);
    key.extend(segs.iter().map(|t| t.index()));
    key.extend_from_slice(binding);
    key.into_boxed_slice()
}

/// Merges every point not mentioned in `binding` into the surrounding
/// segments and renumbers the rest.
fn normalize(
    table: &mut TypeTable,
    level: u32,
    segs: &[KType],
    binding: &[u32],
) -> (Seg, Vec<u32>) {
    let points = segs.len() - 1;
    let mut used = vec![false; points];
    for &p in binding {
        used[p as usize] = true;
    }
    if used.iter().all(|&u| u) {
        return (segs.to_vec(), binding.to_vec());
    }
    let one = table.type_singleton(level);
    let mut renumber = vec![u32::MAX; points];
    let mut out = Vec::with_capacity(binding.len() + 1);
    let mut cur = segs[0];
    for j in 0..points {
        if used[j] {
            renumber[j] = out.len() as u32;
            out.push(cur);
            cur = segs[j + 1];
        } else {
            let with_point = table.sum_unchecked(cur, one);
            cur = table.sum_unchecked(with_point, segs[j + 1]);
        }
    }
    out.push(cur);
    let binding = binding.iter().map(|&p| renumber[p as usize]).collect();
    (out, binding)
}

pub const BRUTEFORCE_MAX_N: usize = 8;
pub const BRUTEFORCE_MAX_RANK: usize = 4;

/// Tarskian evaluation of `f` on the explicit order `0 < 1 < ... < n-1`.
pub fn holds_finite_bruteforce(n: usize, f: &Formula) -> Result<bool, EvalError> {
    if n > BRUTEFORCE_MAX_N || f.quantifier_rank() > BRUTEFORCE_MAX_RANK {
        return Err(EvalError::BoundExceeded {
            max_n: BRUTEFORCE_MAX_N,
            max_rank: BRUTEFORCE_MAX_RANK,
        });
    }
    let free = f.free_variables();
    if !free.is_empty() {
        return Err(EvalError::NotSentence(free.into_iter().collect()));
    }
    finite_eval(n, f, &mut Vec::new())
}

/// Tarskian evaluation under an explicit assignment of elements `< n`.
pub fn eval_finite(
    n: usize,
    f: &Formula,
    assignment: &BTreeMap<Var, usize>,
) -> Result<bool, EvalError> {
    let mut env: Vec<(Var, usize)> = assignment.iter().map(|(v, &a)| (v.clone(), a)).collect();
    finite_eval(n, f, &mut env)
}

fn finite_eval(n: usize, f: &Formula, env: &mut Vec<(Var, usize)>) -> Result<bool, EvalError> {
    let lookup = |env: &[(Var, usize)], x: &Var| {
        env.iter()
            .rev()
            .find(|(v, _)| v == x)
            .map(|&(_, a)| a)
            .ok_or_else(|| EvalError::Unassigned(x.clone()))
    };
    Ok(match f {
        Formula::True => true,
        Formula::False => false,
        Formula::Lt(x, y) => lookup(env, x)? < lookup(env, y)?,
        Formula::Eq(x, y) => lookup(env, x)? == lookup(env, y)?,
        Formula::Not(a) => !finite_eval(n, a, env)?,
        Formula::And(a, b) => finite_eval(n, a, env)? && finite_eval(n, b, env)?,
        Formula::Or(a, b) => finite_eval(n, a, env)? || finite_eval(n, b, env)?,
        Formula::Implies(a, b) => !finite_eval(n, a, env)? || finite_eval(n, b, env)?,
        Formula::Iff(a, b) => finite_eval(n, a, env)? == finite_eval(n, b, env)?,
        Formula::Forall(v, b) | Formula::Exists(v, b) => {
            let want = matches!(f, Formula::Exists(..));
            let mut found = false;
            for a in 0..n {
                env.push((v.clone(), a));
                let r = finite_eval(n, b, env);
                env.pop();
                if r? == want {
                    found = true;
                    break;
                }
            }
            found == want
        }
    })
}

/// `a ≡_k b`.
pub fn equiv(table: &mut TypeTable, a: &Ordinal, b: &Ordinal, k: u32) -> bool {
    table.type_of_ordinal(a, k) == table.type_of_ordinal(b, k)
}
