//! Rank-k types of linear orders.
//!
//! The level-0 type is a single atom. For `k >= 1` the level-k type of a
//! linear order `L` is the set of pairs
//! `(type_{k-1}(L_{<a}), type_{k-1}(L_{>a}))` over all points `a` of `L`.
//! Two linear orders agree on all sentences of quantifier rank `<= k`
//! exactly when their level-k types coincide, and the type of a sum or of
//! an ω-fold repetition is computable from the types of the parts.
//!
//! Types are hash-consed in a [`TypeTable`]; a [`KType`] is a handle into
//! it and equality of handles is equality of types. Every type operation is
//! memoized in the table.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use rustc_hash::FxHashMap;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::ordinal::Ordinal;

/// Handle to an interned type. Only meaningful together with the
/// [`TypeTable`] that produced it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct KType(u32);

impl KType {
    pub fn index(self) -> u32 {
        self.0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TypeError {
    #[error("level mismatch: {0} vs {1}")]
    LevelMismatch(u32, u32),
    #[error("the level-0 type has no lower projection")]
    LevelZero,
    #[error(
        "brute-force expansion is limited to n <= {max_n} and k <= {max_k} (got n = {n}, k = {k})"
    )]
    BoundExceeded {
        n: usize,
        k: u32,
        max_n: usize,
        max_k: u32,
    },
}

/// Bounds for [`TypeTable::type_of_finite_bruteforce`].
pub const BRUTEFORCE_MAX_N: usize = 8;
pub const BRUTEFORCE_MAX_K: u32 = 4;

#[derive(Debug)]
struct Node {
    level: u32,
    // sorted by id, deduplicated; empty for the atom
    pairs: Box<[(KType, KType)]>,
}

type NodeKey = (u32, Box<[(KType, KType)]>);

/// Interner and memo tables for [`KType`]s.
///
/// Ids are assigned in creation order, so a fixed sequence of operations
/// yields the same ids in every run. Content encodings
/// ([`TypeTable::encoding`]) do not depend on ids at all.
#[derive(Debug)]
pub struct TypeTable {
    nodes: Vec<Node>,
    index: FxHashMap<NodeKey, KType>,
    empty: Vec<KType>,
    singleton: Vec<KType>,
    lower_memo: FxHashMap<KType, KType>,
    sum_memo: FxHashMap<(KType, KType), KType>,
    omega_memo: FxHashMap<KType, KType>,
    ordinal_memo: FxHashMap<(Ordinal, u32), KType>,
    digests: Vec<Option<[u8; 32]>>,
    serial: u64,
}

impl Default for TypeTable {
    fn default() -> Self {
        Self::new()
    }
}

static TABLE_SERIAL: std::sync::atomic::AtomicU64 = std::sync::atomic::AtomicU64::new(0);

impl TypeTable {
    pub fn new() -> Self {
        let mut table = TypeTable {
            nodes: Vec::new(),
            index: FxHashMap::default(),
            empty: Vec::new(),
            singleton: Vec::new(),
            lower_memo: FxHashMap::default(),
            sum_memo: FxHashMap::default(),
            omega_memo: FxHashMap::default(),
            ordinal_memo: FxHashMap::default(),
            digests: Vec::new(),
            serial: TABLE_SERIAL.fetch_add(1, std::sync::atomic::Ordering::Relaxed),
        };
        let atom = table.intern(0, Vec::new());
        table.empty.push(atom);
        table.singleton.push(atom);
        table
    }

    /// Distinguishes tables from one another; used by caches keyed on ids.
    pub fn serial(&self) -> u64 {
        self.serial
    }

    /// Number of interned types.
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    fn intern(&mut self, level: u32, mut pairs: Vec<(KType, KType)>) -> KType {
        pairs.sort_unstable();
        pairs.dedup();
        let key = (level, pairs.into_boxed_slice());
        if let Some(&id) = self.index.get(&key) {
            return id;
        }
        let id = KType(u32::try_from(self.nodes.len()).expect("type table overflow"));
        self.nodes.push(Node {
            level,
            pairs: key.1.clone(),
        });
        self.digests.push(None);
        self.index.insert(key, id);
        id
    }

    /// Interns a level-`k` type from explicit pairs of level-`k-1` types.
    pub fn make(&mut self, level: u32, pairs: Vec<(KType, KType)>) -> Result<KType, TypeError> {
        if level == 0 {
            return Ok(self.atom());
        }
        for &(l, r) in &pairs {
            for t in [l, r] {
                if self.level(t) != level - 1 {
                    return Err(TypeError::LevelMismatch(self.level(t), level - 1));
                }
            }
        }
        Ok(self.intern(level, pairs))
    }

    pub fn atom(&self) -> KType {
        self.empty[0]
    }

    pub fn level(&self, t: KType) -> u32 {
        self.nodes[t.0 as usize].level
    }

    /// The `(left, right)` pairs of `t`, sorted by id. Empty for the atom.
    pub fn pairs(&self, t: KType) -> &[(KType, KType)] {
        &self.nodes[t.0 as usize].pairs
    }

    /// Number of points choices distinguishable at this level.
    pub fn cardinality(&self, t: KType) -> usize {
        self.pairs(t).len()
    }

    pub fn is_empty_type(&self, t: KType) -> bool {
        self.level(t) > 0 && self.pairs(t).is_empty()
    }

    pub fn type_empty(&mut self, k: u32) -> KType {
        while self.empty.len() <= k as usize {
            let level = self.empty.len() as u32;
            let t = self.intern(level, Vec::new());
            self.empty.push(t);
        }
        self.empty[k as usize]
    }

    pub fn type_singleton(&mut self, k: u32) -> KType {
        while self.singleton.len() <= k as usize {
            let level = self.singleton.len() as u32;
            let e = self.type_empty(level - 1);
            let t = self.intern(level, vec![(e, e)]);
            self.singleton.push(t);
        }
        self.singleton[k as usize]
    }

    /// Projects a level-k type to level k-1.
    pub fn lower(&mut self, t: KType) -> Result<KType, TypeError> {
        match self.level(t) {
            0 => Err(TypeError::LevelZero),
            _ => Ok(self.lower_unchecked(t)),
        }
    }

    fn lower_unchecked(&mut self, t: KType) -> KType {
        let level = self.level(t);
        if level == 1 {
            return self.atom();
        }
        if let Some(&r) = self.lower_memo.get(&t) {
            return r;
        }
        let pairs = self.pairs(t).to_vec();
        let lowered: Vec<_> = pairs
            .into_iter()
            .map(|(l, r)| (self.lower_unchecked(l), self.lower_unchecked(r)))
            .collect();
        let out = self.intern(level - 1, lowered);
        self.lower_memo.insert(t, out);
        out
    }

    /// Lowers `t` to `level`, which must not exceed its own level.
    pub fn lower_to(&mut self, mut t: KType, level: u32) -> KType {
        assert!(level <= self.level(t), "cannot raise a type");
        while self.level(t) > level {
            t = self.lower_unchecked(t);
        }
        t
    }

    /// The type of `A + B` from the types of `A` and `B`.
    pub fn sum(&mut self, s: KType, t: KType) -> Result<KType, TypeError> {
        let (ls, lt) = (self.level(s), self.level(t));
        if ls != lt {
            return Err(TypeError::LevelMismatch(ls, lt));
        }
        Ok(self.sum_unchecked(s, t))
    }

    pub(crate) fn sum_unchecked(&mut self, s: KType, t: KType) -> KType {
        let level = self.level(s);
        if level == 0 {
            return self.atom();
        }
        if self.pairs(t).is_empty() {
            return s;
        }
        if self.pairs(s).is_empty() {
            return t;
        }
        if let Some(&r) = self.sum_memo.get(&(s, t)) {
            return r;
        }
        let low_s = self.lower_unchecked(s);
        let low_t = self.lower_unchecked(t);
        let s_pairs = self.pairs(s).to_vec();
        let t_pairs = self.pairs(t).to_vec();
        let mut pairs = Vec::with_capacity(s_pairs.len() + t_pairs.len());
        for (l, r) in s_pairs {
            let r = self.sum_unchecked(r, low_t);
            pairs.push((l, r));
        }
        for (l, r) in t_pairs {
            let l = self.sum_unchecked(low_s, l);
            pairs.push((l, r));
        }
        let out = self.intern(level, pairs);
        self.sum_memo.insert((s, t), out);
        out
    }

    /// The type of `L·ω` (ω copies of `L`) from the type of `L`.
    pub fn omega_mult(&mut self, s: KType) -> KType {
        let level = self.level(s);
        if level == 0 || self.pairs(s).is_empty() {
            return s;
        }
        if let Some(&r) = self.omega_memo.get(&s) {
            return r;
        }
        let low = self.lower_unchecked(s);
        let prefixes = self.prefix_orbit(low);
        let tail = self.omega_mult(low);
        let s_pairs = self.pairs(s).to_vec();
        let mut pairs = Vec::with_capacity(prefixes.len() * s_pairs.len());
        for &p in &prefixes {
            for &(l, r) in &s_pairs {
                let left = self.sum_unchecked(p, l);
                let right = self.sum_unchecked(r, tail);
                pairs.push((left, right));
            }
        }
        let out = self.intern(level, pairs);
        self.omega_memo.insert(s, out);
        out
    }

    /// `[empty, t, t+t, t+t+t, ...]` up to the first repetition.
    fn prefix_orbit(&mut self, t: KType) -> Vec<KType> {
        let level = self.level(t);
        let mut p = self.type_empty(level);
        let mut seen = vec![p];
        loop {
            p = self.sum_unchecked(p, t);
            if seen.contains(&p) {
                return seen;
            }
            seen.push(p);
        }
    }

    /// `n`-fold sum of singletons.
    pub fn type_of_finite(&mut self, n: usize, k: u32) -> KType {
        let one = self.type_singleton(k);
        let mut t = self.type_empty(k);
        for _ in 0..n {
            t = self.sum_unchecked(t, one);
        }
        t
    }

    /// Expands the defining recursion directly on the explicit `n`-element
    /// order `0 < 1 < ... < n-1`, without using `sum`.
    pub fn type_of_finite_bruteforce(&mut self, n: usize, k: u32) -> Result<KType, TypeError> {
        if n > BRUTEFORCE_MAX_N || k > BRUTEFORCE_MAX_K {
            return Err(TypeError::BoundExceeded {
                n,
                k,
                max_n: BRUTEFORCE_MAX_N,
                max_k: BRUTEFORCE_MAX_K,
            });
        }
        let elems: Vec<usize> = (0..n).collect();
        Ok(self.bruteforce(&elems, k))
    }

    fn bruteforce(&mut self, elems: &[usize], k: u32) -> KType {
        if k == 0 {
            return self.atom();
        }
        let mut pairs = Vec::new();
        for &a in elems {
            let left: Vec<usize> = elems.iter().copied().filter(|&b| b < a).collect();
            let right: Vec<usize> = elems.iter().copied().filter(|&b| b > a).collect();
            let l = self.bruteforce(&left, k - 1);
            let r = self.bruteforce(&right, k - 1);
            pairs.push((l, r));
        }
        self.intern(k, pairs)
    }

    /// Type of `ω^e` at level `k`.
    pub fn type_of_omega_power(&mut self, e: u32, k: u32) -> KType {
        let mut t = self.type_singleton(k);
        for _ in 0..e {
            let next = self.omega_mult(t);
            if next == t {
                break;
            }
            t = next;
        }
        t
    }

    /// Type of an ordinal, by structural recursion on its normal form.
    pub fn type_of_ordinal(&mut self, a: &Ordinal, k: u32) -> KType {
        if let Some(&t) = self.ordinal_memo.get(&(a.clone(), k)) {
            return t;
        }
        let mut t = self.type_empty(k);
        for term in a.terms() {
            let power = self.type_of_omega_power(term.exponent, k);
            let block = self.repeat(power, term.coefficient);
            t = self.sum_unchecked(t, block);
        }
        self.ordinal_memo.insert((a.clone(), k), t);
        t
    }

    /// `c`-fold sum of `t`; the sequence of multiples is eventually periodic,
    /// so large `c` only costs the length of the pre-period plus period.
    fn repeat(&mut self, t: KType, c: u64) -> KType {
        let mut multiples = vec![self.type_empty(self.level(t))];
        loop {
            let n = multiples.len() as u64;
            let last = *multiples.last().unwrap();
            if n > c {
                return multiples[c as usize];
            }
            let next = self.sum_unchecked(last, t);
            if let Some(start) = multiples.iter().position(|&m| m == next) {
                let start = start as u64;
                let period = n - start;
                return multiples[(start + (c - start) % period) as usize];
            }
            multiples.push(next);
        }
    }

    /// Canonical nested rendering: `0` for the atom, and for sets the
    /// lexicographically sorted, deduplicated list `{(l,r),...}` of the
    /// renderings of the pairs. Grows quickly with the level; intended
    /// for small types.
    pub fn render(&self, t: KType) -> String {
        if self.level(t) == 0 {
            return "0".to_string();
        }
        let mut items: Vec<String> = self
            .pairs(t)
            .iter()
            .map(|&(l, r)| format!("({},{})", self.render(l), self.render(r)))
            .collect();
        items.sort();
        items.dedup();
        format!("{{{}}}", items.join(","))
    }

    /// Content digest: `0` for the atom; for a set, the SHA-256 of the same
    /// rendering as [`TypeTable::render`] but with children replaced by
    /// their digests. Depends only on the type's content.
    pub fn encoding(&mut self, t: KType) -> String {
        if self.level(t) == 0 {
            return "0".to_string();
        }
        hex::encode(self.digest(t))
    }

    fn digest(&mut self, t: KType) -> [u8; 32] {
        if let Some(d) = self.digests[t.0 as usize] {
            return d;
        }
        let pairs = self.pairs(t).to_vec();
        let mut items: BTreeSet<String> = BTreeSet::new();
        for (l, r) in pairs {
            let el = self.encoding(l);
            let er = self.encoding(r);
            items.insert(format!("({el},{er})"));
        }
        let mut hasher = Sha256::new();
        hasher.update(b"{");
        for (i, item) in items.iter().enumerate() {
            if i > 0 {
                hasher.update(b",");
            }
            hasher.update(item.as_bytes());
        }
        hasher.update(b"}");
        let d: [u8; 32] = hasher.finalize().into();
        self.digests[t.0 as usize] = Some(d);
        d
    }

    /// One line per interned type: `id level encoding`.
    pub fn dump(&mut self) -> String {
        let mut out = String::new();
        for i in 0..self.nodes.len() {
            let t = KType(i as u32);
            let level = self.level(t);
            let enc = self.encoding(t);
            let _ = writeln!(out, "{i} {level} {enc}");
        }
        out
    }

    /// Size statistics of the DAG below `t`: number of distinct types per
    /// level, highest level first.
    pub fn stats(&self, t: KType) -> TypeStats {
        let mut seen = BTreeSet::new();
        let mut stack = vec![t];
        while let Some(u) = stack.pop() {
            if seen.insert(u) {
                for &(l, r) in self.pairs(u) {
                    stack.push(l);
                    stack.push(r);
                }
            }
        }
        let top = self.level(t);
        let mut per_level = vec![0usize; top as usize + 1];
        for u in &seen {
            per_level[(top - self.level(*u)) as usize] += 1;
        }
        TypeStats {
            id: t,
            level: top,
            cardinality: self.cardinality(t),
            nodes_per_level: per_level,
            total_nodes: seen.len(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypeStats {
    pub id: KType,
    pub level: u32,
    /// Number of pairs in the top-level set.
    pub cardinality: usize,
    /// Distinct types reachable from the root, per level from `level` down to 0.
    pub nodes_per_level: Vec<usize>,
    pub total_nodes: usize,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn o(s: &str) -> Ordinal {
        s.parse().unwrap()
    }

    #[test]
    fn base_cases() {
        let mut t = TypeTable::new();
        let e1 = t.type_empty(1);
        assert_eq!(t.render(e1), "{}");
        let s1 = t.type_singleton(1);
        assert_eq!(t.render(s1), "{(0,0)}");
        let s2 = t.type_singleton(2);
        assert_eq!(t.render(s2), "{({},{})}");
        assert_eq!(t.type_empty(0), t.type_singleton(0));
    }

    #[test]
    fn lower_examples() {
        let mut t = TypeTable::new();
        let f3 = t.type_of_finite_bruteforce(5, 3).unwrap();
        let f2 = t.type_of_finite_bruteforce(5, 2).unwrap();
        assert_eq!(t.lower(f3).unwrap(), f2);
        for k in 2..5 {
            let e = t.type_empty(k);
            let e_lower = t.type_empty(k - 1);
            assert_eq!(t.lower(e).unwrap(), e_lower);
        }
        let s2 = t.type_singleton(2);
        let s1 = t.type_singleton(1);
        assert_eq!(t.lower(s2).unwrap(), s1);
        let atom = t.atom();
        assert_eq!(t.lower(atom), Err(TypeError::LevelZero));
    }

    #[test]
    fn two_element_order() {
        let mut t = TypeTable::new();
        let two = t.type_of_finite(2, 2);
        assert_eq!(t.render(two), "{({(0,0)},{}),({},{(0,0)})}");
        let s = t.type_singleton(2);
        assert_eq!(t.sum(s, s).unwrap(), two);
        assert_eq!(t.type_of_finite_bruteforce(2, 2).unwrap(), two);
    }

    #[test]
    fn sum_identity_and_errors() {
        let mut t = TypeTable::new();
        for k in 1..4 {
            let x = t.type_of_ordinal(&o("w*2 + 3"), k);
            let e = t.type_empty(k);
            assert_eq!(t.sum(x, e).unwrap(), x);
            assert_eq!(t.sum(e, x).unwrap(), x);
        }
        let a = t.type_singleton(1);
        let b = t.type_singleton(2);
        assert_eq!(t.sum(a, b), Err(TypeError::LevelMismatch(1, 2)));
    }

    #[test]
    fn finite_sums_match_bruteforce() {
        let mut t = TypeTable::new();
        for k in 0..=3 {
            for n in 0..=7 {
                for m in 0..=(7 - n) {
                    let a = t.type_of_finite(n, k);
                    let b = t.type_of_finite(m, k);
                    let s = t.sum(a, b).unwrap();
                    assert_eq!(
                        s,
                        t.type_of_finite_bruteforce(n + m, k).unwrap(),
                        "n={n} m={m} k={k}"
                    );
                }
            }
        }
    }

    #[test]
    fn omega_mult_examples() {
        let mut t = TypeTable::new();
        for k in 0..=4 {
            let e = t.type_empty(k);
            assert_eq!(t.omega_mult(e), e);
            let s = t.type_singleton(k);
            let w = t.omega_mult(s);
            assert_eq!(w, t.type_of_ordinal(&o("w"), k));
        }
        let s1 = t.type_singleton(1);
        assert_eq!(t.omega_mult(s1), s1);
        // ω is rank-2 distinct from every positive finite order
        let w2 = t.type_of_ordinal(&o("w"), 2);
        for n in 1..=8 {
            assert_ne!(t.type_of_finite(n, 2), w2);
        }
    }

    #[test]
    fn bruteforce_bounds() {
        let mut t = TypeTable::new();
        assert!(matches!(
            t.type_of_finite_bruteforce(9, 2),
            Err(TypeError::BoundExceeded { .. })
        ));
        assert!(matches!(
            t.type_of_finite_bruteforce(3, 5),
            Err(TypeError::BoundExceeded { .. })
        ));
        let e = t.type_empty(3);
        assert_eq!(t.type_of_finite_bruteforce(0, 3).unwrap(), e);
    }

    #[test]
    fn ordinal_types() {
        let mut t = TypeTable::new();
        for k in 0..=3 {
            let five = t.type_of_ordinal(&o("5"), k);
            assert_eq!(five, t.type_of_finite(5, k));
        }
        let a = t.type_of_ordinal(&o("w^2"), 2);
        let b = t.type_of_ordinal(&o("w^2*2"), 2);
        assert_eq!(a, b);
        let w = t.type_of_ordinal(&o("w"), 2);
        let seven = t.type_of_ordinal(&o("7"), 2);
        assert_ne!(w, seven);
        // 2·ω = ω
        for k in 0..=3 {
            let two = t.type_of_finite(2, k);
            let w = t.type_of_ordinal(&o("w"), k);
            assert_eq!(t.omega_mult(two), w);
        }
    }

    #[test]
    fn large_coefficients_use_periodicity() {
        let mut t = TypeTable::new();
        for k in 1..=3 {
            let big = t.type_of_ordinal(&o("w^2*1000000 + w*77 + 123456"), k);
            let small = t.type_of_ordinal(&o("w^2*40 + w*41 + 42"), k);
            assert_eq!(big, small);
        }
    }

    #[test]
    fn absorption() {
        let mut t = TypeTable::new();
        for k in 0..=3 {
            let w = t.type_of_ordinal(&o("w"), k);
            for n in 0..=5 {
                let f = t.type_of_ordinal(&Ordinal::finite(n), k);
                assert_eq!(t.sum(f, w).unwrap(), w);
            }
        }
    }

    #[test]
    fn encodings_are_content_determined() {
        let mut a = TypeTable::new();
        let mut b = TypeTable::new();
        // different creation orders
        let x = a.type_of_ordinal(&o("w*2 + 1"), 3);
        let _ = b.type_of_ordinal(&o("w^3 + 5"), 3);
        let y = b.type_of_ordinal(&o("w*2 + 1"), 3);
        assert_eq!(a.encoding(x), b.encoding(y));
        assert_eq!(a.encoding(a.atom()), "0");
        let s1 = a.type_singleton(1);
        let e1 = a.type_empty(1);
        assert_ne!(a.encoding(s1), a.encoding(e1));
    }

    #[test]
    fn dump_format() {
        let mut t = TypeTable::new();
        t.type_singleton(1);
        let dump = t.dump();
        let lines: Vec<&str> = dump.lines().collect();
        assert_eq!(lines[0], "0 0 0");
        assert!(lines.iter().all(|l| l.split(' ').count() == 3));
    }

    #[test]
    fn stats_count_levels() {
        let mut t = TypeTable::new();
        let s = t.type_singleton(2);
        let st = t.stats(s);
        assert_eq!(st.cardinality, 1);
        assert_eq!(st.nodes_per_level, vec![1, 1, 0]);
        assert_eq!(st.total_nodes, 2);
    }
}
