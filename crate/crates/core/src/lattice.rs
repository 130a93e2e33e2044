//! Closure operator and enumeration of frequent closed sets and frequent
//! minimal generators.
//!
//! Closed sets are found with a closure-extension depth-first search in the
//! style of LCM: each node extends its closed set by one item, takes the
//! closure of the resulting occurrence list, and keeps the child only when
//! the extension is prefix-preserving, so every closed set is produced
//! exactly once. One pass over a node's transactions counts every item, which
//! gives both the closure (items seen in every row) and the frequent
//! extensions; occurrence lists are then built for those extensions only.
//!
//! Minimal generators are downward closed, so they are grown level by level:
//! a candidate is a generator when it is frequent and strictly less frequent
//! than each of its immediate subsets, all of which must be generators.

use std::collections::HashMap;

use thiserror::Error;

use crate::bounds::{self, Bound};
use crate::dataset::{Support, TransactionDB};
use crate::itemset::{ItemId, Itemset};
use crate::rational::Rational;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LatticeError {
    #[error("support threshold {0} is outside (0, 1]")]
    InvalidThreshold(Rational),
    #[error("inconsistent index: {0}")]
    Inconsistent(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SupportedSet {
    pub set: Itemset,
    pub sup: Support,
}

/// Closure of `x` in `db`: the intersection of all transactions containing
/// `x`, or the whole universe when no transaction does.
pub fn closure(db: &TransactionDB, x: &Itemset) -> Itemset {
    let tids = db.tids_unchecked(x);
    if tids.is_empty() {
        return db.universe();
    }
    intersect_rows(db.rows(), &tids)
}

fn intersect_rows(rows: &[Itemset], tids: &[u32]) -> Itemset {
    let mut acc: Vec<ItemId> = rows[tids[0] as usize].ids().to_vec();
    for &t in &tids[1..] {
        let row = &rows[t as usize];
        acc.retain(|&i| row.contains(i));
        if acc.is_empty() {
            break;
        }
    }
    Itemset::from_sorted(acc)
}

/// Frequent closed sets and frequent minimal generators at one threshold,
/// with the lookups every bound and generator query needs.
#[derive(Debug, Clone)]
pub struct LatticeIndex {
    tau: Rational,
    n: u64,
    item_names: Vec<String>,
    closed: Vec<SupportedSet>,
    generators: Vec<SupportedSet>,
    gen_closure: Vec<usize>,
    closed_lookup: HashMap<Itemset, usize>,
    gen_lookup: HashMap<Itemset, usize>,
    /// Closed-set positions by descending support, overall and per item.
    by_support: Vec<usize>,
    item_closed: Vec<Vec<usize>>,
    mxs: Vec<Bound>,
    kmns: Vec<Bound>,
}

/// Enumerates FC and FG of `db` at support threshold `tau`.
pub fn mine(db: &TransactionDB, tau: Rational) -> Result<LatticeIndex, LatticeError> {
    if !tau.in_unit_interval() {
        return Err(LatticeError::InvalidThreshold(tau));
    }
    let n = db.n();
    let minsup = tau.min_count(n).max(1);
    let mut miner = Miner::new(db, minsup);
    let closed = miner.closed_sets();
    let generators = miner.generators();
    LatticeIndex::from_parts(tau, n, db.item_names().to_vec(), closed, generators)
}

/// Rows restricted to frequent items, with per-item scratch space for
/// occurrence counting. Closures of frequent sets only ever contain
/// frequent items, so nothing is lost by the restriction.
struct Miner {
    rows: Vec<Vec<ItemId>>,
    n: u64,
    minsup: u64,
    count: Vec<u32>,
    slot: Vec<u32>,
    touched: Vec<ItemId>,
}

impl Miner {
    fn new(db: &TransactionDB, minsup: u64) -> Self {
        let m = db.m();
        let frequent: Vec<bool> = (0..m as ItemId)
            .map(|i| db.tidlist(i).map_or(0, |t| t.len()) as u64 >= minsup)
            .collect();
        let rows = db
            .rows()
            .iter()
            .map(|r| r.iter().filter(|&i| frequent[i as usize]).collect())
            .collect();
        Miner {
            rows,
            n: db.n(),
            minsup,
            count: vec![0; m],
            slot: vec![0; m],
            touched: Vec::new(),
        }
    }

    /// Counts the items of `rows[tids]` that pass `keep`, leaving the
    /// counts in `self.count` and the items seen in `self.touched`.
    fn count_items(&mut self, tids: &[u32], keep: impl Fn(ItemId) -> bool) {
        for &t in tids {
            for &i in &self.rows[t as usize] {
                if !keep(i) {
                    continue;
                }
                if self.count[i as usize] == 0 {
                    self.touched.push(i);
                }
                self.count[i as usize] += 1;
            }
        }
    }

    fn reset_counts(&mut self) {
        for &i in &self.touched {
            self.count[i as usize] = 0;
        }
        self.touched.clear();
    }

    /// Occurrence lists of `items` (ascending) within `tids`.
    fn deliver(&mut self, tids: &[u32], items: &[ItemId]) -> Vec<Vec<u32>> {
        for (k, &i) in items.iter().enumerate() {
            self.slot[i as usize] = k as u32 + 1;
        }
        let mut lists = vec![Vec::new(); items.len()];
        for &t in tids {
            for &i in &self.rows[t as usize] {
                let k = self.slot[i as usize];
                if k > 0 {
                    lists[k as usize - 1].push(t);
                }
            }
        }
        for &i in items {
            self.slot[i as usize] = 0;
        }
        lists
    }

    fn closed_sets(&mut self) -> Vec<SupportedSet> {
        let all: Vec<u32> = (0..self.n as u32).collect();
        let mut out = Vec::new();
        self.closed_node(&Itemset::empty(), None, &all, &mut out);
        out
    }

    /// Visits `closure(parent ∪ {e})`, whose occurrences are `tids`, unless
    /// the closure adds an item below `e` that is not in `parent`.
    fn closed_node(
        &mut self,
        parent: &Itemset,
        e: Option<ItemId>,
        tids: &[u32],
        out: &mut Vec<SupportedSet>,
    ) {
        let size = tids.len() as u32;
        self.count_items(tids, |_| true);
        let mut closure: Vec<ItemId> = self
            .touched
            .iter()
            .copied()
            .filter(|&i| self.count[i as usize] == size)
            .collect();
        closure.sort_unstable();
        let closure = Itemset::from_sorted(closure);
        if let Some(e) = e {
            if closure.iter().any(|j| j < e && !parent.contains(j)) {
                self.reset_counts();
                return;
            }
        }
        let mut ext: Vec<ItemId> = self
            .touched
            .iter()
            .copied()
            .filter(|&i| {
                let c = self.count[i as usize];
                c < size && c as u64 >= self.minsup && e.is_none_or(|e| i > e)
            })
            .collect();
        ext.sort_unstable();
        self.reset_counts();
        out.push(SupportedSet {
            set: closure.clone(),
            sup: Support::new(size as u64, self.n),
        });
        let lists = self.deliver(tids, &ext);
        for (i, child_tids) in ext.into_iter().zip(lists) {
            self.closed_node(&closure, Some(i), &child_tids, out);
        }
    }

    fn generators(&mut self) -> Vec<SupportedSet> {
        let n = self.n;
        let mut counts: HashMap<Itemset, u64> = HashMap::new();
        counts.insert(Itemset::empty(), n);
        let mut out = vec![SupportedSet {
            set: Itemset::empty(),
            sup: Support::new(n, n),
        }];
        let mut level: Vec<(Itemset, Vec<u32>)> = vec![(Itemset::empty(), (0..n as u32).collect())];
        while !level.is_empty() {
            let mut next = Vec::new();
            for (gen, tids) in &level {
                let last = gen.last();
                self.count_items(tids, |i| last.is_none_or(|l| i > l));
                let mut ext: Vec<ItemId> = self
                    .touched
                    .iter()
                    .copied()
                    .filter(|&i| {
                        let c = self.count[i as usize] as u64;
                        c >= self.minsup && {
                            let cand = gen.with(i);
                            (0..cand.len()).all(|pos| {
                                counts.get(&cand.without_index(pos)).is_some_and(|&s| s > c)
                            })
                        }
                    })
                    .collect();
                ext.sort_unstable();
                self.reset_counts();
                let lists = self.deliver(tids, &ext);
                next.extend(ext.into_iter().zip(lists).map(|(i, t)| (gen.with(i), t)));
            }
            for (g, tids) in &next {
                counts.insert(g.clone(), tids.len() as u64);
                out.push(SupportedSet {
                    set: g.clone(),
                    sup: Support::new(tids.len() as u64, n),
                });
            }
            level = next;
        }
        out
    }
}

impl LatticeIndex {
    /// Assembles an index from already-enumerated FC and FG, checking the
    /// structural invariants that do not need the database.
    pub fn from_parts(
        tau: Rational,
        n: u64,
        item_names: Vec<String>,
        mut closed: Vec<SupportedSet>,
        mut generators: Vec<SupportedSet>,
    ) -> Result<Self, LatticeError> {
        let bad = |msg: String| Err(LatticeError::Inconsistent(msg));
        if !tau.in_unit_interval() {
            return Err(LatticeError::InvalidThreshold(tau));
        }
        if n == 0 {
            return bad("zero transactions".into());
        }
        let m = item_names.len();
        if item_names.windows(2).any(|w| w[0] >= w[1]) {
            return bad("item names must be strictly increasing".into());
        }
        for s in closed.iter().chain(&generators) {
            if s.sup.n != n || s.sup.count > n {
                return bad(format!("support {} of {} does not fit n={n}", s.sup, s.set));
            }
            if !s.sup.meets(tau) {
                return bad(format!("{} is not frequent", s.set));
            }
            if s.set.last().is_some_and(|l| l as usize >= m) {
                return bad(format!("{} names an unknown item", s.set));
            }
        }
        closed.sort_by(|a, b| a.set.graded_cmp(&b.set));
        generators.sort_by(|a, b| a.set.graded_cmp(&b.set));
        if closed.windows(2).any(|w| w[0].set == w[1].set)
            || generators.windows(2).any(|w| w[0].set == w[1].set)
        {
            return bad("duplicate itemset".into());
        }
        if generators
            .first()
            .is_none_or(|g| !g.set.is_empty() || g.sup.count != n)
        {
            return bad("the empty set must be a generator with full support".into());
        }
        if closed.first().is_none_or(|c| c.sup.count != n) {
            return bad("the closure of the empty set must be present with full support".into());
        }

        let closed_lookup = closed
            .iter()
            .enumerate()
            .map(|(i, s)| (s.set.clone(), i))
            .collect();
        let gen_lookup = generators
            .iter()
            .enumerate()
            .map(|(i, s)| (s.set.clone(), i))
            .collect();
        let mut by_support: Vec<usize> = (0..closed.len()).collect();
        by_support.sort_by(|&a, &b| {
            closed[b]
                .sup
                .count
                .cmp(&closed[a].sup.count)
                .then(a.cmp(&b))
        });
        let mut item_closed = vec![Vec::new(); m];
        for &i in &by_support {
            for id in closed[i].set.iter() {
                item_closed[id as usize].push(i);
            }
        }
        let mut index = LatticeIndex {
            tau,
            n,
            item_names,
            closed,
            generators,
            gen_closure: Vec::new(),
            closed_lookup,
            gen_lookup,
            by_support,
            item_closed,
            mxs: Vec::new(),
            kmns: Vec::new(),
        };

        let mut gen_closure = Vec::with_capacity(index.generators.len());
        for g in &index.generators {
            match index.first_superset(&g.set, Some(g.sup.count), |_| true) {
                Some(c) if index.closed[c].sup == g.sup => gen_closure.push(c),
                _ => {
                    return bad(format!(
                        "generator {} has no closed set of equal support",
                        g.set
                    ))
                }
            }
        }
        index.gen_closure = gen_closure;
        for (i, g) in index.generators.iter().enumerate() {
            for pos in 0..g.set.len() {
                match index.gen_lookup.get(&g.set.without_index(pos)) {
                    Some(&j) if index.generators[j].sup.count > g.sup.count => {}
                    _ => {
                        return bad(format!(
                            "generator {} is not minimal",
                            index.generators[i].set
                        ))
                    }
                }
            }
        }
        index.mxs = (0..index.closed.len())
            .map(|i| bounds::compute_mxs(&index, i))
            .collect();
        index.kmns = (0..index.generators.len())
            .map(|i| bounds::compute_kmns_of_generator(&index, i))
            .collect();
        for (i, c) in index.closed.iter().enumerate() {
            if Bound::Fraction(c.sup) <= index.mxs[i] {
                return bad(format!("{} is not closed", c.set));
            }
        }
        Ok(index)
    }

    pub fn tau(&self) -> Rational {
        self.tau
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn item_names(&self) -> &[String] {
        &self.item_names
    }

    pub fn names_of(&self, x: &Itemset) -> Vec<&str> {
        x.iter()
            .map(|id| self.item_names[id as usize].as_str())
            .collect()
    }

    /// FC, ordered by cardinality and then lexicographically.
    pub fn closed(&self) -> &[SupportedSet] {
        &self.closed
    }

    /// FG, ordered by cardinality and then lexicographically.
    pub fn generators(&self) -> &[SupportedSet] {
        &self.generators
    }

    /// Index into `closed()` of the closure of each generator.
    pub fn gen_closure(&self) -> &[usize] {
        &self.gen_closure
    }

    pub fn closed_position(&self, x: &Itemset) -> Option<usize> {
        self.closed_lookup.get(x).copied()
    }

    pub fn generator_position(&self, x: &Itemset) -> Option<usize> {
        self.gen_lookup.get(x).copied()
    }

    pub fn is_closed(&self, x: &Itemset) -> bool {
        self.closed_lookup.contains_key(x)
    }

    pub fn is_generator(&self, x: &Itemset) -> bool {
        self.gen_lookup.contains_key(x)
    }

    pub(crate) fn mxs_at(&self, closed_pos: usize) -> Bound {
        self.mxs[closed_pos]
    }

    pub(crate) fn kmns_at(&self, gen_pos: usize) -> Bound {
        self.kmns[gen_pos]
    }

    /// Positions of the closed sets containing `x` (including `x` itself),
    /// in descending order of support.
    pub fn closed_supersets(&self, x: &Itemset) -> Vec<usize> {
        let mut out = Vec::new();
        self.first_superset(x, None, |c| {
            out.push(c);
            false
        });
        out
    }

    /// Walks the closed supersets of `x` with support at most `max_count`
    /// in descending order of support until `visit` returns true.
    pub(crate) fn first_superset(
        &self,
        x: &Itemset,
        max_count: Option<u64>,
        mut visit: impl FnMut(usize) -> bool,
    ) -> Option<usize> {
        if x.last()
            .is_some_and(|l| l as usize >= self.item_closed.len())
        {
            return None;
        }
        let list = x
            .iter()
            .map(|i| &self.item_closed[i as usize])
            .min_by_key(|l| l.len())
            .unwrap_or(&self.by_support);
        let start = max_count.map_or(0, |mc| {
            list.partition_point(|&c| self.closed[c].sup.count > mc)
        });
        list[start..]
            .iter()
            .copied()
            .find(|&c| x.is_subset(&self.closed[c].set) && visit(c))
    }

    /// Position of the closure of `x`, which exists exactly when `x` is
    /// frequent: it is the closed superset of largest support.
    pub fn closure_index(&self, x: &Itemset) -> Option<usize> {
        self.first_superset(x, None, |_| true)
    }

    /// Closure of a frequent itemset; `None` when `x` is not frequent.
    pub fn closure_of(&self, x: &Itemset) -> Option<&SupportedSet> {
        self.closure_index(x).map(|i| &self.closed[i])
    }

    /// Support of a frequent itemset, read off its closure.
    pub fn support_of(&self, x: &Itemset) -> Option<Support> {
        self.closure_of(x).map(|c| c.sup)
    }

    /// Visits every frequent minimal generator contained in `x` (including
    /// `x` itself when it is one), as positions into `generators()`.
    pub fn for_each_generator_subset(&self, x: &Itemset, mut visit: impl FnMut(usize)) {
        fn walk(
            index: &LatticeIndex,
            x: &Itemset,
            prefix: &Itemset,
            start: usize,
            visit: &mut dyn FnMut(usize),
        ) {
            for pos in start..x.len() {
                let cand = prefix.with(x.ids()[pos]);
                if let Some(&g) = index.gen_lookup.get(&cand) {
                    visit(g);
                    walk(index, x, &cand, pos + 1, visit);
                }
            }
        }
        if let Some(&root) = self.gen_lookup.get(&Itemset::empty()) {
            visit(root);
            walk(self, x, &Itemset::empty(), 0, &mut visit);
        }
    }

    /// Positions of the generators that are proper subsets of `x`.
    pub fn proper_generator_subsets(&self, x: &Itemset) -> Vec<usize> {
        let mut out = Vec::new();
        self.for_each_generator_subset(x, |g| {
            if self.generators[g].set.len() < x.len() {
                out.push(g);
            }
        });
        out
    }

    /// Positions of the frequent closed sets that are proper subsets of `x`.
    /// Each one is the closure of a generator it contains.
    pub fn proper_closed_subsets(&self, x: &Itemset) -> Vec<usize> {
        let mut out = Vec::new();
        self.for_each_generator_subset(x, |g| {
            let c = self.gen_closure[g];
            if self.closed[c].set.is_proper_subset(x) {
                out.push(c);
            }
        });
        out.sort_unstable();
        out.dedup();
        out
    }
}

/// `x` is closed iff its support exceeds mxs(x); `x` must be frequent.
pub fn is_closed_via_bounds(
    x: &SupportedSet,
    index: &LatticeIndex,
) -> Result<bool, bounds::BoundsError> {
    let mxs = bounds::mxs_of_frequent(index, &x.set)?;
    Ok(Bound::Fraction(x.sup) > mxs)
}
