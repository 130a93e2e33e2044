//! Support bounds attached to itemsets of a [`LatticeIndex`]:
//!
//! * `mxs(X)`: largest support of a proper frequent closed superset, or 0;
//! * `kmns(X)`: smallest support of a proper minimal-generator subset, or ∞;
//! * `bmns(X)`: smallest support of a proper frequent closed subset, or ∞;
//! * `mxgs(X, γ)`: largest support of a proper minimal-generator subset `Y`
//!   with `γ·sup(Y) ≤ sup(X)`, or 0.
//!
//! `mxgs` is a step function of γ. [`BreakpointTable`] stores, per closed
//! set, the points where it steps, so that it can be evaluated for any
//! confidence threshold with a binary search and no access to the lattice.

use std::cmp::Ordering;
use std::collections::HashMap;

use thiserror::Error;

use crate::dataset::Support;
use crate::itemset::Itemset;
use crate::lattice::LatticeIndex;
use crate::rational::Rational;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BoundsError {
    #[error("{0} is not a frequent closed set")]
    NotClosed(Itemset),
    #[error("{0} is not frequent")]
    NotFrequent(Itemset),
    #[error("confidence threshold {0} is outside (0, 1]")]
    InvalidConfidence(Rational),
    #[error("no breakpoints recorded for {0}")]
    NoEntry(Itemset),
    #[error("malformed breakpoint table: {0}")]
    Malformed(String),
}

/// A support value extended with the sentinels 0 and ∞.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Bound {
    Zero,
    Fraction(Support),
    Infinity,
}

impl Bound {
    /// Support count, with `Zero` as 0 and `Infinity` as `None`.
    pub fn count(&self) -> Option<u64> {
        match self {
            Bound::Zero => Some(0),
            Bound::Fraction(s) => Some(s.count),
            Bound::Infinity => None,
        }
    }

    fn rank(&self) -> u8 {
        match self {
            Bound::Zero => 0,
            Bound::Fraction(_) => 1,
            Bound::Infinity => 2,
        }
    }
}

impl Ord for Bound {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Bound::Fraction(a), Bound::Fraction(b)) => a.cmp(b),
            _ => self.rank().cmp(&other.rank()),
        }
    }
}

impl PartialOrd for Bound {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl std::fmt::Display for Bound {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Bound::Zero => f.write_str("0"),
            Bound::Fraction(s) => write!(f, "{s}"),
            Bound::Infinity => f.write_str("inf"),
        }
    }
}

fn check_gamma(gamma: Rational) -> Result<(), BoundsError> {
    if gamma.in_unit_interval() {
        Ok(())
    } else {
        Err(BoundsError::InvalidConfidence(gamma))
    }
}

pub(crate) fn compute_mxs(index: &LatticeIndex, closed_pos: usize) -> Bound {
    let x = &index.closed()[closed_pos];
    index
        .first_superset(&x.set, Some(x.sup.count), |c| c != closed_pos)
        .map_or(Bound::Zero, |c| Bound::Fraction(index.closed()[c].sup))
}

/// kmns of a generator: its immediate subsets are generators of larger
/// support, and every proper subset lies below one of them.
pub(crate) fn compute_kmns_of_generator(index: &LatticeIndex, gen_pos: usize) -> Bound {
    let g = &index.generators()[gen_pos].set;
    (0..g.len())
        .filter_map(|pos| index.generator_position(&g.without_index(pos)))
        .map(|p| Bound::Fraction(index.generators()[p].sup))
        .min()
        .unwrap_or(Bound::Infinity)
}

pub fn mxs(index: &LatticeIndex, x: &Itemset) -> Result<Bound, BoundsError> {
    index
        .closed_position(x)
        .map(|p| index.mxs_at(p))
        .ok_or_else(|| BoundsError::NotClosed(x.clone()))
}

/// mxs for any frequent itemset, closed or not.
pub fn mxs_of_frequent(index: &LatticeIndex, x: &Itemset) -> Result<Bound, BoundsError> {
    if let Some(p) = index.closed_position(x) {
        return Ok(index.mxs_at(p));
    }
    // the closure itself is the closed proper superset of largest support
    index
        .closure_of(x)
        .map(|c| Bound::Fraction(c.sup))
        .ok_or_else(|| BoundsError::NotFrequent(x.clone()))
}

/// kmns of a frequent itemset. A frequent set that is not a minimal
/// generator contains one of equal support, and nothing inside it is less
/// frequent, so its kmns is its own support.
pub fn kmns(index: &LatticeIndex, x: &Itemset) -> Result<Bound, BoundsError> {
    if let Some(p) = index.generator_position(x) {
        return Ok(index.kmns_at(p));
    }
    index
        .support_of(x)
        .map(Bound::Fraction)
        .ok_or_else(|| BoundsError::NotFrequent(x.clone()))
}

pub fn bmns(index: &LatticeIndex, x: &Itemset) -> Result<Bound, BoundsError> {
    if index.support_of(x).is_none() {
        return Err(BoundsError::NotFrequent(x.clone()));
    }
    Ok(index
        .proper_closed_subsets(x)
        .into_iter()
        .map(|c| Bound::Fraction(index.closed()[c].sup))
        .min()
        .unwrap_or(Bound::Infinity))
}

pub fn mxgs(index: &LatticeIndex, x: &Itemset, gamma: Rational) -> Result<Bound, BoundsError> {
    check_gamma(gamma)?;
    let pos = index
        .closed_position(x)
        .ok_or_else(|| BoundsError::NotClosed(x.clone()))?;
    let sup = index.closed()[pos].sup;
    Ok(index
        .proper_generator_subsets(x)
        .into_iter()
        .map(|g| index.generators()[g].sup)
        .filter(|y| gamma.mul_cmp(y.count, sup.count) != Ordering::Greater)
        .max()
        .map_or(Bound::Zero, Bound::Fraction))
}

/// Breakpoints of `mxgs(X, ·)` for one closed set `X`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BreakpointEntry {
    pub set: Itemset,
    /// Support count of `set`.
    pub support: u64,
    /// Distinct support counts of the proper generator subsets, descending.
    pub y: Vec<u64>,
    /// `p[0] = 0` and `p[i] = support / y[i-1]`; strictly increasing.
    pub p: Vec<Rational>,
}

impl BreakpointEntry {
    fn new(set: Itemset, support: u64, mut y: Vec<u64>) -> Self {
        y.sort_unstable_by(|a, b| b.cmp(a));
        y.dedup();
        let mut p = Vec::with_capacity(y.len() + 1);
        p.push(Rational::ZERO);
        p.extend(y.iter().map(|&yi| Rational::from_counts(support, yi)));
        BreakpointEntry { set, support, y, p }
    }

    /// mxgs for this set: `y[i]` on `(p[i], p[i+1]]`, 0 beyond `p[k]`.
    pub fn mxgs_count(&self, gamma: Rational) -> u64 {
        let j = self.p[1..].partition_point(|p| *p < gamma);
        self.y.get(j).copied().unwrap_or(0)
    }

    fn validate(&self, n: u64) -> Result<(), String> {
        let k = self.y.len();
        if k == 0 || self.p.len() != k + 1 {
            return Err(format!(
                "{}: breakpoint lists have the wrong length",
                self.set
            ));
        }
        if self.support == 0 || self.support > n || self.y.iter().any(|&y| y > n) {
            return Err(format!("{}: count out of range", self.set));
        }
        if self.y.windows(2).any(|w| w[0] <= w[1]) {
            return Err(format!(
                "{}: supports are not strictly descending",
                self.set
            ));
        }
        if self.y[k - 1] < self.support {
            return Err(format!(
                "{}: generator support below the set's support",
                self.set
            ));
        }
        if self.p[0] != Rational::ZERO
            || self
                .y
                .iter()
                .zip(&self.p[1..])
                .any(|(&y, &p)| p != Rational::from_counts(self.support, y))
        {
            return Err(format!("{}: breakpoints do not match supports", self.set));
        }
        Ok(())
    }
}

/// The support-only preprocessing artifact: one [`BreakpointEntry`] per
/// nonempty frequent closed set.
#[derive(Debug, Clone)]
pub struct BreakpointTable {
    tau: Rational,
    n: u64,
    entries: Vec<BreakpointEntry>,
    lookup: HashMap<Itemset, usize>,
}

impl PartialEq for BreakpointTable {
    fn eq(&self, other: &Self) -> bool {
        self.tau == other.tau && self.n == other.n && self.entries == other.entries
    }
}

impl BreakpointTable {
    pub fn from_entries(
        tau: Rational,
        n: u64,
        entries: Vec<BreakpointEntry>,
    ) -> Result<Self, BoundsError> {
        let mut lookup = HashMap::with_capacity(entries.len());
        for (i, e) in entries.iter().enumerate() {
            e.validate(n).map_err(BoundsError::Malformed)?;
            if lookup.insert(e.set.clone(), i).is_some() {
                return Err(BoundsError::Malformed(format!(
                    "duplicate entry for {}",
                    e.set
                )));
            }
        }
        Ok(BreakpointTable {
            tau,
            n,
            entries,
            lookup,
        })
    }

    pub fn tau(&self) -> Rational {
        self.tau
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn entries(&self) -> &[BreakpointEntry] {
        &self.entries
    }

    pub fn entry(&self, x: &Itemset) -> Option<&BreakpointEntry> {
        self.lookup.get(x).map(|&i| &self.entries[i])
    }
}

pub fn build_breakpoints(index: &LatticeIndex) -> BreakpointTable {
    let entries = index
        .closed()
        .iter()
        .filter(|c| !c.set.is_empty())
        .map(|c| {
            let y = index
                .proper_generator_subsets(&c.set)
                .into_iter()
                .map(|g| index.generators()[g].sup.count)
                .collect();
            BreakpointEntry::new(c.set.clone(), c.sup.count, y)
        })
        .collect();
    BreakpointTable::from_entries(index.tau(), index.n(), entries)
        .expect("breakpoints built from a valid index")
}

pub fn mxgs_from_table(
    table: &BreakpointTable,
    x: &Itemset,
    gamma: Rational,
) -> Result<Bound, BoundsError> {
    check_gamma(gamma)?;
    let entry = table
        .entry(x)
        .ok_or_else(|| BoundsError::NoEntry(x.clone()))?;
    Ok(match entry.mxgs_count(gamma) {
        0 => Bound::Zero,
        c => Bound::Fraction(Support::new(c, table.n)),
    })
}
