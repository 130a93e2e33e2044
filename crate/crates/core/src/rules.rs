//! Rule bases over a [`LatticeIndex`].
//!
//! * [`gen_rr_complete`]: every representative rule. A closed set `X`
//!   yields one iff `γ·mxgs(X, γ) > mxs(X)`; its antecedents are the
//!   generators `X0 ⊂ X` with `mxs(X)/γ < sup(X0) ≤ sup(X)/γ < kmns(X0)`.
//! * [`gen_rr_twophase`]: the same rules, with `mxgs` read from a
//!   precomputed [`BreakpointTable`] instead of the lattice.
//! * [`gen_rr_heuristic`]: the older filter `sup(X) ≥ γ·kmns(X) > mxs(X)`,
//!   which can miss representative rules. Kept for comparison.
//! * [`gen_bstar`]: the closure-based basis B*, whose rules have closed
//!   antecedents and confidence below 1.

use std::cmp::Ordering;
use std::collections::HashSet;

use thiserror::Error;

use crate::bounds::{self, Bound, BoundsError, BreakpointTable};
use crate::dataset::{Support, TransactionDB};
use crate::itemset::Itemset;
use crate::lattice::{self, LatticeIndex};
use crate::rational::Rational;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RuleError {
    #[error(transparent)]
    Bounds(#[from] BoundsError),
    #[error("breakpoint table was built for tau={table_tau}, n={table_n} but the index has tau={index_tau}, n={index_n}")]
    TableMismatch {
        table_tau: Rational,
        table_n: u64,
        index_tau: Rational,
        index_n: u64,
    },
    #[error("{0} is not frequent, its closure is unknown")]
    NotFrequent(Itemset),
    #[error("invalid rule: {0}")]
    InvalidRule(String),
}

/// `antecedent -> consequent` with exact support and confidence.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Rule {
    pub antecedent: Itemset,
    pub consequent: Itemset,
    /// Support of antecedent ∪ consequent.
    pub support: Support,
    pub confidence: Rational,
}

impl Rule {
    /// Builds a rule from the support count of its antecedent.
    pub fn new(
        antecedent: Itemset,
        consequent: Itemset,
        support: Support,
        antecedent_count: u64,
    ) -> Result<Self, RuleError> {
        if consequent.is_empty() {
            return Err(RuleError::InvalidRule("empty consequent".into()));
        }
        if !antecedent.is_disjoint(&consequent) {
            return Err(RuleError::InvalidRule(format!(
                "{antecedent} and {consequent} overlap"
            )));
        }
        if antecedent_count == 0 || antecedent_count < support.count || antecedent_count > support.n
        {
            return Err(RuleError::InvalidRule(format!(
                "antecedent count {antecedent_count} incompatible with support {support}"
            )));
        }
        Ok(Rule {
            antecedent,
            consequent,
            support,
            confidence: Rational::from_counts(support.count, antecedent_count),
        })
    }

    /// `x -> z \ x` for `x ⊂ z`, given both support counts.
    pub(crate) fn split(x: &Itemset, z: &Itemset, z_sup: Support, x_count: u64) -> Self {
        Rule {
            antecedent: x.clone(),
            consequent: z.difference(x),
            support: z_sup,
            confidence: Rational::from_counts(z_sup.count, x_count),
        }
    }

    pub fn union(&self) -> Itemset {
        self.antecedent.union(&self.consequent)
    }

    /// Canonical ordering key: union first, then antecedent.
    pub fn sort_key(&self) -> (Itemset, Itemset) {
        (self.union(), self.antecedent.clone())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Provenance {
    Complete,
    TwoPhase,
    Heuristic,
    BStar,
    AllRules,
    RepresentativeByDefinition,
    BStarByDefinition,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleSet {
    pub tau: Rational,
    pub gamma: Rational,
    pub provenance: Provenance,
    rules: Vec<Rule>,
}

/// Rules present in one set but not the other, compared by
/// (antecedent, consequent).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RuleDiff {
    pub missing: Vec<Rule>,
    pub extra: Vec<Rule>,
}

impl RuleDiff {
    pub fn is_empty(&self) -> bool {
        self.missing.is_empty() && self.extra.is_empty()
    }
}

impl RuleSet {
    /// Sorts into the canonical order and drops duplicate
    /// (antecedent, consequent) pairs.
    pub fn new(
        tau: Rational,
        gamma: Rational,
        provenance: Provenance,
        mut rules: Vec<Rule>,
    ) -> Self {
        rules.sort_by_cached_key(Rule::sort_key);
        rules.dedup_by(|a, b| a.antecedent == b.antecedent && a.consequent == b.consequent);
        RuleSet {
            tau,
            gamma,
            provenance,
            rules,
        }
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Rule> {
        self.rules.iter()
    }

    fn keys(&self) -> HashSet<(&Itemset, &Itemset)> {
        self.rules
            .iter()
            .map(|r| (&r.antecedent, &r.consequent))
            .collect()
    }

    pub fn contains(&self, antecedent: &Itemset, consequent: &Itemset) -> bool {
        self.rules
            .iter()
            .any(|r| &r.antecedent == antecedent && &r.consequent == consequent)
    }

    /// `missing`: rules of `expected` absent here; `extra`: rules here absent
    /// from `expected`.
    pub fn diff(&self, expected: &RuleSet) -> RuleDiff {
        let mine = self.keys();
        let theirs = expected.keys();
        RuleDiff {
            missing: expected
                .rules
                .iter()
                .filter(|r| !mine.contains(&(&r.antecedent, &r.consequent)))
                .cloned()
                .collect(),
            extra: self
                .rules
                .iter()
                .filter(|r| !theirs.contains(&(&r.antecedent, &r.consequent)))
                .cloned()
                .collect(),
        }
    }

    /// True when every rule here also appears in `other`.
    pub fn is_subset_of(&self, other: &RuleSet) -> bool {
        self.diff(other).extra.is_empty()
    }
}

impl<'a> IntoIterator for &'a RuleSet {
    type Item = &'a Rule;
    type IntoIter = std::slice::Iter<'a, Rule>;

    fn into_iter(self) -> Self::IntoIter {
        self.rules.iter()
    }
}

/// `rp ∈ C(r)`: `rp` has a larger-or-equal antecedent and a
/// smaller-or-equal union.
pub fn covers(r: &Rule, rp: &Rule) -> bool {
    r.antecedent.is_subset(&rp.antecedent) && rp.union().is_subset(&r.union())
}

/// Anything that can close an itemset.
pub trait ClosureSystem {
    /// Closure of `x`, or `None` when this system cannot determine it.
    fn close(&self, x: &Itemset) -> Option<Itemset>;
}

impl ClosureSystem for TransactionDB {
    fn close(&self, x: &Itemset) -> Option<Itemset> {
        Some(lattice::closure(self, x))
    }
}

/// The index knows the closure of frequent itemsets only.
impl ClosureSystem for LatticeIndex {
    fn close(&self, x: &Itemset) -> Option<Itemset> {
        self.closure_of(x).map(|c| c.set.clone())
    }
}

fn close_or_err<C: ClosureSystem + ?Sized>(sys: &C, x: &Itemset) -> Result<Itemset, RuleError> {
    sys.close(x)
        .ok_or_else(|| RuleError::NotFrequent(x.clone()))
}

/// `rp` lies in the closure-based cover set of `r`:
/// `X ⊆ closure(X')` and `X'Y' ⊆ closure(XY)`.
pub fn closure_covers<C: ClosureSystem + ?Sized>(
    sys: &C,
    r: &Rule,
    rp: &Rule,
) -> Result<bool, RuleError> {
    let cl_ante = close_or_err(sys, &rp.antecedent)?;
    if !r.antecedent.is_subset(&cl_ante) {
        return Ok(false);
    }
    let cl_union = close_or_err(sys, &r.union())?;
    Ok(rp.union().is_subset(&cl_union))
}

/// Equal antecedent closures and equal union closures.
pub fn closure_equivalent<C: ClosureSystem + ?Sized>(
    sys: &C,
    r: &Rule,
    rp: &Rule,
) -> Result<bool, RuleError> {
    Ok(
        close_or_err(sys, &r.antecedent)? == close_or_err(sys, &rp.antecedent)?
            && close_or_err(sys, &r.union())? == close_or_err(sys, &rp.union())?,
    )
}

fn check_gamma(gamma: Rational) -> Result<(), RuleError> {
    if gamma.in_unit_interval() {
        Ok(())
    } else {
        Err(BoundsError::InvalidConfidence(gamma).into())
    }
}

/// `γ·a > b` on support counts.
fn scaled_gt(gamma: Rational, a: u64, b: u64) -> bool {
    gamma.mul_cmp(a, b) == Ordering::Greater
}

/// `mxs(X)/γ < sup(X0) ≤ sup(X)/γ < lower(X0)`, where `lower` is kmns for
/// generator antecedents and bmns for closed ones.
fn antecedent_in_window(
    gamma: Rational,
    mxs: Bound,
    x_count: u64,
    x0_count: u64,
    lower: Bound,
) -> bool {
    let mxs_count = mxs.count().expect("mxs is never infinite");
    scaled_gt(gamma, x0_count, mxs_count)
        && !scaled_gt(gamma, x0_count, x_count)
        && match lower.count() {
            None => true,
            Some(k) => scaled_gt(gamma, k, x_count),
        }
}

fn rr_from_closed_sets(
    index: &LatticeIndex,
    gamma: Rational,
    ri: &[usize],
    provenance: Provenance,
) -> RuleSet {
    let mut rules = Vec::new();
    for &c in ri {
        let x = &index.closed()[c];
        let mxs = index.mxs_at(c);
        for g in index.proper_generator_subsets(&x.set) {
            let x0 = &index.generators()[g];
            if antecedent_in_window(gamma, mxs, x.sup.count, x0.sup.count, index.kmns_at(g)) {
                rules.push(Rule::split(&x0.set, &x.set, x.sup, x0.sup.count));
            }
        }
    }
    RuleSet::new(index.tau(), gamma, provenance, rules)
}

fn ri_positions(index: &LatticeIndex, gamma: Rational) -> Vec<usize> {
    (0..index.closed().len())
        .filter(|&c| {
            let x = &index.closed()[c];
            let mxgs = bounds::mxgs(index, &x.set, gamma).expect("closed set of this index");
            match mxgs.count() {
                Some(m) if m > 0 => scaled_gt(gamma, m, index.mxs_at(c).count().unwrap_or(0)),
                _ => false,
            }
        })
        .collect()
}

/// RI: the frequent closed sets from which at least one representative rule
/// arises, `{X ∈ FC | γ·mxgs(X, γ) > mxs(X)}`.
pub fn representative_sets(
    index: &LatticeIndex,
    gamma: Rational,
) -> Result<Vec<Itemset>, RuleError> {
    check_gamma(gamma)?;
    Ok(ri_positions(index, gamma)
        .into_iter()
        .map(|c| index.closed()[c].set.clone())
        .collect())
}

/// All representative rules at the index's support threshold and `gamma`.
pub fn gen_rr_complete(index: &LatticeIndex, gamma: Rational) -> Result<RuleSet, RuleError> {
    check_gamma(gamma)?;
    let ri = ri_positions(index, gamma);
    Ok(rr_from_closed_sets(index, gamma, &ri, Provenance::Complete))
}

/// Representative rules with RI decided from the breakpoint table.
pub fn gen_rr_twophase(
    table: &BreakpointTable,
    index: &LatticeIndex,
    gamma: Rational,
) -> Result<RuleSet, RuleError> {
    check_gamma(gamma)?;
    let nonempty = index.closed().iter().filter(|c| !c.set.is_empty()).count();
    if table.tau() != index.tau() || table.n() != index.n() || table.entries().len() != nonempty {
        return Err(RuleError::TableMismatch {
            table_tau: table.tau(),
            table_n: table.n(),
            index_tau: index.tau(),
            index_n: index.n(),
        });
    }
    let mut ri = Vec::new();
    for (c, x) in index.closed().iter().enumerate() {
        if x.set.is_empty() {
            continue;
        }
        let entry = table
            .entry(&x.set)
            .ok_or_else(|| BoundsError::NoEntry(x.set.clone()))?;
        let y = entry.mxgs_count(gamma);
        if y > 0 && scaled_gt(gamma, y, index.mxs_at(c).count().unwrap_or(0)) {
            ri.push(c);
        }
    }
    Ok(rr_from_closed_sets(index, gamma, &ri, Provenance::TwoPhase))
}

/// The earlier generator whose RI filter is `sup(X) ≥ γ·kmns(X) > mxs(X)`.
/// Its output is a subset of the representative rules, sometimes proper.
pub fn gen_rr_heuristic(index: &LatticeIndex, gamma: Rational) -> Result<RuleSet, RuleError> {
    check_gamma(gamma)?;
    let mut ri = Vec::new();
    for (c, x) in index.closed().iter().enumerate() {
        if x.set.is_empty() {
            continue;
        }
        if kmns_interval_test(index, &x.set, gamma)? {
            ri.push(c);
        }
    }
    Ok(rr_from_closed_sets(
        index,
        gamma,
        &ri,
        Provenance::Heuristic,
    ))
}

fn interval_test(
    index: &LatticeIndex,
    x: &Itemset,
    gamma: Rational,
    lower: Bound,
) -> Result<bool, RuleError> {
    let pos = index
        .closed_position(x)
        .ok_or_else(|| BoundsError::NotClosed(x.clone()))?;
    let sup = index.closed()[pos].sup.count;
    let mxs = index.mxs_at(pos).count().unwrap_or(0);
    Ok(match lower.count() {
        None => false,
        Some(k) => !scaled_gt(gamma, k, sup) && scaled_gt(gamma, k, mxs),
    })
}

/// `sup(X) ≥ γ·kmns(X) > mxs(X)` for a frequent closed `X`.
pub fn kmns_interval_test(
    index: &LatticeIndex,
    x: &Itemset,
    gamma: Rational,
) -> Result<bool, RuleError> {
    interval_test(index, x, gamma, bounds::kmns(index, x)?)
}

/// `sup(X) ≥ γ·bmns(X) > mxs(X)` for a frequent closed `X`.
pub fn bmns_interval_test(
    index: &LatticeIndex,
    x: &Itemset,
    gamma: Rational,
) -> Result<bool, RuleError> {
    interval_test(index, x, gamma, bounds::bmns(index, x)?)
}

fn cri_positions(index: &LatticeIndex, gamma: Rational) -> Vec<usize> {
    (0..index.closed().len())
        .filter(|&c| {
            let x = &index.closed()[c];
            let mxgs = bounds::mxgs(index, &x.set, gamma).expect("closed set of this index");
            match mxgs.count() {
                Some(m) if m > x.sup.count => {
                    scaled_gt(gamma, m, index.mxs_at(c).count().unwrap_or(0))
                }
                _ => false,
            }
        })
        .collect()
}

/// CRI: `{X ∈ FC | γ·mxgs(X, γ) > mxs(X) and mxgs(X, γ) > sup(X)}`.
pub fn cri_sets(index: &LatticeIndex, gamma: Rational) -> Result<Vec<Itemset>, RuleError> {
    check_gamma(gamma)?;
    Ok(cri_positions(index, gamma)
        .into_iter()
        .map(|c| index.closed()[c].set.clone())
        .collect())
}

/// The closure-based basis B*: for each `X ∈ CRI` and each closed
/// `X0 ⊂ X` with `mxs(X)/γ < sup(X0) ≤ sup(X)/γ < bmns(X0)`, the rule
/// `X0 -> X \ X0`.
pub fn gen_bstar(index: &LatticeIndex, gamma: Rational) -> Result<RuleSet, RuleError> {
    check_gamma(gamma)?;
    let mut rules = Vec::new();
    for c in cri_positions(index, gamma) {
        let x = &index.closed()[c];
        let mxs = index.mxs_at(c);
        for c0 in index.proper_closed_subsets(&x.set) {
            let x0 = &index.closed()[c0];
            let lower = bounds::bmns(index, &x0.set)?;
            if antecedent_in_window(gamma, mxs, x.sup.count, x0.sup.count, lower) {
                rules.push(Rule::split(&x0.set, &x.set, x.sup, x0.sup.count));
            }
        }
    }
    Ok(RuleSet::new(index.tau(), gamma, Provenance::BStar, rules))
}
