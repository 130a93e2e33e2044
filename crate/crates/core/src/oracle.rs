//! Brute-force reference implementations of AR, RR and B*.
//!
//! Everything here works straight from the definitions over bitmask
//! itemsets: all `2^m` supports and closures are tabulated, every rule is
//! enumerated, and redundancy is decided by pairwise comparison. The cost is
//! exponential on purpose, so inputs are capped at [`MAX_ORACLE_ITEMS`].

use std::cmp::Ordering;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::bounds::build_breakpoints;
use crate::dataset::{DatasetError, Support, TransactionDB};
use crate::itemset::{ItemId, Itemset};
use crate::lattice::{mine, LatticeError, LatticeIndex};
use crate::rational::Rational;
use crate::rules::{self, Provenance, Rule, RuleDiff, RuleError, RuleSet};

pub const MAX_ORACLE_ITEMS: usize = 16;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("the oracle handles at most {MAX_ORACLE_ITEMS} items, got {0}")]
    TooManyItems(usize),
    #[error("threshold {0} is outside (0, 1]")]
    InvalidThreshold(Rational),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Rules(#[from] RuleError),
    #[error(transparent)]
    Dataset(#[from] DatasetError),
}

/// Supports and closures of every itemset of a small database.
struct MaskTables {
    n: u64,
    full: u32,
    count: Vec<u64>,
    closure: Vec<u32>,
}

impl MaskTables {
    fn new(db: &TransactionDB) -> Result<Self, OracleError> {
        let m = db.m();
        if m > MAX_ORACLE_ITEMS {
            return Err(OracleError::TooManyItems(m));
        }
        let size = 1usize << m;
        let full = (size - 1) as u32;
        let mut count = vec![0u64; size];
        let mut closure = vec![full; size];
        for row in db.rows() {
            let mask = to_mask(row);
            count[mask as usize] += 1;
            closure[mask as usize] = mask;
        }
        // superset sums for counts, superset intersections for closures
        for bit in 0..m {
            for mask in 0..size {
                if mask >> bit & 1 == 0 {
                    count[mask] += count[mask | 1 << bit];
                    closure[mask] &= closure[mask | 1 << bit];
                }
            }
        }
        Ok(MaskTables {
            n: db.n(),
            full,
            count,
            closure,
        })
    }

    fn support(&self, mask: u32) -> Support {
        Support::new(self.count[mask as usize], self.n)
    }
}

fn to_mask(x: &Itemset) -> u32 {
    x.iter().fold(0, |acc, i| acc | 1 << i)
}

fn from_mask(mask: u32) -> Itemset {
    (0..32 as ItemId).filter(|i| mask >> i & 1 == 1).collect()
}

fn subset(a: u32, b: u32) -> bool {
    a & !b == 0
}

/// A rule as (antecedent mask, union mask).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct MaskRule {
    x: u32,
    z: u32,
}

fn check_thresholds(tau: Rational, gamma: Rational) -> Result<(), OracleError> {
    for t in [tau, gamma] {
        if !t.in_unit_interval() {
            return Err(OracleError::InvalidThreshold(t));
        }
    }
    Ok(())
}

fn ar_masks(t: &MaskTables, tau: Rational, gamma: Rational) -> Vec<MaskRule> {
    let mut out = Vec::new();
    for z in 1..=t.full {
        let zc = t.count[z as usize];
        if !t.support(z).meets(tau) {
            continue;
        }
        // every proper subset x of z
        let mut x = (z - 1) & z;
        loop {
            if gamma.mul_cmp(t.count[x as usize], zc) != Ordering::Greater {
                out.push(MaskRule { x, z });
            }
            if x == 0 {
                break;
            }
            x = (x - 1) & z;
        }
    }
    out
}

fn to_rule_set(
    t: &MaskTables,
    tau: Rational,
    gamma: Rational,
    provenance: Provenance,
    rules: &[MaskRule],
) -> RuleSet {
    let rules = rules
        .iter()
        .map(|r| {
            let x = from_mask(r.x);
            let z = from_mask(r.z);
            Rule::new(
                x,
                from_mask(r.z & !r.x),
                t.support(r.z),
                t.count[r.x as usize],
            )
            .unwrap_or_else(|e| panic!("oracle built an invalid rule {z}: {e}"))
        })
        .collect();
    RuleSet::new(tau, gamma, provenance, rules)
}

/// AR: every `X -> Y` with `sup(XY) ≥ τ` and `c(X -> Y) ≥ γ`.
pub fn enumerate_ar(
    db: &TransactionDB,
    tau: Rational,
    gamma: Rational,
) -> Result<RuleSet, OracleError> {
    check_thresholds(tau, gamma)?;
    let t = MaskTables::new(db)?;
    Ok(to_rule_set(
        &t,
        tau,
        gamma,
        Provenance::AllRules,
        &ar_masks(&t, tau, gamma),
    ))
}

fn rr_masks(ar: &[MaskRule]) -> Vec<MaskRule> {
    // r is dropped when some other r' has r ∈ C(r'): X' ⊆ X and Z ⊆ Z'
    ar.iter()
        .filter(|r| {
            !ar.iter()
                .any(|rp| rp != *r && subset(rp.x, r.x) && subset(r.z, rp.z))
        })
        .copied()
        .collect()
}

/// RR: the rules of AR that lie in no other rule's cover set.
pub fn rr_by_definition(
    db: &TransactionDB,
    tau: Rational,
    gamma: Rational,
) -> Result<RuleSet, OracleError> {
    check_thresholds(tau, gamma)?;
    let t = MaskTables::new(db)?;
    let ar = ar_masks(&t, tau, gamma);
    Ok(to_rule_set(
        &t,
        tau,
        gamma,
        Provenance::RepresentativeByDefinition,
        &rr_masks(&ar),
    ))
}

fn bstar_masks(t: &MaskTables, ar: &[MaskRule]) -> Vec<MaskRule> {
    let cl = |m: u32| t.closure[m as usize];
    let partial: Vec<&MaskRule> = ar
        .iter()
        .filter(|r| t.count[r.x as usize] > t.count[r.z as usize])
        .collect();
    let mut out: Vec<MaskRule> = partial
        .iter()
        .filter(|r| {
            // r is closure-based redundant w.r.t. rp when
            // X' ⊆ cl(X) and Z ⊆ cl(Z'), unless the two are closure-equivalent
            !ar.iter().any(|rp| {
                subset(rp.x, cl(r.x))
                    && subset(r.z, cl(rp.z))
                    && !(cl(rp.x) == cl(r.x) && cl(rp.z) == cl(r.z))
            })
        })
        .map(|r| MaskRule {
            x: cl(r.x),
            z: cl(r.z),
        })
        .collect();
    out.sort_by_key(|r| (r.z, r.x));
    out.dedup();
    out
}

/// B*: the rules of AR with confidence below 1 that are closure-based
/// redundant with respect to no other AR rule except closure-equivalent
/// ones, one per equivalence class, written `cl(X) -> cl(XY) \ cl(X)`.
pub fn bstar_by_definition(
    db: &TransactionDB,
    tau: Rational,
    gamma: Rational,
) -> Result<RuleSet, OracleError> {
    check_thresholds(tau, gamma)?;
    let t = MaskTables::new(db)?;
    let ar = ar_masks(&t, tau, gamma);
    Ok(to_rule_set(
        &t,
        tau,
        gamma,
        Provenance::BStarByDefinition,
        &bstar_masks(&t, &ar),
    ))
}

/// A seeded random database with between 1 and `max_items` items and
/// between 1 and `max_transactions` nonempty transactions.
pub fn random_db(
    seed: u64,
    max_items: usize,
    max_transactions: usize,
) -> Result<TransactionDB, OracleError> {
    if max_items > MAX_ORACLE_ITEMS {
        return Err(OracleError::TooManyItems(max_items));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = rng.gen_range(1..=max_items.max(1));
    let n = rng.gen_range(1..=max_transactions.max(1));
    let density: f64 = rng.gen_range(0.25..0.85);
    let names: Vec<String> = (0..m)
        .map(|i| ((b'a' + i as u8) as char).to_string())
        .collect();
    let mut rows = Vec::with_capacity(n);
    for _ in 0..n {
        let mut row: Vec<String> = names
            .iter()
            .filter(|_| rng.gen_bool(density))
            .cloned()
            .collect();
        if row.is_empty() {
            row.push(names[rng.gen_range(0..m)].clone());
        }
        rows.push(row);
    }
    Ok(TransactionDB::from_transactions(rows)?)
}

/// The fast generators under test. Swappable so that a broken build can be
/// shown to fail verification.
#[derive(Clone, Copy)]
pub struct FastGenerators {
    pub complete: fn(&LatticeIndex, Rational) -> Result<RuleSet, RuleError>,
    pub twophase:
        fn(&crate::bounds::BreakpointTable, &LatticeIndex, Rational) -> Result<RuleSet, RuleError>,
    pub heuristic: fn(&LatticeIndex, Rational) -> Result<RuleSet, RuleError>,
    pub bstar: fn(&LatticeIndex, Rational) -> Result<RuleSet, RuleError>,
}

impl Default for FastGenerators {
    fn default() -> Self {
        FastGenerators {
            complete: rules::gen_rr_complete,
            twophase: rules::gen_rr_twophase,
            heuristic: rules::gen_rr_heuristic,
            bstar: rules::gen_bstar,
        }
    }
}

/// Oracle outputs for one (db, τ, γ) case and their differences from the
/// fast generators.
#[derive(Debug, Clone)]
pub struct OracleReport {
    pub ar: RuleSet,
    pub rr: RuleSet,
    pub bstar: RuleSet,
    /// complete RR against the definitional RR.
    pub complete: RuleDiff,
    /// two-phase RR against complete RR.
    pub twophase: RuleDiff,
    /// heuristic rules that complete RR does not contain.
    pub heuristic_extra: Vec<Rule>,
    /// fast B* against the definitional B*.
    pub bstar_diff: RuleDiff,
}

impl OracleReport {
    pub fn passed(&self) -> bool {
        self.complete.is_empty()
            && self.twophase.is_empty()
            && self.heuristic_extra.is_empty()
            && self.bstar_diff.is_empty()
    }

    pub fn mismatches(&self) -> usize {
        self.complete.missing.len()
            + self.complete.extra.len()
            + self.twophase.missing.len()
            + self.twophase.extra.len()
            + self.heuristic_extra.len()
            + self.bstar_diff.missing.len()
            + self.bstar_diff.extra.len()
    }
}

/// Runs the oracle and the fast generators on one case and diffs them.
pub fn check(
    db: &TransactionDB,
    tau: Rational,
    gamma: Rational,
    fast: &FastGenerators,
) -> Result<OracleReport, OracleError> {
    check_thresholds(tau, gamma)?;
    let t = MaskTables::new(db)?;
    let ar_m = ar_masks(&t, tau, gamma);
    let ar = to_rule_set(&t, tau, gamma, Provenance::AllRules, &ar_m);
    let rr = to_rule_set(
        &t,
        tau,
        gamma,
        Provenance::RepresentativeByDefinition,
        &rr_masks(&ar_m),
    );
    let bstar = to_rule_set(
        &t,
        tau,
        gamma,
        Provenance::BStarByDefinition,
        &bstar_masks(&t, &ar_m),
    );

    let index = mine(db, tau)?;
    let table = build_breakpoints(&index);
    let complete = (fast.complete)(&index, gamma)?;
    let twophase = (fast.twophase)(&table, &index, gamma)?;
    let heuristic = (fast.heuristic)(&index, gamma)?;
    let fast_bstar = (fast.bstar)(&index, gamma)?;
    Ok(OracleReport {
        complete: complete.diff(&rr),
        twophase: twophase.diff(&complete),
        heuristic_extra: heuristic.diff(&complete).extra,
        bstar_diff: fast_bstar.diff(&bstar),
        ar,
        rr,
        bstar,
    })
}
