//! Sweeps the fast generators against the oracle over the fixtures and a
//! seeded random corpus.

use std::fmt;

use crate::dataset::TransactionDB;
use crate::fixtures;
use crate::oracle::{self, FastGenerators, OracleError, OracleReport, MAX_ORACLE_ITEMS};
use crate::rational::Rational;

pub const DEFAULT_GAMMAS: [&str; 8] = ["0.3", "0.4", "0.5", "2/3", "0.7", "0.75", "0.8", "1"];

#[derive(Debug, Clone)]
pub struct VerifyConfig {
    pub trials: usize,
    pub seed: u64,
    pub max_items: usize,
    pub max_transactions: usize,
    pub include_fixtures: bool,
    pub gammas: Vec<Rational>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            trials: 500,
            seed: 0,
            max_items: 6,
            max_transactions: 12,
            include_fixtures: true,
            gammas: DEFAULT_GAMMAS.iter().map(|g| g.parse().unwrap()).collect(),
        }
    }
}

/// Support thresholds tried on every database: `1/n`, 0.15 and 0.5.
pub fn taus_for(db: &TransactionDB) -> [Rational; 3] {
    [
        Rational::from_counts(1, db.n()),
        Rational::from_counts(15, 100),
        Rational::from_counts(1, 2),
    ]
}

/// The databases of a sweep, labelled: fixtures first, then `seed+i` for
/// each trial.
pub fn corpus(config: &VerifyConfig) -> Result<Vec<(String, TransactionDB)>, OracleError> {
    if config.max_items > MAX_ORACLE_ITEMS {
        return Err(OracleError::TooManyItems(config.max_items));
    }
    let mut dbs = Vec::new();
    if config.include_fixtures {
        dbs.extend(
            fixtures::all()
                .into_iter()
                .map(|(name, db)| (name.to_string(), db)),
        );
    }
    for i in 0..config.trials as u64 {
        let seed = config.seed.wrapping_add(i);
        let db = oracle::random_db(seed, config.max_items, config.max_transactions)?;
        dbs.push((format!("random#{seed}"), db));
    }
    Ok(dbs)
}

#[derive(Debug, Clone)]
pub struct CaseResult {
    pub label: String,
    pub tau: Rational,
    pub gamma: Rational,
    pub rr: usize,
    pub bstar: usize,
    pub mismatches: usize,
    pub report: OracleReport,
}

impl CaseResult {
    pub fn passed(&self) -> bool {
        self.mismatches == 0
    }
}

impl fmt::Display for CaseResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        write!(
            f,
            "{verdict} {} tau={} gamma={} rr={} bstar={}",
            self.label, self.tau, self.gamma, self.rr, self.bstar
        )?;
        if !self.passed() {
            let r = &self.report;
            write!(
                f,
                " complete(-{} +{}) twophase(-{} +{}) heuristic(+{}) bstar(-{} +{})",
                r.complete.missing.len(),
                r.complete.extra.len(),
                r.twophase.missing.len(),
                r.twophase.extra.len(),
                r.heuristic_extra.len(),
                r.bstar_diff.missing.len(),
                r.bstar_diff.extra.len(),
            )?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default)]
pub struct Summary {
    pub databases: usize,
    pub cases: usize,
    pub failed: usize,
    pub mismatches: usize,
}

impl Summary {
    pub fn passed(&self) -> bool {
        self.failed == 0
    }
}

impl fmt::Display for Summary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} databases, {} cases, {} failed, {} mismatched rules",
            self.databases, self.cases, self.failed, self.mismatches
        )
    }
}

/// Runs every (database, τ, γ) case, handing each result to `on_case`.
pub fn run(
    config: &VerifyConfig,
    fast: &FastGenerators,
    mut on_case: impl FnMut(&CaseResult),
) -> Result<Summary, OracleError> {
    let dbs = corpus(config)?;
    let mut summary = Summary {
        databases: dbs.len(),
        ..Summary::default()
    };
    for (label, db) in &dbs {
        for tau in taus_for(db) {
            for &gamma in &config.gammas {
                let report = oracle::check(db, tau, gamma, fast)?;
                let case = CaseResult {
                    label: label.clone(),
                    tau,
                    gamma,
                    rr: report.rr.len(),
                    bstar: report.bstar.len(),
                    mismatches: report.mismatches(),
                    report,
                };
                summary.cases += 1;
                if !case.passed() {
                    summary.failed += 1;
                    summary.mismatches += case.mismatches;
                }
                on_case(&case);
            }
        }
    }
    Ok(summary)
}
