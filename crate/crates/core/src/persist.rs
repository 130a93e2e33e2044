//! On-disk forms: the index document, rule JSON lines and the text
//! renderings used by the command-line tool.
//!
//! The index document is one JSON object holding the item table, the
//! frequent closed sets (support and mxs), the frequent generators (support,
//! kmns and closure) and the breakpoint table. Loading rebuilds the index
//! from the sets and rejects the document if any stored bound or breakpoint
//! disagrees with the rebuilt one.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bounds::{build_breakpoints, BoundsError, BreakpointEntry, BreakpointTable};
use crate::dataset::Support;
use crate::itemset::{ItemId, Itemset};
use crate::lattice::{LatticeError, LatticeIndex, SupportedSet};
use crate::rational::Rational;
use crate::rules::{Rule, RuleError, RuleSet};

pub const INDEX_FORMAT: &str = "rulebases-index";
pub const INDEX_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum PersistError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported document: format {format:?}, version {version}")]
    Unsupported { format: String, version: u32 },
    #[error("unknown item {0:?}")]
    UnknownItem(String),
    #[error("item {0:?} is listed twice in one set")]
    DuplicateItem(String),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Bounds(#[from] BoundsError),
    #[error(transparent)]
    Rule(#[from] RuleError),
    #[error("stored {what} for {set} does not match the rebuilt index")]
    Mismatch { what: &'static str, set: String },
    #[error("invalid rule line: {0}")]
    InvalidRule(String),
    #[error("support count {count} is not within 0..={n}")]
    BadCount { count: u64, n: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IndexDocument {
    pub format: String,
    pub version: u32,
    pub tau: Rational,
    pub n: u64,
    pub items: Vec<String>,
    pub closed: Vec<ClosedRecord>,
    pub generators: Vec<GeneratorRecord>,
    pub breakpoints: Vec<BreakpointRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClosedRecord {
    pub items: Vec<String>,
    pub support_count: u64,
    /// Count of mxs; 0 when no frequent closed proper superset exists.
    pub mxs_count: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorRecord {
    pub items: Vec<String>,
    pub support_count: u64,
    /// Count of kmns; `null` stands for infinity.
    pub kmns_count: Option<u64>,
    /// Position in `closed` of the generator's closure.
    pub closure: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BreakpointRecord {
    pub items: Vec<String>,
    pub support_count: u64,
    pub y: Vec<u64>,
    pub p: Vec<Rational>,
}

fn names(index_names: &[String], x: &Itemset) -> Vec<String> {
    x.iter().map(|i| index_names[i as usize].clone()).collect()
}

fn resolve(items: &[String], names: &[String]) -> Result<Itemset, PersistError> {
    let mut ids: Vec<ItemId> = names
        .iter()
        .map(|s| {
            items
                .binary_search(s)
                .map(|i| i as ItemId)
                .map_err(|_| PersistError::UnknownItem(s.clone()))
        })
        .collect::<Result<_, _>>()?;
    ids.sort_unstable();
    if let Some(w) = ids.windows(2).find(|w| w[0] == w[1]) {
        return Err(PersistError::DuplicateItem(items[w[0] as usize].clone()));
    }
    Ok(Itemset::from_sorted(ids))
}

impl IndexDocument {
    pub fn new(index: &LatticeIndex, table: &BreakpointTable) -> Self {
        let items = index.item_names();
        let closed = index
            .closed()
            .iter()
            .enumerate()
            .map(|(i, c)| ClosedRecord {
                items: names(items, &c.set),
                support_count: c.sup.count,
                mxs_count: index.mxs_at(i).count().unwrap_or(0),
            })
            .collect();
        let generators = index
            .generators()
            .iter()
            .enumerate()
            .map(|(i, g)| GeneratorRecord {
                items: names(items, &g.set),
                support_count: g.sup.count,
                kmns_count: index.kmns_at(i).count(),
                closure: index.gen_closure()[i],
            })
            .collect();
        let breakpoints = table
            .entries()
            .iter()
            .map(|e| BreakpointRecord {
                items: names(items, &e.set),
                support_count: e.support,
                y: e.y.clone(),
                p: e.p.clone(),
            })
            .collect();
        IndexDocument {
            format: INDEX_FORMAT.into(),
            version: INDEX_VERSION,
            tau: index.tau(),
            n: index.n(),
            items: items.to_vec(),
            closed,
            generators,
            breakpoints,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("index document serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, PersistError> {
        Ok(serde_json::from_str(text)?)
    }

    /// Rebuilds and cross-checks the index and breakpoint table.
    pub fn restore(&self) -> Result<(LatticeIndex, BreakpointTable), PersistError> {
        if self.format != INDEX_FORMAT || self.version != INDEX_VERSION {
            return Err(PersistError::Unsupported {
                format: self.format.clone(),
                version: self.version,
            });
        }
        let n = self.n;
        let to_set = |items: &[String], count: u64| -> Result<SupportedSet, PersistError> {
            if n == 0 || count > n {
                return Err(PersistError::BadCount { count, n });
            }
            Ok(SupportedSet {
                set: resolve(&self.items, items)?,
                sup: Support::new(count, n),
            })
        };
        let closed = self
            .closed
            .iter()
            .map(|c| to_set(&c.items, c.support_count))
            .collect::<Result<Vec<_>, _>>()?;
        let generators = self
            .generators
            .iter()
            .map(|g| to_set(&g.items, g.support_count))
            .collect::<Result<Vec<_>, _>>()?;
        let index = LatticeIndex::from_parts(
            self.tau,
            n,
            self.items.clone(),
            closed.clone(),
            generators.clone(),
        )?;

        let mismatch = |what, set: &Itemset| PersistError::Mismatch {
            what,
            set: index.names_of(set).join(" "),
        };
        for (rec, c) in self.closed.iter().zip(&closed) {
            let pos = index
                .closed_position(&c.set)
                .ok_or_else(|| mismatch("closed set", &c.set))?;
            if index.mxs_at(pos).count().unwrap_or(0) != rec.mxs_count {
                return Err(mismatch("mxs", &c.set));
            }
        }
        for (rec, g) in self.generators.iter().zip(&generators) {
            let pos = index
                .generator_position(&g.set)
                .ok_or_else(|| mismatch("generator", &g.set))?;
            if index.kmns_at(pos).count() != rec.kmns_count {
                return Err(mismatch("kmns", &g.set));
            }
            let closure = self
                .closed
                .get(rec.closure)
                .ok_or_else(|| mismatch("closure", &g.set))?;
            let closure = resolve(&self.items, &closure.items)?;
            if index.closed()[index.gen_closure()[pos]].set != closure {
                return Err(mismatch("closure", &g.set));
            }
        }

        let entries = self
            .breakpoints
            .iter()
            .map(|b| {
                Ok(BreakpointEntry {
                    set: resolve(&self.items, &b.items)?,
                    support: b.support_count,
                    y: b.y.clone(),
                    p: b.p.clone(),
                })
            })
            .collect::<Result<Vec<_>, PersistError>>()?;
        let table = BreakpointTable::from_entries(self.tau, n, entries)?;
        let rebuilt = build_breakpoints(&index);
        if table.entries().len() != rebuilt.entries().len() {
            return Err(PersistError::Mismatch {
                what: "breakpoint table",
                set: format!("{} entries", table.entries().len()),
            });
        }
        for e in rebuilt.entries() {
            if table.entry(&e.set) != Some(e) {
                return Err(mismatch("breakpoints", &e.set));
            }
        }
        Ok((index, table))
    }
}

/// Parses and restores an index document in one step.
pub fn load_index(text: &str) -> Result<(LatticeIndex, BreakpointTable), PersistError> {
    IndexDocument::from_json(text)?.restore()
}

/// One rule as a JSON line; field order is fixed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RuleRecord {
    pub antecedent: Vec<String>,
    pub consequent: Vec<String>,
    pub support_count: u64,
    pub n: u64,
    pub confidence: Rational,
}

impl RuleRecord {
    pub fn new(rule: &Rule, items: &[String]) -> Self {
        RuleRecord {
            antecedent: names(items, &rule.antecedent),
            consequent: names(items, &rule.consequent),
            support_count: rule.support.count,
            n: rule.support.n,
            confidence: rule.confidence,
        }
    }

    /// Turns the record back into a [`Rule`], checking that the counts are
    /// consistent with the stated confidence.
    pub fn to_rule(&self, items: &[String]) -> Result<Rule, PersistError> {
        let bad = |m: &str| PersistError::InvalidRule(m.to_string());
        let (p, q) = (self.confidence.numer(), self.confidence.denom());
        if p == 0 || self.support_count == 0 {
            return Err(bad("zero support or confidence"));
        }
        if self.support_count > self.n {
            return Err(bad("support count exceeds n"));
        }
        // antecedent count = support_count / confidence, which must be whole
        let scaled = self.support_count as u128 * q as u128;
        if !scaled.is_multiple_of(p as u128) {
            return Err(bad("confidence does not divide the support count"));
        }
        let x_count =
            u64::try_from(scaled / p as u128).map_err(|_| bad("antecedent count overflows"))?;
        let rule = Rule::new(
            resolve(items, &self.antecedent)?,
            resolve(items, &self.consequent)?,
            Support::new(self.support_count, self.n),
            x_count,
        )?;
        debug_assert_eq!(rule.confidence, self.confidence);
        Ok(rule)
    }
}

pub fn rule_to_json(rule: &Rule, items: &[String]) -> String {
    serde_json::to_string(&RuleRecord::new(rule, items)).expect("rule serializes")
}

pub fn rule_from_json(line: &str, items: &[String]) -> Result<Rule, PersistError> {
    serde_json::from_str::<RuleRecord>(line)?.to_rule(items)
}

pub fn rules_to_json_lines(rules: &RuleSet, items: &[String]) -> String {
    rules
        .iter()
        .map(|r| rule_to_json(r, items) + "\n")
        .collect()
}

/// Space-separated item names, `∅` for the empty set.
pub fn render_itemset(x: &Itemset, items: &[String]) -> String {
    if x.is_empty() {
        "∅".to_string()
    } else {
        names(items, x).join(" ")
    }
}

/// `[c:0.50, s:33.33] b ⇒ a c d e`: confidence as a fraction, support as a
/// percentage.
pub fn rule_to_text(rule: &Rule, items: &[String]) -> String {
    format!(
        "[c:{}, s:{}] {} ⇒ {}",
        rule.confidence.to_decimal(2),
        rule.support.ratio().to_percent(2),
        render_itemset(&rule.antecedent, items),
        render_itemset(&rule.consequent, items),
    )
}

pub fn rules_to_text(rules: &RuleSet, items: &[String]) -> String {
    rules
        .iter()
        .map(|r| rule_to_text(r, items) + "\n")
        .collect()
}

/// Text listing of FC and FG with support counts.
pub fn lattice_to_text(index: &LatticeIndex) -> String {
    let items = index.item_names();
    let mut out = format!(
        "# tau={} n={} closed={} generators={}\n",
        index.tau(),
        index.n(),
        index.closed().len(),
        index.generators().len()
    );
    for (i, c) in index.closed().iter().enumerate() {
        let mxs = index.mxs_at(i).count().unwrap_or(0);
        out += &format!(
            "closed\t{}\t{}\tmxs={mxs}\n",
            c.sup.count,
            render_itemset(&c.set, items)
        );
    }
    for (i, g) in index.generators().iter().enumerate() {
        let kmns = index
            .kmns_at(i)
            .count()
            .map_or("inf".into(), |c| c.to_string());
        let closure = &index.closed()[index.gen_closure()[i]].set;
        out += &format!(
            "generator\t{}\t{}\tkmns={kmns}\tclosure={}\n",
            g.sup.count,
            render_itemset(&g.set, items),
            render_itemset(closure, items)
        );
    }
    out
}
