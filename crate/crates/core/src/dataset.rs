//! Transaction databases: loading, item interning, and exact support counts.
//!
//! Two on-disk formats are understood:
//!
//! * **basket**: one transaction per line, whitespace-separated item tokens
//!   (the FIMI repository convention).
//! * **csv-matrix**: a header row of item names followed by one row of
//!   comma-separated `0`/`1` cells per transaction.
//!
//! Blank lines are skipped in both, LF and CRLF endings are accepted, and
//! item ids are assigned by sorted token order so that the same logical data
//! always produces the same ids.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::itemset::{ItemId, Itemset};
use crate::rational::Rational;

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("no transactions")]
    NoTransactions,
    #[error("unknown item id {0}")]
    UnknownItem(ItemId),
    #[error("unknown item {0:?}")]
    UnknownName(String),
    #[error("too many distinct items")]
    TooManyItems,
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Basket,
    CsvMatrix,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "basket" => Ok(Format::Basket),
            "csv-matrix" | "csv" => Ok(Format::CsvMatrix),
            other => Err(format!(
                "unknown format {other:?} (expected basket or csv-matrix)"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Item {
    pub id: ItemId,
    pub name: String,
}

/// An exact support: `count` transactions out of `n`.
///
/// The pair is never reduced; ordering is by cross-multiplication so that
/// supports taken over different databases still compare exactly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Support {
    pub count: u64,
    pub n: u64,
}

impl Support {
    pub fn new(count: u64, n: u64) -> Self {
        debug_assert!(count <= n && n > 0);
        Support { count, n }
    }

    pub fn ratio(&self) -> Rational {
        Rational::from_counts(self.count, self.n)
    }

    /// `count / n >= tau`, exactly.
    pub fn meets(&self, tau: Rational) -> bool {
        tau.mul_cmp(self.n, self.count) != Ordering::Greater
    }
}

impl Ord for Support {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.count as u128 * other.n as u128).cmp(&(other.count as u128 * self.n as u128))
    }
}

impl PartialOrd for Support {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Support {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.count, self.n)
    }
}

/// An immutable transaction database held both horizontally (rows) and
/// vertically (per-item sorted transaction-id lists).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransactionDB {
    names: Vec<String>,
    rows: Vec<Itemset>,
    tidlists: Vec<Vec<u32>>,
}

impl TransactionDB {
    /// Builds a database from tokenized transactions over the given
    /// universe. Every token of every transaction must belong to `universe`;
    /// items of the universe that never occur are kept.
    fn build(
        universe: BTreeSet<String>,
        transactions: Vec<Vec<String>>,
    ) -> Result<Self, DatasetError> {
        if transactions.is_empty() {
            return Err(DatasetError::NoTransactions);
        }
        if universe.len() > ItemId::MAX as usize || transactions.len() > u32::MAX as usize {
            return Err(DatasetError::TooManyItems);
        }
        let names: Vec<String> = universe.into_iter().collect();
        let lookup: HashMap<&str, ItemId> = names
            .iter()
            .enumerate()
            .map(|(i, s)| (s.as_str(), i as ItemId))
            .collect();
        let mut tidlists = vec![Vec::new(); names.len()];
        let mut rows = Vec::with_capacity(transactions.len());
        for (tid, tokens) in transactions.iter().enumerate() {
            let row: Itemset = tokens
                .iter()
                .map(|t| {
                    lookup
                        .get(t.as_str())
                        .copied()
                        .ok_or_else(|| DatasetError::UnknownName(t.clone()))
                })
                .collect::<Result<_, _>>()?;
            for id in row.iter() {
                tidlists[id as usize].push(tid as u32);
            }
            rows.push(row);
        }
        Ok(TransactionDB {
            names,
            rows,
            tidlists,
        })
    }

    /// Builds a database whose universe is exactly the items that occur.
    pub fn from_transactions<T, S>(transactions: T) -> Result<Self, DatasetError>
    where
        T: IntoIterator,
        T::Item: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let transactions: Vec<Vec<String>> = transactions
            .into_iter()
            .map(|t| t.into_iter().map(Into::into).collect())
            .collect();
        let universe = transactions.iter().flatten().cloned().collect();
        Self::build(universe, transactions)
    }

    pub fn parse(text: &str, format: Format) -> Result<Self, DatasetError> {
        match format {
            Format::Basket => Self::parse_basket(text),
            Format::CsvMatrix => Self::parse_csv_matrix(text),
        }
    }

    pub fn parse_basket(text: &str) -> Result<Self, DatasetError> {
        let mut transactions = Vec::new();
        for (idx, line) in text.lines().enumerate() {
            let line = line.strip_suffix('\r').unwrap_or(line);
            let mut tokens = Vec::new();
            for tok in line.split_whitespace() {
                if tok.contains(',') {
                    return Err(DatasetError::Parse {
                        line: idx + 1,
                        message: format!("item token {tok:?} contains a comma"),
                    });
                }
                tokens.push(tok.to_string());
            }
            if !tokens.is_empty() {
                transactions.push(tokens);
            }
        }
        Self::from_transactions(transactions)
    }

    pub fn parse_csv_matrix(text: &str) -> Result<Self, DatasetError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.strip_suffix('\r').unwrap_or(l)))
            .filter(|(_, l)| !l.trim().is_empty());
        let Some((header_line, header)) = lines.next() else {
            return Err(DatasetError::NoTransactions);
        };
        let parse_err = |line: usize, message: String| DatasetError::Parse { line, message };
        let mut names = Vec::new();
        for cell in header.split(',') {
            let name = cell.trim();
            if name.is_empty() || name.chars().any(char::is_whitespace) {
                return Err(parse_err(
                    header_line,
                    format!("invalid item name {cell:?}"),
                ));
            }
            names.push(name.to_string());
        }
        let universe: BTreeSet<String> = names.iter().cloned().collect();
        if universe.len() != names.len() {
            return Err(parse_err(
                header_line,
                "duplicate item name in header".into(),
            ));
        }
        let mut transactions = Vec::new();
        for (line, body) in lines {
            let cells: Vec<&str> = body.split(',').collect();
            if cells.len() != names.len() {
                return Err(parse_err(
                    line,
                    format!("expected {} cells, found {}", names.len(), cells.len()),
                ));
            }
            let mut row = Vec::new();
            for (cell, name) in cells.iter().zip(&names) {
                match cell.trim() {
                    "1" => row.push(name.clone()),
                    "0" => {}
                    other => {
                        return Err(parse_err(line, format!("cell {other:?} is not 0 or 1")));
                    }
                }
            }
            transactions.push(row);
        }
        Self::build(universe, transactions)
    }

    pub fn load(path: impl AsRef<Path>, format: Format) -> Result<Self, DatasetError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| DatasetError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text, format)
    }

    /// Number of transactions.
    pub fn n(&self) -> u64 {
        self.rows.len() as u64
    }

    /// Number of items in the universe.
    pub fn m(&self) -> usize {
        self.names.len()
    }

    pub fn items(&self) -> impl Iterator<Item = Item> + '_ {
        self.names.iter().enumerate().map(|(i, s)| Item {
            id: i as ItemId,
            name: s.clone(),
        })
    }

    pub fn item_names(&self) -> &[String] {
        &self.names
    }

    pub fn item_name(&self, id: ItemId) -> Option<&str> {
        self.names.get(id as usize).map(String::as_str)
    }

    pub fn item_id(&self, name: &str) -> Option<ItemId> {
        self.names
            .binary_search_by(|probe| probe.as_str().cmp(name))
            .ok()
            .map(|i| i as ItemId)
    }

    /// Resolves item names to an itemset.
    pub fn itemset<S: AsRef<str>>(&self, names: &[S]) -> Result<Itemset, DatasetError> {
        names
            .iter()
            .map(|s| {
                self.item_id(s.as_ref())
                    .ok_or_else(|| DatasetError::UnknownName(s.as_ref().to_string()))
            })
            .collect()
    }

    /// The universe of items as an itemset.
    pub fn universe(&self) -> Itemset {
        (0..self.names.len() as ItemId).collect()
    }

    pub fn rows(&self) -> &[Itemset] {
        &self.rows
    }

    pub fn tidlist(&self, id: ItemId) -> Option<&[u32]> {
        self.tidlists.get(id as usize).map(Vec::as_slice)
    }

    /// Ids of the transactions containing every item of `x`.
    pub fn tids(&self, x: &Itemset) -> Result<Vec<u32>, DatasetError> {
        if let Some(bad) = x.iter().find(|&id| id as usize >= self.names.len()) {
            return Err(DatasetError::UnknownItem(bad));
        }
        Ok(self.tids_unchecked(x))
    }

    pub(crate) fn tids_unchecked(&self, x: &Itemset) -> Vec<u32> {
        if x.is_empty() {
            return (0..self.rows.len() as u32).collect();
        }
        let mut lists: Vec<&[u32]> = x
            .iter()
            .map(|id| self.tidlists[id as usize].as_slice())
            .collect();
        lists.sort_by_key(|l| l.len());
        let mut acc = lists[0].to_vec();
        for other in &lists[1..] {
            acc.retain(|t| other.binary_search(t).is_ok());
            if acc.is_empty() {
                break;
            }
        }
        acc
    }

    pub fn support(&self, x: &Itemset) -> Result<Support, DatasetError> {
        let count = self.tids(x)?.len() as u64;
        Ok(Support::new(count, self.n()))
    }

    pub fn names_of(&self, x: &Itemset) -> Vec<&str> {
        x.iter()
            .map(|id| self.names[id as usize].as_str())
            .collect()
    }

    /// Renders the database in basket format. Empty transactions cannot be
    /// represented and are dropped.
    pub fn to_basket(&self) -> String {
        let mut out = String::new();
        for row in &self.rows {
            if row.is_empty() {
                continue;
            }
            out.push_str(&self.names_of(row).join(" "));
            out.push('\n');
        }
        out
    }

    pub fn to_csv_matrix(&self) -> String {
        let mut out = self.names.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<&str> = (0..self.names.len() as ItemId)
                .map(|id| if row.contains(id) { "1" } else { "0" })
                .collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}
