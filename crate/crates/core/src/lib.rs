//! Frequent closed itemsets, minimal generators, and two concise bases of
//! association rules built on them: the representative rules and the
//! closure-based basis B*.
//!
//! All supports are kept as exact counts and all thresholds as exact
//! rationals, so every strict/non-strict comparison is an integer one.
//!
//! ```
//! use rulebases::{fixtures, lattice, rules, Rational};
//!
//! let db = fixtures::example1();
//! let index = lattice::mine(&db, "0.15".parse().unwrap()).unwrap();
//! let rr = rules::gen_rr_complete(&index, "0.4".parse().unwrap()).unwrap();
//! assert!(rr.iter().any(|r| r.confidence == Rational::from_counts(1, 2)));
//! ```

pub mod bounds;
pub mod dataset;
pub mod fixtures;
pub mod itemset;
pub mod lattice;
pub mod oracle;
pub mod persist;
pub mod rational;
pub mod rules;
pub mod verify;

pub use bounds::{Bound, BreakpointTable};
pub use dataset::{DatasetError, Format, Support, TransactionDB};
pub use itemset::{ItemId, Itemset};
pub use lattice::{LatticeIndex, SupportedSet};
pub use rational::Rational;
pub use rules::{Rule, RuleSet};
