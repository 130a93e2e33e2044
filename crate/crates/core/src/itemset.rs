use std::fmt;

use serde::{Deserialize, Serialize};

/// Dense item identifier; ids follow the lexicographic order of item names.
pub type ItemId = u32;

/// A set of items kept as a strictly increasing vector of ids.
///
/// The derived `Ord` is lexicographic on the id sequence, which is the
/// canonical tie-break used for every deterministic output ordering.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Itemset(Vec<ItemId>);

impl Itemset {
    pub fn empty() -> Self {
        Itemset(Vec::new())
    }

    /// Builds an itemset from ids that are already strictly increasing.
    pub fn from_sorted(ids: Vec<ItemId>) -> Self {
        debug_assert!(ids.windows(2).all(|w| w[0] < w[1]));
        Itemset(ids)
    }

    /// Strictly increasing ids, or `None`.
    pub fn try_from_sorted(ids: Vec<ItemId>) -> Option<Self> {
        ids.windows(2).all(|w| w[0] < w[1]).then_some(Itemset(ids))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn ids(&self) -> &[ItemId] {
        &self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = ItemId> + '_ {
        self.0.iter().copied()
    }

    pub fn contains(&self, item: ItemId) -> bool {
        self.0.binary_search(&item).is_ok()
    }

    pub fn is_subset(&self, other: &Itemset) -> bool {
        if self.len() > other.len() {
            return false;
        }
        let mut it = other.0.iter();
        'outer: for &a in &self.0 {
            for &b in it.by_ref() {
                if b == a {
                    continue 'outer;
                }
                if b > a {
                    return false;
                }
            }
            return false;
        }
        true
    }

    pub fn is_proper_subset(&self, other: &Itemset) -> bool {
        self.len() < other.len() && self.is_subset(other)
    }

    pub fn union(&self, other: &Itemset) -> Itemset {
        let mut out = Vec::with_capacity(self.len() + other.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            let (a, b) = (self.0[i], other.0[j]);
            if a < b {
                out.push(a);
                i += 1;
            } else if b < a {
                out.push(b);
                j += 1;
            } else {
                out.push(a);
                i += 1;
                j += 1;
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        Itemset(out)
    }

    pub fn difference(&self, other: &Itemset) -> Itemset {
        Itemset(self.iter().filter(|&x| !other.contains(x)).collect())
    }

    pub fn is_disjoint(&self, other: &Itemset) -> bool {
        self.iter().all(|x| !other.contains(x))
    }

    /// Copy of `self` with `item` added.
    pub fn with(&self, item: ItemId) -> Itemset {
        match self.0.binary_search(&item) {
            Ok(_) => self.clone(),
            Err(pos) => {
                let mut v = self.0.clone();
                v.insert(pos, item);
                Itemset(v)
            }
        }
    }

    /// Copy of `self` without the element at `pos`.
    pub fn without_index(&self, pos: usize) -> Itemset {
        let mut v = self.0.clone();
        v.remove(pos);
        Itemset(v)
    }

    pub fn last(&self) -> Option<ItemId> {
        self.0.last().copied()
    }

    /// Ordering by cardinality first, then lexicographically.
    pub fn graded_cmp(&self, other: &Itemset) -> std::cmp::Ordering {
        self.len().cmp(&other.len()).then_with(|| self.cmp(other))
    }
}

impl FromIterator<ItemId> for Itemset {
    fn from_iter<I: IntoIterator<Item = ItemId>>(iter: I) -> Self {
        let mut v: Vec<ItemId> = iter.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        Itemset(v)
    }
}

impl fmt::Display for Itemset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, id) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{id}")?;
        }
        f.write_str("}")
    }
}
