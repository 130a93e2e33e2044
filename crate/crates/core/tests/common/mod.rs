//! Brute-force invariant checks over every itemset of a small database.
//! Each check returns a description of the first violation it finds.

#![allow(dead_code)]

use std::cmp::Ordering;

use rulebases::bounds::{self, build_breakpoints, mxgs_from_table, Bound};
use rulebases::dataset::Support;
use rulebases::lattice::{self, is_closed_via_bounds, mine, LatticeIndex, SupportedSet};
use rulebases::oracle;
use rulebases::rules::{self, Rule, RuleSet};
use rulebases::{Itemset, Rational, TransactionDB};

pub type Check = Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

pub fn q(s: &str) -> Rational {
    s.parse().unwrap()
}

pub fn set(db: &TransactionDB, s: &str) -> Itemset {
    let names: Vec<String> = s.chars().map(String::from).collect();
    db.itemset(&names).unwrap()
}

/// Counts and closures of all `2^m` itemsets, computed row by row.
pub struct Brute {
    pub m: usize,
    pub n: u64,
    pub count: Vec<u64>,
    pub closure: Vec<u32>,
}

pub fn mask_of(x: &Itemset) -> u32 {
    x.iter().fold(0, |a, i| a | 1 << i)
}

pub fn set_of(mask: u32) -> Itemset {
    (0..32).filter(|i| mask >> i & 1 == 1).collect()
}

fn sub(a: u32, b: u32) -> bool {
    a & !b == 0
}

fn proper(a: u32, b: u32) -> bool {
    a != b && sub(a, b)
}

impl Brute {
    pub fn new(db: &TransactionDB) -> Self {
        let m = db.m();
        assert!(m <= 10, "brute force is for tiny databases");
        let full = (1u32 << m) - 1;
        let rows: Vec<u32> = db.rows().iter().map(mask_of).collect();
        let mut count = vec![0; 1 << m];
        let mut closure = vec![full; 1 << m];
        for x in 0..=full {
            for &r in &rows {
                if sub(x, r) {
                    count[x as usize] += 1;
                    closure[x as usize] &= r;
                }
            }
        }
        Brute {
            m,
            n: db.n(),
            count,
            closure,
        }
    }

    pub fn masks(&self) -> std::ops::Range<u32> {
        0..(1u32 << self.m)
    }

    pub fn frequent(&self, x: u32, tau: Rational) -> bool {
        Support::new(self.count[x as usize], self.n).meets(tau)
    }

    pub fn is_closed(&self, x: u32) -> bool {
        self.closure[x as usize] == x
    }

    /// No proper subset has the same support.
    pub fn is_generator(&self, x: u32) -> bool {
        (0..self.m).all(|i| {
            x >> i & 1 == 0 || self.count[(x & !(1 << i)) as usize] != self.count[x as usize]
        })
    }

    fn bound(&self, c: Option<u64>, zero_default: bool) -> Bound {
        match c {
            Some(c) => Bound::Fraction(Support::new(c, self.n)),
            None if zero_default => Bound::Zero,
            None => Bound::Infinity,
        }
    }

    pub fn mxs(&self, x: u32, tau: Rational) -> Bound {
        let c = self
            .masks()
            .filter(|&z| proper(x, z) && self.is_closed(z) && self.frequent(z, tau))
            .map(|z| self.count[z as usize])
            .max();
        self.bound(c, true)
    }

    pub fn kmns(&self, x: u32, tau: Rational) -> Bound {
        let c = self
            .masks()
            .filter(|&y| proper(y, x) && self.is_generator(y) && self.frequent(y, tau))
            .map(|y| self.count[y as usize])
            .min();
        self.bound(c, false)
    }

    pub fn bmns(&self, x: u32, tau: Rational) -> Bound {
        let c = self
            .masks()
            .filter(|&y| proper(y, x) && self.is_closed(y) && self.frequent(y, tau))
            .map(|y| self.count[y as usize])
            .min();
        self.bound(c, false)
    }

    /// bmns through generators whose closure is a proper subset of `x`.
    pub fn bmns_via_generators(&self, x: u32, tau: Rational) -> Bound {
        let c = self
            .masks()
            .filter(|&y| {
                self.is_generator(y) && self.frequent(y, tau) && proper(self.closure[y as usize], x)
            })
            .map(|y| self.count[y as usize])
            .min();
        self.bound(c, false)
    }

    pub fn mxgs(&self, x: u32, tau: Rational, gamma: Rational) -> Bound {
        let sx = self.count[x as usize];
        let c = self
            .masks()
            .filter(|&y| proper(y, x) && self.is_generator(y) && self.frequent(y, tau))
            .map(|y| self.count[y as usize])
            .filter(|&sy| gamma.mul_cmp(sy, sx) != Ordering::Greater)
            .max();
        self.bound(c, true)
    }
}

pub fn check_lattice(db: &TransactionDB, tau: Rational) -> Check {
    let b = Brute::new(db);
    let index = mine(db, tau).map_err(|e| e.to_string())?;
    let sorted = |mut v: Vec<SupportedSet>| {
        v.sort_by(|a, b| a.set.cmp(&b.set));
        v
    };
    let supported = |x: u32| SupportedSet {
        set: set_of(x),
        sup: Support::new(b.count[x as usize], b.n),
    };
    let fc: Vec<SupportedSet> = b
        .masks()
        .filter(|&x| b.frequent(x, tau) && b.is_closed(x))
        .map(supported)
        .collect();
    let fg: Vec<SupportedSet> = b
        .masks()
        .filter(|&x| b.frequent(x, tau) && b.is_generator(x))
        .map(supported)
        .collect();
    ensure!(
        sorted(index.closed().to_vec()) == sorted(fc),
        "FC differs at tau={tau}"
    );
    ensure!(
        sorted(index.generators().to_vec()) == sorted(fg),
        "FG differs at tau={tau}"
    );

    // closure operator properties
    for x in b.masks() {
        let cx = lattice::closure(db, &set_of(x));
        ensure!(
            mask_of(&cx) == b.closure[x as usize],
            "closure({x:b}) wrong"
        );
        ensure!(sub(x, mask_of(&cx)), "closure not extensive at {x:b}");
        ensure!(
            lattice::closure(db, &cx) == cx,
            "closure not idempotent at {x:b}"
        );
        for y in b.masks().filter(|&y| sub(x, y)) {
            ensure!(
                sub(b.closure[x as usize], b.closure[y as usize]),
                "closure not monotone {x:b} {y:b}"
            );
        }
    }
    let closed: Vec<u32> = b.masks().filter(|&x| b.is_closed(x)).collect();
    for &x in &closed {
        for &y in &closed {
            ensure!(b.is_closed(x & y), "{x:b} ∩ {y:b} not closed");
        }
    }

    // both directions of the bound characterization
    for x in b.masks().filter(|&x| b.frequent(x, tau)) {
        let s = supported(x);
        let via = is_closed_via_bounds(&s, &index).map_err(|e| e.to_string())?;
        ensure!(via == b.is_closed(x), "is_closed_via_bounds wrong at {x:b}");
        let kmns = bounds::kmns(&index, &s.set).map_err(|e| e.to_string())?;
        ensure!(
            (Bound::Fraction(s.sup) < kmns) == b.is_generator(x),
            "sup < kmns wrong at {x:b}"
        );
    }

    ensure!(
        index.is_generator(&Itemset::empty()),
        "∅ is not a generator"
    );
    let common_item = (0..b.m).any(|i| b.count[1 << i] == b.n);
    ensure!(
        index.is_closed(&Itemset::empty()) != common_item,
        "∅ closedness wrong"
    );
    Ok(())
}

/// γ values hitting each breakpoint of the table, the rationals just
/// below and above it, and a fixed spread of other values.
pub fn gamma_grid(index: &LatticeIndex) -> Vec<Rational> {
    let table = build_breakpoints(index);
    let k = 2 * index.n() + 1;
    let mut grid: Vec<Rational> = (1..=97).map(|i| Rational::from_counts(i, 97)).collect();
    for e in table.entries() {
        for p in &e.p[1..] {
            let (a, d) = (p.numer() * k, p.denom() * k);
            grid.push(*p);
            grid.push(Rational::from_counts(a - 1, d));
            if a < d {
                grid.push(Rational::from_counts(a + 1, d));
            }
        }
    }
    grid.retain(|g| g.in_unit_interval());
    grid.sort();
    grid.dedup();
    grid
}

pub fn check_bounds(db: &TransactionDB, tau: Rational) -> Check {
    let b = Brute::new(db);
    let index = mine(db, tau).map_err(|e| e.to_string())?;
    let err = |e: bounds::BoundsError| e.to_string();
    for x in b.masks().filter(|&x| b.frequent(x, tau)) {
        let xs = set_of(x);
        let sup = Bound::Fraction(Support::new(b.count[x as usize], b.n));
        let mxs = bounds::mxs_of_frequent(&index, &xs).map_err(err)?;
        let kmns = bounds::kmns(&index, &xs).map_err(err)?;
        let bmns = bounds::bmns(&index, &xs).map_err(err)?;
        ensure!(
            mxs == b.mxs(x, tau),
            "mxs({x:b}) = {mxs}, expected {}",
            b.mxs(x, tau)
        );
        ensure!(
            kmns == b.kmns(x, tau),
            "kmns({x:b}) = {kmns}, expected {}",
            b.kmns(x, tau)
        );
        ensure!(
            bmns == b.bmns(x, tau),
            "bmns({x:b}) = {bmns}, expected {}",
            b.bmns(x, tau)
        );
        ensure!(
            mxs <= sup && sup <= kmns,
            "mxs <= sup <= kmns fails at {x:b}"
        );
        ensure!(kmns <= bmns, "kmns > bmns at {x:b}");
        ensure!(
            bmns == b.bmns_via_generators(x, tau),
            "generator form of bmns fails at {x:b}"
        );
        if b.is_closed(x) && b.is_generator(x) {
            ensure!(kmns == bmns, "kmns != bmns for closed generator {x:b}");
        }
    }

    let table = build_breakpoints(&index);
    let grid = gamma_grid(&index);
    for c in index.closed().iter().filter(|c| !c.set.is_empty()) {
        let x = mask_of(&c.set);
        let mut prev: Option<Bound> = None;
        for &g in &grid {
            let direct = bounds::mxgs(&index, &c.set, g).map_err(err)?;
            let tabled = mxgs_from_table(&table, &c.set, g).map_err(err)?;
            ensure!(
                direct == b.mxgs(x, tau, g),
                "mxgs({x:b}, {g}) = {direct}, expected {}",
                b.mxgs(x, tau, g)
            );
            ensure!(
                tabled == direct,
                "table mxgs({x:b}, {g}) = {tabled}, direct {direct}"
            );
            ensure!(
                direct == Bound::Zero || direct >= Bound::Fraction(c.sup),
                "mxgs({x:b}, {g}) below sup"
            );
            if let Some(p) = prev {
                ensure!(direct <= p, "mxgs({x:b}) increases at {g}");
            }
            prev = Some(direct);
        }
    }
    Ok(())
}

fn is_closed_set(b: &Brute, x: &Itemset) -> bool {
    b.is_closed(mask_of(x))
}

fn count_of(b: &Brute, x: &Itemset) -> u64 {
    b.count[mask_of(x) as usize]
}

/// Structure, dominance, completeness and generator agreement for one
/// (τ, γ) case.
pub fn check_rules(db: &TransactionDB, tau: Rational, gamma: Rational) -> Check {
    let b = Brute::new(db);
    let e = |e: rules::RuleError| e.to_string();
    let index = mine(db, tau).map_err(|e| e.to_string())?;
    let ar = oracle::enumerate_ar(db, tau, gamma).map_err(|e| e.to_string())?;
    let rr = rules::gen_rr_complete(&index, gamma).map_err(e)?;
    let twophase = rules::gen_rr_twophase(&build_breakpoints(&index), &index, gamma).map_err(e)?;
    let heuristic = rules::gen_rr_heuristic(&index, gamma).map_err(e)?;
    let bstar = rules::gen_bstar(&index, gamma).map_err(e)?;
    let case = format!("tau={tau} gamma={gamma}");

    ensure!(
        twophase.rules() == rr.rules(),
        "twophase != complete at {case}"
    );
    ensure!(
        heuristic.is_subset_of(&rr),
        "heuristic ⊄ complete at {case}"
    );

    for r in &rr {
        ensure!(
            is_closed_set(&b, &r.union()),
            "RR union {} not closed at {case}",
            r.union()
        );
        ensure!(
            b.is_generator(mask_of(&r.antecedent)),
            "RR antecedent {} not a generator",
            r.antecedent
        );
        ensure!(
            ar.contains(&r.antecedent, &r.consequent),
            "RR rule outside AR at {case}"
        );
    }
    for r in &ar {
        let mut covered = false;
        for rp in &rr {
            if rules::covers(rp, r) {
                covered = true;
                ensure!(
                    r.support >= rp.support && r.confidence >= rp.confidence,
                    "dominance fails for {r:?} in C({rp:?})"
                );
            }
        }
        ensure!(covered, "{r:?} is covered by no RR rule at {case}");
    }

    for r in &bstar {
        ensure!(
            is_closed_set(&b, &r.antecedent),
            "B* antecedent not closed at {case}"
        );
        ensure!(
            is_closed_set(&b, &r.union()),
            "B* union not closed at {case}"
        );
        ensure!(
            r.confidence < Rational::ONE,
            "B* rule with confidence 1 at {case}"
        );
        ensure!(
            r.confidence
                == Rational::from_counts(count_of(&b, &r.union()), count_of(&b, &r.antecedent)),
            "B* confidence wrong"
        );
    }
    for r in ar.iter().filter(|r| r.confidence < Rational::ONE) {
        let mut ok = false;
        for bp in &bstar {
            if rules::closure_covers(db, bp, r).map_err(e)?
                || rules::closure_equivalent(db, bp, r).map_err(e)?
            {
                ok = true;
                break;
            }
        }
        ensure!(ok, "{r:?} not closure-covered by B* at {case}");
    }
    Ok(())
}

/// The three partial-order laws on a list of rules.
pub fn check_covers_order(rules: &[Rule]) -> Check {
    for r in rules {
        ensure!(rules::covers(r, r), "covers not reflexive");
    }
    for r in rules {
        for s in rules {
            if rules::covers(r, s) && rules::covers(s, r) {
                ensure!(
                    r.antecedent == s.antecedent && r.union() == s.union(),
                    "covers not antisymmetric"
                );
            }
            if !rules::covers(r, s) {
                continue;
            }
            for t in rules {
                if rules::covers(s, t) {
                    ensure!(rules::covers(r, t), "covers not transitive");
                }
            }
        }
    }
    Ok(())
}

/// Whenever `r'` lies in the cover set of `r`, `r'` has support and
/// confidence at least those of `r`. Checked on all pairs.
pub fn check_dominance(rules: &RuleSet) -> Check {
    let keyed: Vec<(u32, u32, &Rule)> = rules
        .iter()
        .map(|r| (mask_of(&r.antecedent), mask_of(&r.union()), r))
        .collect();
    for &(x, z, r) in &keyed {
        for &(xp, zp, rp) in &keyed {
            if sub(x, xp) && sub(zp, z) {
                ensure!(
                    rp.support >= r.support && rp.confidence >= r.confidence,
                    "dominance fails for {rp:?} in C({r:?})"
                );
            }
        }
    }
    Ok(())
}

/// Rules of a set as a plain list, for sampling.
pub fn as_vec(rules: &RuleSet) -> Vec<Rule> {
    rules.rules().to_vec()
}
