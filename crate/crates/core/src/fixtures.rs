//! Small checked-in datasets with known closed sets, generators and bases.

use crate::dataset::TransactionDB;

pub const EXAMPLE1_CSV: &str = include_str!("../fixtures/example1.csv");
pub const LEMMA1_BASKET: &str = include_str!("../fixtures/lemma1.basket");
pub const LEMMA2_BASKET: &str = include_str!("../fixtures/lemma2.basket");
pub const NONMONOTONE_BASKET: &str = include_str!("../fixtures/nonmonotone.basket");
pub const CLOSED_ANTECEDENT_BASKET: &str = include_str!("../fixtures/closed_antecedent.basket");

/// Six transactions over `a..f`; the running example of the rule-basis
/// literature, where the heuristic generator misses `b -> acde`.
pub fn example1() -> TransactionDB {
    TransactionDB::parse_csv_matrix(EXAMPLE1_CSV).expect("fixture parses")
}

/// 13 transactions (`8 x abc`, `ab`, `3 x a`, `b`); `ab` yields a
/// representative rule that both the kmns and bmns filters reject.
pub fn lemma1() -> TransactionDB {
    TransactionDB::parse_basket(LEMMA1_BASKET).expect("fixture parses")
}

/// 35 transactions (`2 x abcde`, `3 x abcd`, `15 x a`, `15 x b`); `abcd`
/// passes the kmns interval test but fails the bmns one.
pub fn lemma2() -> TransactionDB {
    TransactionDB::parse_basket(LEMMA2_BASKET).expect("fixture parses")
}

/// A dataset on which lowering the confidence threshold strictly shrinks
/// the set of representative rules: at `τ = 1/2` it has two rules for
/// `γ = 2/3` (`∅ -> c`, `a -> c`) but only `∅ -> ac` for `γ = 3/10`.
pub fn nonmonotone() -> TransactionDB {
    TransactionDB::parse_basket(NONMONOTONE_BASKET).expect("fixture parses")
}

/// `ab` is closed but not a minimal generator, and `ab -> c` belongs to B*.
pub fn closed_antecedent() -> TransactionDB {
    TransactionDB::parse_basket(CLOSED_ANTECEDENT_BASKET).expect("fixture parses")
}

/// All checked-in fixtures, by name.
pub fn all() -> Vec<(&'static str, TransactionDB)> {
    vec![
        ("example1", example1()),
        ("lemma1", lemma1()),
        ("lemma2", lemma2()),
        ("nonmonotone", nonmonotone()),
        ("closed-antecedent", closed_antecedent()),
    ]
}
