//! Replays the fuzz corpus through the parser entry points, then throws
//! random mutations of the seeds at them. Same round-trip checks as the
//! cargo-fuzz targets, runnable on stable.

use std::fs;
use std::path::PathBuf;

use proptest::prelude::*;
use rulebases::persist::{load_index, rule_from_json, rule_to_json, IndexDocument};
use rulebases::{rules, Rational, TransactionDB};

fn basket(text: &str) {
    if let Ok(db) = TransactionDB::parse_basket(text) {
        assert_eq!(TransactionDB::parse_basket(&db.to_basket()).unwrap(), db);
    }
}

fn csv_matrix(text: &str) {
    if let Ok(db) = TransactionDB::parse_csv_matrix(text) {
        assert_eq!(
            TransactionDB::parse_csv_matrix(&db.to_csv_matrix()).unwrap(),
            db
        );
    }
}

fn rational(text: &str) {
    if let Ok(r) = text.parse::<Rational>() {
        assert_eq!(r.to_string().parse::<Rational>().unwrap(), r);
        let _ = (r.to_decimal(4), r.to_percent(2));
    }
}

fn index_document(text: &str) {
    if let Ok((index, table)) = load_index(text) {
        let (again, again_table) =
            load_index(&IndexDocument::new(&index, &table).to_json()).unwrap();
        assert_eq!(again.closed(), index.closed());
        assert_eq!(again_table, table);
        for gamma in [Rational::ONE, Rational::from_counts(1, 3)] {
            let complete = rules::gen_rr_complete(&index, gamma).unwrap();
            assert_eq!(
                rules::gen_rr_twophase(&table, &index, gamma)
                    .unwrap()
                    .rules(),
                complete.rules()
            );
            rules::gen_rr_heuristic(&index, gamma).unwrap();
            rules::gen_bstar(&index, gamma).unwrap();
        }
    }
}

fn rule_line(text: &str) {
    let items: Vec<String> = ["a", "b", "c", "d", "e", "f"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    if let Ok(rule) = rule_from_json(text, &items) {
        assert_eq!(
            rule_from_json(&rule_to_json(&rule, &items), &items).unwrap(),
            rule
        );
    }
}

type Target = (&'static str, fn(&str));

const TARGETS: [Target; 5] = [
    ("basket", basket),
    ("csv_matrix", csv_matrix),
    ("rational", rational),
    ("index_document", index_document),
    ("rule_line", rule_line),
];

fn seeds(target: &str) -> Vec<String> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fuzz/corpus")
        .join(target);
    let mut out: Vec<String> = fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|entry| fs::read(entry.unwrap().path()).unwrap())
        .filter_map(|bytes| String::from_utf8(bytes).ok())
        .collect();
    out.sort();
    out
}

#[test]
fn corpus_seeds_are_handled() {
    for (target, run) in TARGETS {
        let seeds = seeds(target);
        assert!(!seeds.is_empty(), "{target} has no seeds");
        for s in &seeds {
            run(s);
        }
    }
}

#[test]
fn valid_seeds_parse() {
    assert!(seeds("basket")
        .iter()
        .any(|s| TransactionDB::parse_basket(s).is_ok()));
    assert!(seeds("csv_matrix")
        .iter()
        .any(|s| TransactionDB::parse_csv_matrix(s).is_ok()));
    assert!(
        seeds("index_document")
            .iter()
            .filter(|s| load_index(s).is_ok())
            .count()
            >= 3
    );
}

#[derive(Debug, Clone)]
enum Edit {
    Delete(usize),
    Insert(usize, char),
    Replace(usize, char),
    Duplicate(usize, usize),
}

fn apply(seed: &str, edits: &[Edit]) -> String {
    let mut chars: Vec<char> = seed.chars().collect();
    for e in edits {
        let len = chars.len().max(1);
        match *e {
            Edit::Delete(i) if !chars.is_empty() => {
                chars.remove(i % chars.len());
            }
            Edit::Insert(i, c) => chars.insert(i % (chars.len() + 1), c),
            Edit::Replace(i, c) if !chars.is_empty() => {
                let i = i % chars.len();
                chars[i] = c;
            }
            Edit::Duplicate(i, n) if !chars.is_empty() => {
                let start = i % len;
                let end = (start + n % 16 + 1).min(chars.len());
                let piece: Vec<char> = chars[start..end].to_vec();
                chars.splice(end..end, piece);
            }
            _ => {}
        }
    }
    chars.into_iter().collect()
}

fn edit() -> impl Strategy<Value = Edit> {
    let c = prop_oneof![
        Just(','),
        Just(' '),
        Just('\n'),
        Just('"'),
        Just('0'),
        Just('1'),
        Just('9'),
        Just('/'),
        Just('.'),
        Just('%'),
        Just(':'),
        Just('['),
        Just(']'),
        Just('{'),
        Just('}'),
        Just('-'),
        Just('a'),
        any::<char>(),
    ];
    prop_oneof![
        any::<usize>().prop_map(Edit::Delete),
        (any::<usize>(), c.clone()).prop_map(|(i, c)| Edit::Insert(i, c)),
        (any::<usize>(), c).prop_map(|(i, c)| Edit::Replace(i, c)),
        (any::<usize>(), any::<usize>()).prop_map(|(i, n)| Edit::Duplicate(i, n)),
    ]
}

/// 400 cases unless PROPTEST_CASES asks for more.
fn config() -> ProptestConfig {
    let cases = std::env::var("PROPTEST_CASES")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(400);
    ProptestConfig::with_cases(cases)
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn mutated_seeds_never_panic(target in 0usize..5, pick in any::<usize>(), edits in prop::collection::vec(edit(), 1..6)) {
        let (name, run) = TARGETS[target];
        let seeds = seeds(name);
        run(&apply(&seeds[pick % seeds.len()], &edits));
    }

    #[test]
    fn arbitrary_text_never_panics(text in ".{0,64}") {
        for (_, run) in TARGETS {
            run(&text);
        }
    }
}

#[derive(Debug, Clone)]
enum DocEdit {
    N(u64),
    Tau(u64, u64),
    ClosedCount(usize, u64),
    Mxs(usize, u64),
    GenCount(usize, u64),
    Kmns(usize, Option<u64>),
    Closure(usize, usize),
    DropItem(usize, usize),
    AddItem(usize, usize),
    Y(usize, usize, u64),
    P(usize, usize, u64, u64),
    SwapClosed(usize, usize),
    DropGenerator(usize),
    DropClosed(usize),
    Rename(usize),
}

fn doc_edit() -> impl Strategy<Value = DocEdit> {
    let small = || 0u64..12;
    let idx = || 0usize..64;
    prop_oneof![
        small().prop_map(DocEdit::N),
        (small(), small()).prop_map(|(a, b)| DocEdit::Tau(a, b)),
        (idx(), small()).prop_map(|(i, c)| DocEdit::ClosedCount(i, c)),
        (idx(), small()).prop_map(|(i, c)| DocEdit::Mxs(i, c)),
        (idx(), small()).prop_map(|(i, c)| DocEdit::GenCount(i, c)),
        (idx(), proptest::option::of(small())).prop_map(|(i, c)| DocEdit::Kmns(i, c)),
        (idx(), idx()).prop_map(|(i, c)| DocEdit::Closure(i, c)),
        (idx(), idx()).prop_map(|(i, j)| DocEdit::DropItem(i, j)),
        (idx(), idx()).prop_map(|(i, j)| DocEdit::AddItem(i, j)),
        (idx(), idx(), small()).prop_map(|(i, j, v)| DocEdit::Y(i, j, v)),
        (idx(), idx(), small(), small()).prop_map(|(i, j, a, b)| DocEdit::P(i, j, a, b)),
        (idx(), idx()).prop_map(|(i, j)| DocEdit::SwapClosed(i, j)),
        idx().prop_map(DocEdit::DropGenerator),
        idx().prop_map(DocEdit::DropClosed),
        idx().prop_map(DocEdit::Rename),
    ]
}

fn mutate(doc: &mut IndexDocument, e: &DocEdit) {
    let nc = doc.closed.len();
    let ng = doc.generators.len();
    let nb = doc.breakpoints.len();
    let items = doc.items.clone();
    match *e {
        DocEdit::N(n) => doc.n = n,
        DocEdit::Tau(a, b) => {
            if let Ok(t) = Rational::new(a, b) {
                doc.tau = t
            }
        }
        DocEdit::ClosedCount(i, c) if nc > 0 => doc.closed[i % nc].support_count = c,
        DocEdit::Mxs(i, c) if nc > 0 => doc.closed[i % nc].mxs_count = c,
        DocEdit::GenCount(i, c) if ng > 0 => doc.generators[i % ng].support_count = c,
        DocEdit::Kmns(i, c) if ng > 0 => doc.generators[i % ng].kmns_count = c,
        DocEdit::Closure(i, c) if ng > 0 => doc.generators[i % ng].closure = c,
        DocEdit::DropItem(i, j) if nc > 0 => {
            let s = &mut doc.closed[i % nc].items;
            if !s.is_empty() {
                s.remove(j % s.len());
            }
        }
        DocEdit::AddItem(i, j) if ng > 0 && !items.is_empty() => doc.generators[i % ng]
            .items
            .push(items[j % items.len()].clone()),
        DocEdit::Y(i, j, v) if nb > 0 => {
            let y = &mut doc.breakpoints[i % nb].y;
            if !y.is_empty() {
                let k = j % y.len();
                y[k] = v;
            }
        }
        DocEdit::P(i, j, a, b) if nb > 0 => {
            let p = &mut doc.breakpoints[i % nb].p;
            if let (false, Ok(r)) = (p.is_empty(), Rational::new(a, b)) {
                let k = j % p.len();
                p[k] = r;
            }
        }
        DocEdit::SwapClosed(i, j) if nc > 0 => doc.closed.swap(i % nc, j % nc),
        DocEdit::DropGenerator(i) if ng > 0 => {
            doc.generators.remove(i % ng);
        }
        DocEdit::DropClosed(i) if nc > 0 => {
            doc.closed.remove(i % nc);
        }
        DocEdit::Rename(i) if !items.is_empty() => {
            let k = i % items.len();
            doc.items[k] = format!("{}~", doc.items[k]);
        }
        _ => {}
    }
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn structured_index_edits_never_panic(pick in any::<usize>(), edits in prop::collection::vec(doc_edit(), 1..4)) {
        let seeds: Vec<IndexDocument> = seeds("index_document")
            .iter()
            .filter_map(|s| IndexDocument::from_json(s).ok())
            .collect();
        let mut doc = seeds[pick % seeds.len()].clone();
        for e in &edits {
            mutate(&mut doc, e);
        }
        index_document(&doc.to_json());
    }
}
