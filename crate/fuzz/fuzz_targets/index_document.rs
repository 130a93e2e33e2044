#![no_main]

use libfuzzer_sys::fuzz_target;
use rulebases::persist::{load_index, IndexDocument};
use rulebases::{rules, Rational};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok((index, table)) = load_index(text) {
        let json = IndexDocument::new(&index, &table).to_json();
        let (again, again_table) = load_index(&json).expect("rendered index loads");
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
});
