#![no_main]

use libfuzzer_sys::fuzz_target;
use rulebases::persist::{rule_from_json, rule_to_json};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let items: Vec<String> = ["a", "b", "c", "d", "e", "f"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    if let Ok(rule) = rule_from_json(text, &items) {
        let again =
            rule_from_json(&rule_to_json(&rule, &items), &items).expect("rendered rule parses");
        assert_eq!(again, rule);
    }
});
