#![no_main]

use libfuzzer_sys::fuzz_target;
use rulebases::TransactionDB;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(db) = TransactionDB::parse_basket(text) {
        let again = TransactionDB::parse_basket(&db.to_basket()).expect("rendered basket parses");
        assert_eq!(again, db);
    }
});
