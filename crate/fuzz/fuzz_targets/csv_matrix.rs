#![no_main]

use libfuzzer_sys::fuzz_target;
use rulebases::TransactionDB;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(db) = TransactionDB::parse_csv_matrix(text) {
        let again =
            TransactionDB::parse_csv_matrix(&db.to_csv_matrix()).expect("rendered matrix parses");
        assert_eq!(again, db);
    }
});
