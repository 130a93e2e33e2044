#![no_main]

use libfuzzer_sys::fuzz_target;
use rulebases::Rational;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(r) = text.parse::<Rational>() {
        let again: Rational = r.to_string().parse().expect("rendered rational parses");
        assert_eq!(again, r);
        let _ = r.to_decimal(4);
        let _ = r.to_percent(2);
    }
});
