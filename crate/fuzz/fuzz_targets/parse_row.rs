#![no_main]

use libfuzzer_sys::fuzz_target;
use omega_gj::{Field, Row};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    for field in [Field::Rational, Field::gf(5).unwrap()] {
        if let Ok(row) = Row::parse(field, text) {
            assert_eq!(Row::parse(field, &row.to_string()).unwrap(), row);
            assert!(row.normalize_rightmost().right_leading().is_none_or(|v| v.is_one()));
        }
    }
});
