#![no_main]

use libfuzzer_sys::fuzz_target;
use omega_gj::{Field, LinForm};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    for field in [Field::Rational, Field::gf(11).unwrap()] {
        if let Ok(f) = LinForm::parse(field, text) {
            let back = LinForm::parse(field, &f.to_string()).unwrap();
            assert_eq!(back, f);
            assert!(f.sub(&f).unwrap().is_zero());
        }
    }
});
