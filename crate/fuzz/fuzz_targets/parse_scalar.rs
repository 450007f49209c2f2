#![no_main]

use libfuzzer_sys::fuzz_target;
use omega_gj::Field;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    for field in [Field::Rational, Field::gf(7).unwrap(), Field::gf(4_294_967_291).unwrap()] {
        if let Ok(v) = field.parse_scalar(text) {
            assert_eq!(field.parse_scalar(&v.to_string()).unwrap(), v);
        }
    }
});
