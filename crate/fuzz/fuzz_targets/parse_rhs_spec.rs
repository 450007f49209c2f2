#![no_main]

use libfuzzer_sys::fuzz_target;
use omega_gj::spec::RhsSpec;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(spec) = RhsSpec::parse(text) {
            assert_eq!(RhsSpec::parse(&spec.render()).expect("rendered rhs parses"), spec);
        }
    }
});
