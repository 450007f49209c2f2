#![no_main]

use libfuzzer_sys::fuzz_target;
use omega_gj::snapshot::parse_tsv;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        let _ = parse_tsv(text);
    }
});
