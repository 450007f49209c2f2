#![no_main]

use libfuzzer_sys::fuzz_target;
use omega_gj::snapshot::{decode_snapshot, StateSnapshot};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(snap) = StateSnapshot::from_json(text) {
        let again = StateSnapshot::from_json(&snap.to_json()).unwrap();
        assert_eq!(again, snap);
    }
    let _ = decode_snapshot(text);
});
