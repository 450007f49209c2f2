#![no_main]

use libfuzzer_sys::fuzz_target;
use omega_gj::spec::MatrixSpec;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(spec) = MatrixSpec::parse(text) else {
        return;
    };
    let rendered = spec.render();
    let again = MatrixSpec::parse(&rendered).expect("rendered spec parses");
    assert_eq!(again, spec);
    if let Ok(m) = spec.build() {
        for k in 0..4 {
            let _ = m.row_at(k);
        }
    }
});
