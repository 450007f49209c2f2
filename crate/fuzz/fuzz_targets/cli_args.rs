#![no_main]

use libfuzzer_sys::fuzz_target;

// Arguments are NUL separated. Only builtin matrices are reachable, and the
// stage count is clamped so a single input stays cheap.
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let mut args: Vec<String> = vec!["omega".into()];
    for a in text.split('\0') {
        match a.parse::<usize>() {
            Ok(n) => args.push((n % 24).to_string()),
            Err(_) if std::path::Path::new(a).exists() => return,
            Err(_) => args.push(a.to_string()),
        }
    }
    let out = omega_gj::cli::run(args);
    assert!(matches!(out.code, 0..=3));
});
