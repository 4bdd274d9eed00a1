#![no_main]

use acbm_core::manifest::{emit_manifold, parse_manifold};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(m) = parse_manifold(text) {
        let emitted = emit_manifold(&m);
        assert_eq!(parse_manifold(&emitted).as_ref(), Ok(&m));
    }
});
