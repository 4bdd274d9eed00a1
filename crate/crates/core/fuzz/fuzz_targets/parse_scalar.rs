#![no_main]

use acbm_core::scalar::{parse_scalar, Vars};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let vars = Vars::new(["a", "b", "c"]);
    if let Ok(s) = parse_scalar(text, &vars) {
        let printed = s.to_string();
        assert_eq!(parse_scalar(&printed, &vars).as_ref(), Ok(&s), "{printed}");
    }
});
