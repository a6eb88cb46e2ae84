#![no_main]

use kcore::rational::{format_rational, parse_rational};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(q) = parse_rational(text) {
        // the canonical form must parse back to the same value
        assert_eq!(parse_rational(&format_rational(&q)).unwrap(), q);
    }
});
