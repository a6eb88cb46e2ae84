#![no_main]

use kcore::Subset;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Some((&n, rest)) = data.split_first() else {
        return;
    };
    let Ok(key) = std::str::from_utf8(rest) else {
        return;
    };
    let n = (n % 25) as usize;
    if let Ok(s) = Subset::parse_key(key, n) {
        assert!(s.elements().all(|i| i >= 1 && i <= n));
        assert_eq!(Subset::parse_key(&s.key(), n).unwrap(), s);
    }
});
