#![no_main]

use kcore::achievable::build_atlas;
use kcore::io::{order_to_value, parse_order, to_pretty};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(order) = parse_order(text) {
        assert_eq!(parse_order(&to_pretty(&order_to_value(&order))).unwrap(), order);
        let atlas = build_atlas(&order).unwrap();
        let covered: usize = atlas.nonempty().map(|f| f.members().len()).sum();
        assert_eq!(covered, order.ground().size() - 1);
    }
});
