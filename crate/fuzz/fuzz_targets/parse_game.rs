#![no_main]

use kcore::io::{game_to_value, parse_game_with_form, to_pretty, GameForm};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok((v, _)) = parse_game_with_form(text) {
        for form in [GameForm::Game, GameForm::Mobius] {
            let again = parse_game_with_form(&to_pretty(&game_to_value(&v, form))).unwrap().0;
            assert_eq!(again, v);
        }
    }
});
