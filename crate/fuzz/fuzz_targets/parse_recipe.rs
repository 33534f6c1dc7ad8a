#![no_main]

use libfuzzer_sys::fuzz_target;
use precubical::io::{parse_recipe, write_recipe};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(steps) = parse_recipe(text) {
        let written = write_recipe(&steps);
        assert_eq!(
            parse_recipe(&written).expect("written recipe parses"),
            steps
        );
    }
});
