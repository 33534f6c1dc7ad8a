#![no_main]

use libfuzzer_sys::fuzz_target;
use precubical::io::{export_dot, parse, serialize};

// Anything that parses must serialize canonically and parse back to the
// same complex.
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(p) = parse(text) {
        let canonical = serialize(&p);
        let back = parse(&canonical).expect("canonical output parses");
        assert_eq!(back, p);
        assert_eq!(serialize(&back), canonical);
        if p.dimension().is_some_and(|d| d <= 2) {
            export_dot(&p).expect("dot export of a small complex");
        }
    }
});
