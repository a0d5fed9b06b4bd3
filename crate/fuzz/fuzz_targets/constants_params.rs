#![no_main]

use libfuzzer_sys::fuzz_target;
use njordan::scenario::parse_constants;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        let mut words = text.split_whitespace();
        let Some(variant) = words.next() else { return };
        let params: Vec<String> = words.map(str::to_string).collect();
        if let Ok(report) = parse_constants(variant, &params) {
            assert!(report.constants.stated.is_finite());
        }
    }
});
