#![no_main]

use libfuzzer_sys::fuzz_target;
use njordan::report::Emit;
use njordan::scenario::Report;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(report) = Report::from_json(text) {
            let _ = report.text_summary();
            let _ = report.tables();
            let again = Report::from_json(&report.to_json().unwrap()).unwrap();
            assert_eq!(again.to_json().unwrap(), report.to_json().unwrap());
        }
    }
});
