#![no_main]

use libfuzzer_sys::fuzz_target;
use njordan::config::ScenarioConfig;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(config) = ScenarioConfig::parse(text) {
            // accepted configs must survive the JSON echo used in reports
            let json = serde_json::to_string(&config).unwrap();
            let back: ScenarioConfig = serde_json::from_str(&json).unwrap();
            assert_eq!(back, config);
        }
    }
});
