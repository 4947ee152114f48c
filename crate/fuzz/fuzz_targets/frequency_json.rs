#![no_main]

use chipstar::FrequencyReport;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(report) = FrequencyReport::from_json(text) {
        assert_eq!(
            FrequencyReport::from_json(&report.to_json()).expect("re-parses"),
            report
        );
    }
});
