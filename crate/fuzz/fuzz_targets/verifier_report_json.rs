#![no_main]

use chipstar::VerifierReport;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(report) = VerifierReport::from_json(text) {
        assert_eq!(report.passed, report.violations.is_empty());
        assert_eq!(
            VerifierReport::from_json(&report.to_json()).expect("re-parses"),
            report
        );
    }
});
