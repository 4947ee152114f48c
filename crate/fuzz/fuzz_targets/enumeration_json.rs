#![no_main]

use chipstar::EnumerationResult;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(result) = EnumerationResult::from_json(text) {
        assert_eq!(
            EnumerationResult::from_json(&result.to_json()).expect("re-parses"),
            result
        );
    }
});
