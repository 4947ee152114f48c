#![no_main]

use chipstar::StableOutcome;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(outcome) = text.parse::<StableOutcome>() {
        let again: StableOutcome = outcome.to_string().parse().expect("display re-parses");
        assert_eq!(again, outcome);
        let _ = chipstar::from_outcome(&outcome).is_standard();
    }
});
