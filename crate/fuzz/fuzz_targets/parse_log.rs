#![no_main]

//! Input: a header line `k m`, then one move per line.

use chipstar::{replay, SequenceLog, StarParams};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let (header, body) = text.split_once('\n').unwrap_or((text, ""));
    let mut dims = header.split_whitespace().map(str::parse::<u32>);
    let (Some(Ok(k)), Some(Ok(m))) = (dims.next(), dims.next()) else {
        return;
    };
    if k > 6 || m > 6 {
        return;
    }
    let Ok(params) = StarParams::new(k, m) else {
        return;
    };
    if let Ok(log) = SequenceLog::parse_text(params, body) {
        assert_eq!(
            SequenceLog::parse_text(params, &log.to_text()).expect("re-parses"),
            log
        );
        let _ = replay(params, log.moves());
        let _ = chipstar::verify_poset(&log);
        let _ = chipstar::verify_mixing(&log, chipstar::MixingMode::Strict);
    }
});
