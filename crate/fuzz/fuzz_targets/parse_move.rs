#![no_main]

use chipstar::{Move, Vertex};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(mv) = text.parse::<Move>() {
        assert_eq!(
            mv.to_string().parse::<Move>().expect("display re-parses"),
            mv
        );
    }
    if let Ok(v) = text.parse::<Vertex>() {
        assert_eq!(
            v.to_string().parse::<Vertex>().expect("display re-parses"),
            v
        );
    }
});
