#![no_main]

use chipstar::tableau::{tableaux_from_json, Tableau};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(t) = Tableau::from_json(text) {
        assert_eq!(Tableau::from_json(&t.to_json()).expect("re-parses"), t);
        if t.is_standard() {
            let outcome = chipstar::to_outcome(&t).expect("standard tableaux convert");
            let moves = chipstar::witness_sequence(&t).expect("standard tableaux have witnesses");
            if t.k() * t.m() <= 16 {
                let (end, _) =
                    chipstar::replay(outcome.params(), &moves).expect("witness is legal");
                assert_eq!(end.outcome(), Some(&outcome));
            }
        }
    }
    let _ = tableaux_from_json(text);
});
