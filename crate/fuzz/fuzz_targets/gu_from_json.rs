#![no_main]

use gspin6::gu_groups::GUElem;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(g) = GUElem::from_json(s) {
            let back = GUElem::from_json(&g.to_json().to_string()).expect("emitted JSON parses");
            assert_eq!(back.to_json(), g.to_json());
        }
    }
});
