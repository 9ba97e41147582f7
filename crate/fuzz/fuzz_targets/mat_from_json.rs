#![no_main]

use gspin6::exact_rings::text::mat_from_json;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        let _ = mat_from_json(s);
    }
});
