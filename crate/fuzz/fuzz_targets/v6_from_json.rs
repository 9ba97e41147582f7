#![no_main]

use gspin6::gu_groups::V6Vec;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(v) = V6Vec::from_json(s) {
            let _ = v.qform();
        }
    }
});
