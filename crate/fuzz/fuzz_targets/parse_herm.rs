#![no_main]

use gspin6::exact_rings::text::parse_herm;
use gspin6::exact_rings::QuadAlgebra;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Some((&d, rest)) = data.split_first() else { return };
    let Ok(alg) = QuadAlgebra::field([1, 2, 3, 7, 11][d as usize % 5]) else { return };
    if let Ok(s) = std::str::from_utf8(rest) {
        if let Ok(t) = parse_herm(s, alg) {
            let _ = t.det();
        }
    }
});
