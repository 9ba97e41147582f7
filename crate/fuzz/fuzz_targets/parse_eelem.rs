#![no_main]

use gspin6::exact_rings::text::parse_eelem;
use gspin6::exact_rings::QuadAlgebra;
use libfuzzer_sys::fuzz_target;

// first byte picks the field, the rest is the element
fuzz_target!(|data: &[u8]| {
    let Some((&d, rest)) = data.split_first() else { return };
    let Ok(alg) = QuadAlgebra::field([1, 2, 3, 7, 11][d as usize % 5]) else { return };
    let Ok(s) = std::str::from_utf8(rest) else { return };
    if let Ok(x) = parse_eelem(s, alg) {
        let back = parse_eelem(&x.to_string(), alg).expect("printed elements parse");
        assert_eq!(back, x);
    }
});
