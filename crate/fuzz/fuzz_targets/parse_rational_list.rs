#![no_main]

use gspin6::exact_rings::text::parse_rational_list;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(xs) = parse_rational_list(s) {
        let text = xs.iter().map(ToString::to_string).collect::<Vec<_>>().join(",");
        if !xs.is_empty() {
            assert_eq!(parse_rational_list(&text).expect("printed list parses"), xs);
        }
    }
});
