#![no_main]

use libfuzzer_sys::fuzz_target;
use sl3_core::parse;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok((a, b)) = parse::parse_range(s) {
            assert!(a <= b);
        }
    }
});
