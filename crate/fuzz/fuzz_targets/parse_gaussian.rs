#![no_main]

use libfuzzer_sys::fuzz_target;
use sl3_core::parse;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(z) = parse::parse_gaussian(s) {
            assert_eq!(parse::parse_gaussian(&z.to_string()).unwrap(), z);
        }
    }
});
