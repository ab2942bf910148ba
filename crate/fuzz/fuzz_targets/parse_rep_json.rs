#![no_main]

use libfuzzer_sys::fuzz_target;
use sl3_core::parse;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(r) = parse::parse_rep_json(s) {
            let _ = sl3_core::betti::character_map(&r);
        }
    }
});
