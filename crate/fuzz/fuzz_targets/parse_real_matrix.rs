#![no_main]

use libfuzzer_sys::fuzz_target;
use sl3_core::parse;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(m) = parse::parse_real_matrix(s) {
            assert!(m.is_square() && m.iter().all(|x| x.is_finite()));
            let _ = sl3_core::cone::semiflat_assemble(&m);
        }
    }
});
