#![no_main]

use libfuzzer_sys::fuzz_target;
use sl3_core::Rational;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(q) = s.parse::<Rational>() {
            assert_eq!(q.to_string().parse::<Rational>().unwrap(), q);
        }
    }
});
