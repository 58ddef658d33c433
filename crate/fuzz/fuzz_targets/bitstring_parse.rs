#![no_main]

use dlb_core::{BitString, FitnessFn};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(x) = text.parse::<BitString>() {
            let again: BitString = x.to_string().parse().expect("display round-trips");
            assert_eq!(x, again);
            if let Ok(f) = FitnessFn::DLB.evaluate(&x) {
                assert!(f <= x.len() as u64);
            }
        }
    }
});
