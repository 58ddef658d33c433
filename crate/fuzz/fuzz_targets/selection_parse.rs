#![no_main]

use dlb_core::ea::Selection;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(sel) = text.parse::<Selection>() {
            let again: Selection = sel.to_string().parse().expect("display round-trips");
            assert_eq!(sel, again);
        }
    }
});
