#![no_main]

use dlb_core::harness::{parse_runs_csv, summarize};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(records) = parse_runs_csv(data) {
        let _ = summarize(&records, &[]);
    }
});
