#![no_main]

use dlb_core::harness::ExperimentConfig;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(config) = ExperimentConfig::from_json(text) {
            assert!(!config.sizes.is_empty());
            assert!(config.trajectory_stride >= 1);
            for &n in &config.sizes {
                let sizes = config.algorithm.sizes(n);
                assert!(sizes.mu >= 1 && sizes.lambda >= 1);
            }
        }
    }
});
