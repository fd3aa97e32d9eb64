#![no_main]

use libfuzzer_sys::fuzz_target;
use mcm_pathloss::AssamConfig;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(cfg) = AssamConfig::parse(text) {
        assert!(cfg.d0_m > 0.0 && cfg.valid_range_m[0] <= cfg.valid_range_m[1]);
    }
});
