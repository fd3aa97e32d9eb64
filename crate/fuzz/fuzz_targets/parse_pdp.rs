#![no_main]

use libfuzzer_sys::fuzz_target;
use mcm_pathloss::{parse_pdp, DelayUnit};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    for (unit, ds) in [(DelayUnit::Ns, None), (DelayUnit::Normalized, Some(363.0))] {
        if let Ok(pdp) = parse_pdp(text, unit, ds) {
            assert!((pdp.total_power() - 1.0).abs() < 1e-9);
            assert!(pdp.taps.windows(2).all(|w| w[0].excess_delay_s <= w[1].excess_delay_s));
            let again = parse_pdp(&pdp.to_csv(), DelayUnit::Ns, None).expect("canonical dump parses");
            assert_eq!(again.taps.len(), pdp.taps.len());
        }
    }
});
