#![no_main]

use libfuzzer_sys::fuzz_target;
use optoffload::amdahl::{analyze, ClassifierConfig};
use optoffload::io::parse_profiles;
use optoffload::Ratio;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let cfg = ClassifierConfig::default();
    if let Ok(profiles) = parse_profiles(text) {
        for p in &profiles {
            let r = analyze(p, &cfg, Ratio::Unbounded).expect("parsed profiles analyze");
            assert!((0.0..=1.0).contains(&r.accel_fraction));
            assert!(r.speedup.to_f64() >= 1.0);
        }
    }
});
