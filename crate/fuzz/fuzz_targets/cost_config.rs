#![no_main]

use libfuzzer_sys::fuzz_target;
use optoffload::costmodel::{pipeline_time, CostScenario};
use optoffload::io::KeyValues;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let _ = KeyValues::parse(text);
    if let Ok(s) = CostScenario::parse(text) {
        let _ = pipeline_time(&s.hardware);
    }
});
