#![no_main]

use libfuzzer_sys::fuzz_target;
use optoffload::complexity::ComplexityClass;
use optoffload::io::parse_tabulated_csv;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(curve) = parse_tabulated_csv("fuzz", text) {
        let class = ComplexityClass::Tabulated(curve);
        for n in [0, 1, 2, 1000, u64::MAX] {
            let _ = class.ops(n);
        }
    }
});
