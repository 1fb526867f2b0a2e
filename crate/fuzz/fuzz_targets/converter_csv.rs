#![no_main]

use libfuzzer_sys::fuzz_target;
use optoffload::io::parse_converter_csv;
use optoffload::pareto::{pareto_frontier_indices, pareto_frontier_naive};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(records) = parse_converter_csv(text) {
        let mut fast = pareto_frontier_indices(&records).expect("parsed records are valid");
        fast.sort_unstable();
        assert_eq!(fast, pareto_frontier_naive(&records));
    }
});
