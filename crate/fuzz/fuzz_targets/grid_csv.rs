#![no_main]

use libfuzzer_sys::fuzz_target;
use optoffload::io::{parse_grid_csv, write_grid_csv};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(grid) = parse_grid_csv(text) {
        // Anything accepted must survive a write/parse round trip bit for bit.
        let again = parse_grid_csv(&write_grid_csv(&grid)).expect("written grid parses");
        assert_eq!(grid.dims(), again.dims());
        for (a, b) in grid.data().iter().zip(again.data()) {
            assert!(a.re.to_bits() == b.re.to_bits() || (a.re.is_nan() && b.re.is_nan()));
            assert!(a.im.to_bits() == b.im.to_bits() || (a.im.is_nan() && b.im.is_nan()));
        }
    }
});
