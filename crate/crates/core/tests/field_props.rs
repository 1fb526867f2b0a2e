use num_complex::Complex64;
use optoffload::field::{convolve_direct, convolve_spectral, dft2, dft2_naive, ComplexGrid, Direction};
use proptest::prelude::*;

fn grid(max: usize) -> impl Strategy<Value = ComplexGrid> {
    (1..=max, 1..=max).prop_flat_map(|(r, c)| {
        prop::collection::vec((-10.0..10.0f64, -10.0..10.0f64), r * c).prop_map(move |v| {
            ComplexGrid::new(r, c, v.into_iter().map(|(re, im)| Complex64::new(re, im)).collect()).unwrap()
        })
    })
}

fn grid_pair(max: usize) -> impl Strategy<Value = (ComplexGrid, ComplexGrid)> {
    (1..=max, 1..=max).prop_flat_map(|(r, c)| {
        let cells = move || {
            prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), r * c).prop_map(move |v| {
                ComplexGrid::new(r, c, v.into_iter().map(|(re, im)| Complex64::new(re, im)).collect()).unwrap()
            })
        };
        (cells(), cells())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn round_trip(x in grid(32)) {
        let back = dft2(&dft2(&x, Direction::Forward), Direction::Inverse);
        prop_assume!(x.max_norm() > 0.0);
        prop_assert!(back.rel_error(&x).unwrap() <= 1e-12);
    }

    #[test]
    fn parseval(x in grid(32)) {
        let n = (x.rows() * x.cols()) as f64;
        let lhs = dft2(&x, Direction::Forward).energy();
        let rhs = n * x.energy();
        prop_assume!(rhs > 0.0);
        prop_assert!(((lhs - rhs) / rhs).abs() <= 1e-10);
    }

    #[test]
    fn fast_matches_double_sum(x in grid(32), dir in prop_oneof![Just(Direction::Forward), Just(Direction::Inverse)]) {
        let err = dft2(&x, dir).rel_error(&dft2_naive(&x, dir)).unwrap();
        prop_assert!(err <= 1e-10, "{}", err);
    }

    #[test]
    fn linearity((x, y) in grid_pair(16), a in -3.0..3.0f64, b in -3.0..3.0f64) {
        let (alpha, beta) = (Complex64::new(a, 0.5), Complex64::new(-0.25, b));
        let lhs = dft2(&x.axpby(alpha, &y, beta).unwrap(), Direction::Forward);
        let rhs = dft2(&x, Direction::Forward).axpby(alpha, &dft2(&y, Direction::Forward), beta).unwrap();
        prop_assume!(rhs.max_norm() > 1e-6);
        prop_assert!(lhs.rel_error(&rhs).unwrap() <= 1e-10);
    }

    #[test]
    fn convolution_theorem((a, b) in grid_pair(32)) {
        let direct = convolve_direct(&a, &b).unwrap();
        prop_assume!(direct.max_norm() > 0.0);
        prop_assert!(convolve_spectral(&a, &b).unwrap().rel_error(&direct).unwrap() <= 1e-9);
    }
}

#[test]
fn prototype_frame_size_round_trips() {
    // 1024 x 768 is not a power of two on one axis.
    let x = ComplexGrid::from_fn(768, 1024, |r, c| Complex64::new((r * 7 + c) as f64 % 13.0, (r + 3 * c) as f64 % 5.0))
        .unwrap();
    let back = dft2(&dft2(&x, Direction::Forward), Direction::Inverse);
    assert!(back.rel_error(&x).unwrap() <= 1e-12);
}

#[test]
fn non_power_of_two_against_double_sum() {
    let x = ComplexGrid::from_fn(12, 10, |r, c| Complex64::new((r as f64).sin(), (c as f64 * 0.3).cos())).unwrap();
    let err = dft2(&x, Direction::Forward).rel_error(&dft2_naive(&x, Direction::Forward)).unwrap();
    assert!(err <= 1e-10, "{err}");
}
