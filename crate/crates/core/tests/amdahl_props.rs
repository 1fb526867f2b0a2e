use optoffload::amdahl::*;
use optoffload::Ratio;
use proptest::prelude::*;

fn p_strategy() -> impl Strategy<Value = Ratio> {
    prop_oneof![Just(Ratio::Unbounded), (1.0..1e6f64).prop_map(Ratio::Finite)]
}

proptest! {
    #[test]
    fn monotone_in_fraction_and_acceleration(f1 in 0.0..=1.0f64, f2 in 0.0..=1.0f64, p1 in 1.0..1e4f64, p2 in 1.0..1e4f64) {
        let (flo, fhi) = if f1 <= f2 { (f1, f2) } else { (f2, f1) };
        let (plo, phi) = if p1 <= p2 { (p1, p2) } else { (p2, p1) };
        let s = |f, p| amdahl_speedup(f, Ratio::Finite(p)).unwrap().to_f64();
        prop_assert!(s(flo, plo) <= s(fhi, plo) * (1.0 + 1e-12));
        prop_assert!(s(flo, plo) <= s(flo, phi) * (1.0 + 1e-12));
        prop_assert!(s(fhi, phi) <= amdahl_speedup(fhi, Ratio::Unbounded).unwrap().to_f64() * (1.0 + 1e-12));
    }

    #[test]
    fn identity_points(f in 0.0..=1.0f64, p in p_strategy()) {
        prop_assert_eq!(amdahl_speedup(0.0, p).unwrap(), Ratio::Finite(1.0));
        let s = amdahl_speedup(f, Ratio::Finite(1.0)).unwrap().to_f64();
        prop_assert!((s - 1.0).abs() <= 1e-15);
    }

    #[test]
    fn classification_permutation_and_split(
        rows in prop::collection::vec((prop::sample::select(vec!["fft2", "load", "Conv2d", "io", "ifftn", "fourier_x"]), 0.0..5.0f64), 1..12),
        split in 0.0..1.0f64,
        rot in 0usize..12,
    ) {
        let cfg = ClassifierConfig::default();
        let total: f64 = rows.iter().map(|r| r.1).sum::<f64>() + 1.0;
        let mk = |rs: &[(&str, f64)]| {
            BenchmarkProfile::full("b", total, rs.iter().map(|(f, t)| ProfileRow { function: f.to_string(), cumulative_s: *t }).collect()).unwrap()
        };
        let base = classify_accelerable(&mk(&rows), &cfg).unwrap();

        let mut rotated = rows.clone();
        let n = rotated.len();
        rotated.rotate_left(rot % n);
        prop_assert!((classify_accelerable(&mk(&rotated), &cfg).unwrap() - base).abs() <= 1e-12);

        let mut split_rows = Vec::new();
        for (f, t) in &rows {
            if cfg.matches(f) {
                split_rows.push((*f, t * split));
                split_rows.push((*f, t * (1.0 - split)));
            } else {
                split_rows.push((*f, *t));
            }
        }
        prop_assert!((classify_accelerable(&mk(&split_rows), &cfg).unwrap() - base).abs() <= 1e-12);
    }

    #[test]
    fn median_stable_under_small_order_preserving_shifts(
        mut xs in prop::collection::vec(1.0..100.0f64, 1..30),
        eps in prop::collection::vec(-0.49..0.49f64, 30),
    ) {
        xs.sort_by(f64::total_cmp);
        xs.dedup_by(|a, b| (*a - *b).abs() < 1e-6);
        let min_gap = xs.windows(2).map(|w| w[1] - w[0]).fold(1.0, f64::min);
        let report = |s: f64| SpeedupReport {
            name: String::new(), accel_fraction: 0.0, acceleration: Ratio::Unbounded,
            speedup: Ratio::Finite(s), asymptotic_speedup: Ratio::Finite(s),
        };
        let base: Vec<_> = xs.iter().map(|&x| report(x)).collect();
        let moved: Vec<_> = xs.iter().zip(&eps).map(|(&x, e)| report(x + e * min_gap)).collect();
        let m0 = aggregate(&base).unwrap().median.to_f64();
        let m1 = aggregate(&moved).unwrap().median.to_f64();
        // the median element keeps its rank, so it only moves by its own shift
        prop_assert!((m1 - m0).abs() <= 0.5 * min_gap);
    }
}

/// Speedups from the time columns and from the printed percentage column
/// agree within 3% on every row of the bundled table.
#[test]
fn table1_time_and_percentage_routes_agree() {
    let mut bad = Vec::new();
    for (p, (name, pct, _)) in table1::profiles().iter().zip(table1::PRINTED) {
        let ProfileBody::Reduced { accel_time_s } = p.body else { panic!("reduced form expected") };
        let from_times = p.total_time_s / (p.total_time_s - accel_time_s);
        let from_pct = 1.0 / (1.0 - pct / 100.0);
        let rel = (from_times - from_pct).abs() / from_pct;
        if rel > 0.03 {
            bad.push(format!("{name}: times {from_times:.4} vs percentage {from_pct:.4} ({:.2}%)", rel * 100.0));
        }
    }
    assert!(bad.is_empty(), "rows outside 3%:\n{}", bad.join("\n"));
}

#[test]
fn table1_fraction_matches_time_ratio() {
    let cfg = ClassifierConfig::default();
    for p in table1::profiles() {
        let r = analyze(&p, &cfg, Ratio::Unbounded).unwrap();
        let ProfileBody::Reduced { accel_time_s } = p.body else { unreachable!() };
        assert!((r.accel_fraction - accel_time_s / p.total_time_s).abs() < 1e-15);
        assert_eq!(r.speedup, r.asymptotic_speedup);
    }
}
