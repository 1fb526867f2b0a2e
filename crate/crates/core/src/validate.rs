//! Brute-force validation suites: each fast path checked against its
//! literal-sum reference on seeded random inputs.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Result;
use crate::field::{convolve_direct, convolve_spectral, dft2, dft2_naive, ComplexGrid, Direction};
use crate::optics::{
    far_field_oracle, fraunhofer_intensity, fraunhofer_ok, simulate_4f_convolution, DetectorMode, Encoding,
    OpticalSetup, RealGrid, SlmConfig,
};
use crate::pareto::{pareto_frontier_indices, pareto_frontier_naive, synthetic_survey, ConverterKind};

pub const TRANSFORM_TOLERANCE: f64 = 1e-10;
pub const CONVOLUTION_TOLERANCE: f64 = 1e-9;
pub const FAR_FIELD_MIN_CORRELATION: f64 = 0.99;
pub const FRINGE_TOLERANCE: f64 = 0.05;
pub const IDEAL_FIDELITY_FLOOR: f64 = 1.0 - 1e-9;

/// Outcome of one suite: the worst observed metric against its bound.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub metric: f64,
    pub bound: f64,
    pub passed: bool,
    pub cases: usize,
}

impl Check {
    fn at_most(name: &'static str, metric: f64, bound: f64, cases: usize) -> Self {
        Self { name, metric, bound, passed: metric <= bound, cases }
    }

    fn at_least(name: &'static str, metric: f64, bound: f64, cases: usize) -> Self {
        Self { name, metric, bound, passed: metric >= bound, cases }
    }
}

/// Fast forward transform vs the double-sum DFT on every size up to
/// `max_dim × max_dim`; metric is the worst relative error.
pub fn transform_suite(seed: u64, max_dim: usize) -> Result<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    let mut cases = 0;
    for rows in 1..=max_dim {
        for cols in 1..=max_dim {
            let g = ComplexGrid::random(rows, cols, &mut rng)?;
            let err = dft2(&g, Direction::Forward).rel_error(&dft2_naive(&g, Direction::Forward))?;
            worst = worst.max(err);
            cases += 1;
        }
    }
    Ok(Check::at_most("transform_vs_double_sum", worst, TRANSFORM_TOLERANCE, cases))
}

/// Spectral vs quadruple-loop convolution on `trials` random pairs with
/// sizes up to `max_dim` per axis.
pub fn convolution_suite(seed: u64, trials: usize, max_dim: usize) -> Result<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for _ in 0..trials {
        let (rows, cols) = (rng.gen_range(1..=max_dim), rng.gen_range(1..=max_dim));
        let a = ComplexGrid::random(rows, cols, &mut rng)?;
        let b = ComplexGrid::random(rows, cols, &mut rng)?;
        let err = convolve_spectral(&a, &b)?.rel_error(&convolve_direct(&a, &b)?)?;
        worst = worst.max(err);
    }
    Ok(Check::at_most("convolution_theorem", worst, CONVOLUTION_TOLERANCE, trials))
}

/// Sweep frontier vs pairwise-dominance frontier; metric is the number of
/// trials whose index sets differ.
pub fn pareto_suite(seed: u64, trials: usize, records: usize) -> Result<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut mismatches = 0;
    for t in 0..trials {
        let kind = if t % 2 == 0 { ConverterKind::Adc } else { ConverterKind::Dac };
        let rs = synthetic_survey(records, kind, &mut rng);
        let mut fast = pareto_frontier_indices(&rs)?;
        fast.sort_unstable();
        if fast != pareto_frontier_naive(&rs) {
            mismatches += 1;
        }
    }
    Ok(Check::at_most("pareto_vs_pairwise", mismatches as f64, 0.0, trials))
}

/// Pearson correlation coefficient of two equally long samples.
pub fn pearson(x: &[f64], y: &[f64]) -> f64 {
    assert_eq!(x.len(), y.len(), "pearson needs equal-length samples");
    let n = x.len() as f64;
    let (mx, my) = (x.iter().sum::<f64>() / n, y.iter().sum::<f64>() / n);
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx).powi(2);
        syy += (b - my).powi(2);
    }
    sxy / (sxx * syy).sqrt()
}

/// Far-field geometry used by the physics checks: 15 µm pixels, HeNe
/// wavelength, 10 m throw.
pub fn far_field_geometry(rows: usize, cols: usize) -> Result<(SlmConfig, OpticalSetup)> {
    Ok((SlmConfig::new(rows, cols, 15e-6, 8, 1)?, OpticalSetup::new(632.8e-9, 10.0, OpticalSetup::DEFAULT_MARGIN)?))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FarFieldComparison {
    pub fraunhofer_valid: bool,
    pub correlation: f64,
}

/// Huygens oracle vs `|DFT|²` for a random binary `n × n` aperture.
pub fn far_field_correlation(seed: u64, n: usize) -> Result<FarFieldComparison> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (slm, setup) = far_field_geometry(n, n)?;
    let aperture = ComplexGrid::from_fn(n, n, |_, _| Complex64::new(if rng.gen_bool(0.5) { 1.0 } else { 0.0 }, 0.0))?;
    let oracle = far_field_oracle(&aperture, &setup, &slm, (n, n))?;
    let fourier = fraunhofer_intensity(&aperture);
    Ok(FarFieldComparison {
        fraunhofer_valid: fraunhofer_ok(&setup, &slm).valid,
        correlation: pearson(oracle.data(), fourier.data()),
    })
}

/// Mean spacing between interior local maxima of `samples`, in samples,
/// with parabolic peak refinement. `None` with fewer than two peaks.
pub fn peak_spacing(samples: &[f64]) -> Option<f64> {
    let peaks: Vec<f64> = (1..samples.len().saturating_sub(1))
        .filter(|&i| samples[i] > samples[i - 1] && samples[i] >= samples[i + 1])
        .map(|i| {
            let (l, c, r) = (samples[i - 1], samples[i], samples[i + 1]);
            let den = l - 2.0 * c + r;
            let offset = if den == 0.0 { 0.0 } else { 0.5 * (l - r) / den };
            i as f64 + offset
        })
        .collect();
    if peaks.len() < 2 {
        return None;
    }
    Some((peaks[peaks.len() - 1] - peaks[0]) / (peaks.len() - 1) as f64)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FringeMeasurement {
    pub expected_period_m: f64,
    pub measured_period_m: f64,
    pub relative_error: f64,
}

/// Two open pixels `separation_px` apart on a 1 × `width` SLM; the measured
/// fringe period on a 64-sample detector line vs `λD/d`.
pub fn double_slit_fringes(width: usize, separation_px: usize) -> Result<FringeMeasurement> {
    let (slm, setup) = far_field_geometry(1, width)?;
    let first = width / 2 - separation_px / 2;
    let aperture = ComplexGrid::from_fn(1, width, |_, c| {
        Complex64::new(if c == first || c == first + separation_px { 1.0 } else { 0.0 }, 0.0)
    })?;
    let samples = crate::optics::ORACLE_MAX_SAMPLES_PER_AXIS;
    let line = far_field_oracle(&aperture, &setup, &slm, (1, samples))?;
    let sample_pitch = setup.wavelength_m * setup.distance_m / slm.effective_pitch_m() / samples as f64;
    let d = separation_px as f64 * slm.effective_pitch_m();
    let expected = setup.wavelength_m * setup.distance_m / d;
    let measured = peak_spacing(line.data()).map_or(f64::NAN, |s| s * sample_pitch);
    Ok(FringeMeasurement {
        expected_period_m: expected,
        measured_period_m: measured,
        relative_error: ((measured - expected) / expected).abs(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DetectionLoss {
    pub trials: usize,
    pub min_ideal_fidelity: f64,
    pub max_magnitude_fidelity: f64,
    pub mean_magnitude_fidelity: f64,
    /// Trials where magnitude detection beat ideal detection.
    pub violations: usize,
}

/// Ideal vs magnitude detection on random `n × n` drive pairs.
pub fn detection_loss(seed: u64, trials: usize, n: usize, encoding: Encoding) -> Result<DetectionLoss> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let slm = SlmConfig::new(n, n, 15e-6, 8, 1)?;
    let mut out = DetectionLoss {
        trials,
        min_ideal_fidelity: f64::INFINITY,
        max_magnitude_fidelity: f64::NEG_INFINITY,
        mean_magnitude_fidelity: 0.0,
        violations: 0,
    };
    for _ in 0..trials {
        let a = RealGrid::from_fn(n, n, |_, _| rng.gen())?;
        let b = RealGrid::from_fn(n, n, |_, _| rng.gen())?;
        let ideal = simulate_4f_convolution(&a, &b, &slm, encoding, DetectorMode::IdealComplex)?.fidelity;
        let mag = simulate_4f_convolution(&a, &b, &slm, encoding, DetectorMode::Magnitude)?.fidelity;
        out.min_ideal_fidelity = out.min_ideal_fidelity.min(ideal);
        out.max_magnitude_fidelity = out.max_magnitude_fidelity.max(mag);
        out.mean_magnitude_fidelity += mag / trials as f64;
        if mag > ideal {
            out.violations += 1;
        }
    }
    Ok(out)
}

/// Every suite at its default size, as run by the `oracle` command.
pub fn run_all(seed: u64) -> Result<Vec<Check>> {
    let far = far_field_correlation(seed, 16)?;
    let fringes = double_slit_fringes(16, 5)?;
    let loss = detection_loss(seed, 20, 16, Encoding::Amplitude)?;
    Ok(vec![
        transform_suite(seed, 32)?,
        convolution_suite(seed, 100, 32)?,
        pareto_suite(seed, 50, 200)?,
        Check::at_least(
            "far_field_correlation",
            if far.fraunhofer_valid { far.correlation } else { f64::NAN },
            FAR_FIELD_MIN_CORRELATION,
            1,
        ),
        Check::at_most("double_slit_period_error", fringes.relative_error, FRINGE_TOLERANCE, 1),
        Check::at_least("ideal_detection_fidelity", loss.min_ideal_fidelity, IDEAL_FIDELITY_FLOOR, loss.trials),
        Check::at_most("detection_loss_violations", loss.violations as f64, 0.0, loss.trials),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pearson_basics() {
        assert!((pearson(&[1.0, 2.0, 3.0], &[2.0, 4.0, 6.0]) - 1.0).abs() < 1e-15);
        assert!((pearson(&[1.0, 2.0, 3.0], &[3.0, 2.0, 1.0]) + 1.0).abs() < 1e-15);
    }

    #[test]
    fn peak_spacing_on_cosine() {
        let s: Vec<f64> = (0..100).map(|i| (2.0 * std::f64::consts::PI * i as f64 / 12.5).cos()).collect();
        assert!((peak_spacing(&s).unwrap() - 12.5).abs() < 0.05);
        assert_eq!(peak_spacing(&[0.0, 1.0, 0.0]), None);
    }
}
