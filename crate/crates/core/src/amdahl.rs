//! Accelerable fractions and Amdahl's-law speedup limits from profiles.
//!
//! A profile is flat: one `(function, cumulative seconds)` row per function,
//! and rows whose names match a Fourier/convolution pattern are assumed to
//! take zero time on the accelerator. Callers must supply non-overlapping
//! rows; nested call-tree entries would be counted twice.

use serde::Serialize;

use crate::error::{invalid, Result};
use crate::ratio::Ratio;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProfileRow {
    pub function: String,
    pub cumulative_s: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ProfileBody {
    Full(Vec<ProfileRow>),
    Reduced { accel_time_s: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchmarkProfile {
    pub name: String,
    pub total_time_s: f64,
    pub body: ProfileBody,
}

impl BenchmarkProfile {
    pub fn full(name: impl Into<String>, total_time_s: f64, rows: Vec<ProfileRow>) -> Result<Self> {
        check_total(total_time_s)?;
        if let Some(r) = rows.iter().find(|r| !(r.cumulative_s.is_finite() && r.cumulative_s >= 0.0)) {
            return Err(invalid(format!("cumulative time of {:?} must be >= 0, got {}", r.function, r.cumulative_s)));
        }
        Ok(Self { name: name.into(), total_time_s, body: ProfileBody::Full(rows) })
    }

    pub fn reduced(name: impl Into<String>, accel_time_s: f64, total_time_s: f64) -> Result<Self> {
        check_total(total_time_s)?;
        if !(accel_time_s.is_finite() && (0.0..=total_time_s).contains(&accel_time_s)) {
            return Err(invalid(format!("accelerable time {accel_time_s} must lie in [0, {total_time_s}]")));
        }
        Ok(Self { name: name.into(), total_time_s, body: ProfileBody::Reduced { accel_time_s } })
    }

    /// Accelerable fraction: classified for full profiles, stored for reduced.
    pub fn accel_fraction(&self, cfg: &ClassifierConfig) -> Result<f64> {
        match &self.body {
            ProfileBody::Full(_) => classify_accelerable(self, cfg),
            ProfileBody::Reduced { accel_time_s } => {
                check_total(self.total_time_s)?;
                Ok((accel_time_s / self.total_time_s).clamp(0.0, 1.0))
            }
        }
    }
}

fn check_total(total: f64) -> Result<()> {
    if !(total.is_finite() && total > 0.0) {
        return Err(invalid(format!("total time must be positive, got {total}")));
    }
    Ok(())
}

/// Case-insensitive substrings that mark a function as accelerable.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassifierConfig {
    patterns: Vec<String>,
}

impl ClassifierConfig {
    pub const DEFAULT_PATTERNS: [&'static str; 4] = ["fft", "ifft", "fourier", "conv"];

    pub fn new<S: AsRef<str>>(patterns: impl IntoIterator<Item = S>) -> Result<Self> {
        let patterns: Vec<String> = patterns.into_iter().map(|p| p.as_ref().trim().to_lowercase()).collect();
        if patterns.is_empty() || patterns.iter().any(String::is_empty) {
            return Err(invalid("classifier needs at least one non-empty pattern"));
        }
        Ok(Self { patterns })
    }

    pub fn patterns(&self) -> &[String] {
        &self.patterns
    }

    pub fn matches(&self, function: &str) -> bool {
        let name = function.to_lowercase();
        self.patterns.iter().any(|p| name.contains(p.as_str()))
    }
}

impl Default for ClassifierConfig {
    fn default() -> Self {
        Self::new(Self::DEFAULT_PATTERNS).expect("default patterns are valid")
    }
}

/// Sum of matching rows' cumulative time over the total, clamped to `[0, 1]`.
pub fn classify_accelerable(profile: &BenchmarkProfile, cfg: &ClassifierConfig) -> Result<f64> {
    check_total(profile.total_time_s)?;
    let ProfileBody::Full(rows) = &profile.body else {
        return Err(invalid(format!("{:?} is a reduced profile with no function rows", profile.name)));
    };
    let accel: f64 = rows.iter().filter(|r| cfg.matches(&r.function)).map(|r| r.cumulative_s).sum();
    Ok((accel / profile.total_time_s).clamp(0.0, 1.0))
}

/// `S = 1 / ((1 − f) + f/P)`; with unbounded `P`, `S = 1 / (1 − f)`.
pub fn amdahl_speedup(f: f64, acceleration: Ratio) -> Result<Ratio> {
    if !(0.0..=1.0).contains(&f) {
        return Err(invalid(format!("accelerable fraction must lie in [0, 1], got {f}")));
    }
    let accelerated = match acceleration {
        Ratio::Unbounded => 0.0,
        Ratio::Finite(p) if p.is_finite() && p >= 1.0 => f / p,
        Ratio::Finite(p) => return Err(invalid(format!("acceleration factor must be >= 1, got {p}"))),
    };
    Ok(Ratio::from_quotient(1.0, (1.0 - f) + accelerated))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpeedupReport {
    pub name: String,
    pub accel_fraction: f64,
    pub acceleration: Ratio,
    /// Speedup at `acceleration`.
    pub speedup: Ratio,
    pub asymptotic_speedup: Ratio,
}

pub fn analyze(profile: &BenchmarkProfile, cfg: &ClassifierConfig, acceleration: Ratio) -> Result<SpeedupReport> {
    let f = profile.accel_fraction(cfg)?;
    Ok(SpeedupReport {
        name: profile.name.clone(),
        accel_fraction: f,
        acceleration,
        speedup: amdahl_speedup(f, acceleration)?,
        asymptotic_speedup: amdahl_speedup(f, Ratio::Unbounded)?,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Aggregate {
    pub mean: Ratio,
    pub median: Ratio,
    pub min: Ratio,
    pub max: Ratio,
}

/// Summary statistics over each report's `speedup`. Any unbounded speedup
/// makes the mean unbounded.
pub fn aggregate(reports: &[SpeedupReport]) -> Result<Aggregate> {
    if reports.is_empty() {
        return Err(invalid("cannot aggregate an empty report set"));
    }
    let mut sorted: Vec<Ratio> = reports.iter().map(|r| r.speedup).collect();
    sorted.sort_by(Ratio::total_cmp);
    let n = sorted.len();
    let mean = if sorted.iter().any(|s| s.is_unbounded()) {
        Ratio::Unbounded
    } else {
        Ratio::Finite(sorted.iter().map(|s| s.to_f64()).sum::<f64>() / n as f64)
    };
    let median = if n % 2 == 1 {
        sorted[n / 2]
    } else {
        match (sorted[n / 2 - 1], sorted[n / 2]) {
            (Ratio::Finite(a), Ratio::Finite(b)) => Ratio::Finite((a + b) / 2.0),
            _ => Ratio::Unbounded,
        }
    };
    Ok(Aggregate { mean, median, min: sorted[0], max: sorted[n - 1] })
}

/// The bundled 27-application profiling summary.
pub mod table1 {
    use super::BenchmarkProfile;

    /// Reduced-form CSV of accelerable and total seconds per application.
    pub const CSV: &str = include_str!("../data/table1.csv");

    /// `(name, printed fraction %, printed end-to-end speedup)` as published
    /// alongside the times, for comparison with recomputed values.
    pub const PRINTED: [(&str, f64, f64); 27] = [
        ("Convolution", 99.37, 159.41),
        ("Fourier Transform", 97.79, 45.32),
        ("Wiener Filter", 67.51, 3.08),
        ("Self-healing Airy beam", 63.24, 2.72),
        ("Young's Experiment", 61.70, 2.61),
        ("From Poisson Spot to a Non-Diffractive Bessel Beam", 61.33, 2.59),
        ("Generation of a Bessel Beam With a Lens and an Annular Slit", 60.82, 2.55),
        ("Generation of a Bessel Beam With an Axicon", 60.71, 2.55),
        ("Multi- holes and slits", 60.70, 2.55),
        ("Diffraction From a Circular Aperture", 60.65, 2.54),
        ("Shack Hartmann Sensor", 52.88, 2.12),
        ("Spot of Poisson", 48.44, 1.94),
        ("Fresnel Zone Plate", 47.34, 1.90),
        ("Unstable Laser Resonator", 39.43, 1.65),
        ("Interference of a Doughnut Laser Beam: Collinear Beams", 30.54, 1.44),
        ("Michelson Interferometer", 29.45, 1.42),
        ("Phase Recovery", 18.75, 1.23),
        ("Transformation of a Fundamental Gauss Mode into a Doughnut Mode With a Spiral Phase Plate", 18.75, 1.23),
        ("Transformation of High Order Gauss Modes From Hermite to Laguerre", 18.29, 1.22),
        ("Interference of a Doughnut Laser Beam: Tilted Beams", 7.31, 1.08),
        ("Double-Slit Experiment", 55.91, 2.27),
        ("Your First Diffraction Model", 47.80, 1.92),
        ("Image Simulation", 10.95, 1.12),
        ("Convolutional Neural Network Inference", 63.17, 2.71),
        ("Convolutional Neural Network Training", 10.68, 1.12),
        ("Audio Resampling Transforms", 37.94, 1.61),
        ("Pre-Trained Model Wave2Vec2 Speech Recognition Inference", 34.53, 1.53),
    ];

    /// Printed aggregate speedups: mean and median.
    pub const PRINTED_MEAN: f64 = 9.39;
    pub const PRINTED_MEDIAN: f64 = 1.94;

    pub fn profiles() -> Vec<BenchmarkProfile> {
        crate::io::parse_profiles(CSV).expect("bundled table1.csv is valid")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(f: &str, t: f64) -> ProfileRow {
        ProfileRow { function: f.into(), cumulative_s: t }
    }

    #[test]
    fn fourier_transform_row() {
        let p = BenchmarkProfile::full("ft", 0.933, vec![row("fft2", 0.912), row("setup", 0.021)]).unwrap();
        let f = classify_accelerable(&p, &ClassifierConfig::default()).unwrap();
        assert!((f - 0.9775).abs() < 1e-4, "{f}");
    }

    #[test]
    fn none_and_all_match() {
        let cfg = ClassifierConfig::default();
        let p = BenchmarkProfile::full("x", 2.0, vec![row("load", 1.0), row("save", 1.0)]).unwrap();
        assert_eq!(classify_accelerable(&p, &cfg).unwrap(), 0.0);
        let p = BenchmarkProfile::full("x", 2.0, vec![row("numpy.FFT.fft2", 1.0), row("Conv2d", 1.0)]).unwrap();
        assert_eq!(classify_accelerable(&p, &cfg).unwrap(), 1.0);
    }

    #[test]
    fn clamps_overlapping_rows() {
        let p = BenchmarkProfile::full("x", 1.0, vec![row("fft", 0.8), row("ifft", 0.8)]).unwrap();
        assert_eq!(classify_accelerable(&p, &ClassifierConfig::default()).unwrap(), 1.0);
    }

    #[test]
    fn invalid_profiles() {
        assert!(BenchmarkProfile::full("x", 0.0, vec![]).is_err());
        assert!(BenchmarkProfile::reduced("x", 2.0, 1.0).is_err());
        assert!(BenchmarkProfile::full("x", 1.0, vec![row("a", -1.0)]).is_err());
        let bad = BenchmarkProfile { name: "x".into(), total_time_s: -1.0, body: ProfileBody::Full(vec![]) };
        assert!(classify_accelerable(&bad, &ClassifierConfig::default()).is_err());
        let reduced = BenchmarkProfile::reduced("x", 0.5, 1.0).unwrap();
        assert!(classify_accelerable(&reduced, &ClassifierConfig::default()).is_err());
        assert!(ClassifierConfig::new(Vec::<String>::new()).is_err());
        assert!(ClassifierConfig::new([""]).is_err());
    }

    #[test]
    fn speedup_points() {
        let s = amdahl_speedup(0.6751, Ratio::Unbounded).unwrap().finite().unwrap();
        assert!((s - 3.0779).abs() < 1e-4, "{s}");
        assert_eq!(amdahl_speedup(0.0, Ratio::Finite(7.0)).unwrap(), Ratio::Finite(1.0));
        let s = amdahl_speedup(0.5, Ratio::Finite(2.0)).unwrap().finite().unwrap();
        assert!((s - 4.0 / 3.0).abs() < 1e-15);
        assert_eq!(amdahl_speedup(1.0, Ratio::Unbounded).unwrap(), Ratio::Unbounded);
        assert!(amdahl_speedup(1.1, Ratio::Unbounded).is_err());
        assert!(amdahl_speedup(-0.1, Ratio::Unbounded).is_err());
        assert!(amdahl_speedup(0.5, Ratio::Finite(0.5)).is_err());
    }

    fn report(s: f64) -> SpeedupReport {
        SpeedupReport {
            name: String::new(),
            accel_fraction: 0.0,
            acceleration: Ratio::Unbounded,
            speedup: Ratio::Finite(s),
            asymptotic_speedup: Ratio::Finite(s),
        }
    }

    #[test]
    fn aggregate_arithmetic() {
        let a = aggregate(&[report(2.0)]).unwrap();
        assert_eq!((a.mean, a.median), (Ratio::Finite(2.0), Ratio::Finite(2.0)));
        let a = aggregate(&[report(4.0), report(1.0), report(2.0)]).unwrap();
        assert!((a.mean.to_f64() - 7.0 / 3.0).abs() < 1e-15);
        assert_eq!(a.median, Ratio::Finite(2.0));
        assert_eq!((a.min, a.max), (Ratio::Finite(1.0), Ratio::Finite(4.0)));
        let a = aggregate(&[report(1.0), report(3.0)]).unwrap();
        assert_eq!(a.median, Ratio::Finite(2.0));
        assert!(aggregate(&[]).is_err());
    }

    #[test]
    fn aggregate_with_unbounded() {
        let mut r = report(1.0);
        r.speedup = Ratio::Unbounded;
        let a = aggregate(&[report(1.0), report(2.0), r]).unwrap();
        assert_eq!(a.mean, Ratio::Unbounded);
        assert_eq!(a.median, Ratio::Finite(2.0));
        assert_eq!(a.max, Ratio::Unbounded);
    }

    #[test]
    fn table1_names_line_up() {
        let profiles = table1::profiles();
        assert_eq!(profiles.len(), 27);
        for (p, (name, _, _)) in profiles.iter().zip(table1::PRINTED) {
            assert_eq!(p.name, name);
        }
    }
}
