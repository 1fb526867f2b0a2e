//! Conversion overhead versus computational complexity.
//!
//! Offloading a size-`N` problem converts `C(N)` elements (`2N` by default:
//! inputs plus outputs) and runs `ops(N)` operations in the analog domain.
//! The speedup over running those operations digitally is
//! `ops·t_digital / (C·t_conv + ops·t_analog)`.

use std::str::FromStr;

use serde::Serialize;

use crate::error::{invalid, Result};
use crate::ratio::Ratio;

/// Above this size the exponential class is evaluated in log space.
pub const EXP_LOG_SPACE_ABOVE: u64 = 60;
/// Largest size examined by [`breakeven_size`].
pub const BREAKEVEN_CAP: u64 = 1 << 40;

/// Operation count as a function of problem size.
#[derive(Debug, Clone, PartialEq)]
pub enum ComplexityClass {
    Constant(f64),
    Linear,
    NLogN,
    Quadratic,
    Exponential,
    Tabulated(TabulatedCurve),
}

/// Piecewise-linear user curve through `(N, ops)` points, held flat outside
/// the tabulated range.
#[derive(Debug, Clone, PartialEq)]
pub struct TabulatedCurve {
    label: String,
    points: Vec<(u64, f64)>,
}

impl TabulatedCurve {
    pub fn new(label: impl Into<String>, points: Vec<(u64, f64)>) -> Result<Self> {
        if points.is_empty() {
            return Err(invalid("tabulated curve needs at least one point"));
        }
        for w in points.windows(2) {
            if w[1].0 <= w[0].0 {
                return Err(invalid(format!("tabulated sizes must ascend strictly ({} then {})", w[0].0, w[1].0)));
            }
            if w[1].1 < w[0].1 {
                return Err(invalid(format!("tabulated ops must be nondecreasing at N = {}", w[1].0)));
            }
        }
        if let Some(p) = points.iter().find(|p| !(p.1.is_finite() && p.1 >= 0.0)) {
            return Err(invalid(format!("tabulated ops must be finite and >= 0, got {} at N = {}", p.1, p.0)));
        }
        Ok(Self { label: label.into(), points })
    }

    pub fn points(&self) -> &[(u64, f64)] {
        &self.points
    }

    fn eval(&self, n: u64) -> f64 {
        let pts = &self.points;
        match pts.partition_point(|p| p.0 <= n) {
            0 => pts[0].1,
            i if i == pts.len() => pts[i - 1].1,
            i => {
                let (n0, y0) = pts[i - 1];
                let (n1, y1) = pts[i];
                y0 + (y1 - y0) * (n - n0) as f64 / (n1 - n0) as f64
            }
        }
    }
}

impl ComplexityClass {
    pub fn label(&self) -> String {
        match self {
            Self::Constant(k) => format!("const:{k}"),
            Self::Linear => "N".into(),
            Self::NLogN => "N log2 N".into(),
            Self::Quadratic => "N^2".into(),
            Self::Exponential => "2^N".into(),
            Self::Tabulated(t) => t.label.clone(),
        }
    }

    /// `ops(N)`; overflows to infinity for the exponential class past
    /// N ≈ 1023.
    pub fn ops(&self, n: u64) -> f64 {
        let x = n as f64;
        match self {
            Self::Constant(k) => *k,
            Self::Linear => x,
            Self::NLogN => x * x.log2(),
            Self::Quadratic => x * x,
            Self::Exponential => x.exp2(),
            Self::Tabulated(t) => t.eval(n),
        }
    }

    fn ln_ops(&self, n: u64) -> f64 {
        match self {
            Self::Exponential => n as f64 * std::f64::consts::LN_2,
            other => other.ops(n).ln(),
        }
    }

    fn needs_log_space(&self, n: u64) -> bool {
        matches!(self, Self::Exponential) && n > EXP_LOG_SPACE_ABOVE
    }
}

impl FromStr for ComplexityClass {
    type Err = crate::Error;

    /// `n`, `nlogn`, `n2`, `exp` (or `2^n`), or `const:<k>`.
    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_lowercase();
        match lower.as_str() {
            "n" | "linear" => Ok(Self::Linear),
            "nlogn" | "n-log-n" => Ok(Self::NLogN),
            "n2" | "n^2" | "quadratic" => Ok(Self::Quadratic),
            "exp" | "2^n" | "exponential" => Ok(Self::Exponential),
            other => match other.strip_prefix("const:") {
                Some(k) => {
                    let k: f64 = k.parse().map_err(|_| invalid(format!("bad constant in {s:?}")))?;
                    if !(k.is_finite() && k >= 0.0) {
                        return Err(invalid(format!("constant ops must be >= 0, got {k}")));
                    }
                    Ok(Self::Constant(k))
                }
                None => Err(invalid(format!("unknown complexity class {s:?} (expected n, nlogn, n2, exp, const:<k>)"))),
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CrossoverConfig {
    pub t_conv_s: f64,
    pub t_digital_s: f64,
    pub t_analog_s: f64,
    /// Converted inputs per unit of N.
    pub inputs_per_n: f64,
    /// Converted outputs per unit of N.
    pub outputs_per_n: f64,
}

impl Default for CrossoverConfig {
    fn default() -> Self {
        Self { t_conv_s: 1.0, t_digital_s: 1.0, t_analog_s: 0.0, inputs_per_n: 1.0, outputs_per_n: 1.0 }
    }
}

impl CrossoverConfig {
    pub fn new(t_conv_s: f64, t_digital_s: f64, t_analog_s: f64) -> Result<Self> {
        Self { t_conv_s, t_digital_s, t_analog_s, ..Self::default() }.validated()
    }

    pub fn with_conversion(mut self, inputs_per_n: f64, outputs_per_n: f64) -> Result<Self> {
        self.inputs_per_n = inputs_per_n;
        self.outputs_per_n = outputs_per_n;
        self.validated()
    }

    fn validated(self) -> Result<Self> {
        for (name, v) in [
            ("t_conv", self.t_conv_s),
            ("t_digital", self.t_digital_s),
            ("t_analog", self.t_analog_s),
            ("inputs_per_n", self.inputs_per_n),
            ("outputs_per_n", self.outputs_per_n),
        ] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(invalid(format!("{name} must be finite and >= 0, got {v}")));
            }
        }
        Ok(self)
    }

    pub fn conversion_count(&self, n: u64) -> f64 {
        (self.inputs_per_n + self.outputs_per_n) * n as f64
    }
}

fn check_size(n: u64) -> Result<()> {
    if n == 0 {
        return Err(invalid("problem size must be >= 1"));
    }
    Ok(())
}

/// `ln(exp(a) + exp(b))` tolerant of `-inf` terms.
fn ln_add(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if hi == f64::NEG_INFINITY {
        hi
    } else {
        hi + (lo - hi).exp().ln_1p()
    }
}

/// Natural log of the speedup; `None` when unbounded.
fn ln_speedup(class: &ComplexityClass, cfg: &CrossoverConfig, n: u64) -> Option<f64> {
    let ln_ops = class.ln_ops(n);
    let ln_num = ln_ops + cfg.t_digital_s.ln();
    let ln_den = ln_add((cfg.conversion_count(n) * cfg.t_conv_s).ln(), ln_ops + cfg.t_analog_s.ln());
    if ln_den == f64::NEG_INFINITY {
        None
    } else {
        Some(ln_num - ln_den)
    }
}

/// Offload speedup at size `n`. A zero denominator is [`Ratio::Unbounded`].
///
/// The exponential class switches to log space above
/// [`EXP_LOG_SPACE_ABOVE`]; its value is `+inf` once it leaves the `f64`
/// range, so use [`log10_offload_speedup`] there.
pub fn offload_speedup(class: &ComplexityClass, cfg: &CrossoverConfig, n: u64) -> Result<Ratio> {
    check_size(n)?;
    if class.needs_log_space(n) {
        return Ok(ln_speedup(class, cfg, n).map_or(Ratio::Unbounded, |l| Ratio::Finite(l.exp())));
    }
    let ops = class.ops(n);
    let den = cfg.conversion_count(n) * cfg.t_conv_s + ops * cfg.t_analog_s;
    Ok(Ratio::from_quotient(ops * cfg.t_digital_s, den))
}

/// `log10` of [`offload_speedup`], finite for every class and size;
/// `None` when unbounded, `-inf` when the speedup is zero.
pub fn log10_offload_speedup(class: &ComplexityClass, cfg: &CrossoverConfig, n: u64) -> Result<Option<f64>> {
    check_size(n)?;
    if class.needs_log_space(n) {
        return Ok(ln_speedup(class, cfg, n).map(|l| l / std::f64::consts::LN_10));
    }
    Ok(offload_speedup(class, cfg, n)?.finite().map(f64::log10))
}

fn reaches(class: &ComplexityClass, cfg: &CrossoverConfig, n: u64, target: f64) -> Result<bool> {
    Ok(match offload_speedup(class, cfg, n)? {
        Ratio::Unbounded => true,
        Ratio::Finite(v) if v.is_finite() => v >= target,
        Ratio::Finite(_) => log10_offload_speedup(class, cfg, n)?.is_none_or(|l| l >= target.log10()),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Breakeven {
    At {
        n: u64,
    },
    /// Speedup stays below the target up to [`BREAKEVEN_CAP`].
    NotReached {
        cap: u64,
        log10_speedup_at_cap: Option<f64>,
    },
}

impl Breakeven {
    pub fn size(&self) -> Option<u64> {
        match self {
            Self::At { n } => Some(*n),
            Self::NotReached { .. } => None,
        }
    }
}

/// Smallest `N` whose offload speedup reaches `target`, by galloping over
/// powers of two then bisecting. Exact when the speedup is monotone in `N`.
pub fn breakeven_size(class: &ComplexityClass, cfg: &CrossoverConfig, target: f64) -> Result<Breakeven> {
    if !(target.is_finite() && target > 0.0) {
        return Err(invalid(format!("target speedup must be positive, got {target}")));
    }
    if reaches(class, cfg, 1, target)? {
        return Ok(Breakeven::At { n: 1 });
    }
    let mut lo = 1u64;
    let mut hi = 2u64;
    while !reaches(class, cfg, hi, target)? {
        if hi >= BREAKEVEN_CAP {
            return Ok(Breakeven::NotReached {
                cap: BREAKEVEN_CAP,
                log10_speedup_at_cap: log10_offload_speedup(class, cfg, BREAKEVEN_CAP)?,
            });
        }
        lo = hi;
        hi = (hi * 2).min(BREAKEVEN_CAP);
    }
    // Invariant: lo misses the target, hi reaches it.
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if reaches(class, cfg, mid, target)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(Breakeven::At { n: hi })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurvePoint {
    pub n: u64,
    pub speedup: Ratio,
    /// `None` when unbounded.
    pub log10_speedup: Option<f64>,
}

/// Pointwise [`offload_speedup`] over ascending sizes.
pub fn speedup_curve(class: &ComplexityClass, cfg: &CrossoverConfig, sizes: &[u64]) -> Result<Vec<CurvePoint>> {
    if sizes.is_empty() {
        return Err(invalid("speedup curve needs at least one size"));
    }
    if sizes.windows(2).any(|w| w[1] <= w[0]) {
        return Err(invalid("curve sizes must ascend strictly"));
    }
    sizes
        .iter()
        .map(|&n| {
            Ok(CurvePoint {
                n,
                speedup: offload_speedup(class, cfg, n)?,
                log10_speedup: log10_offload_speedup(class, cfg, n)?,
            })
        })
        .collect()
}

/// Roughly `count` log-spaced integer sizes in `[min, max]`, deduplicated.
pub fn log_spaced_sizes(min: u64, max: u64, count: usize) -> Result<Vec<u64>> {
    if min == 0 || max < min || count == 0 {
        return Err(invalid(format!("bad size range {min}..={max} with {count} points")));
    }
    if count == 1 || min == max {
        return Ok(vec![min]);
    }
    let (a, b) = ((min as f64).ln(), (max as f64).ln());
    let mut out: Vec<u64> = (0..count)
        .map(|i| {
            let t = i as f64 / (count - 1) as f64;
            ((a + t * (b - a)).exp().round() as u64).clamp(min, max)
        })
        .collect();
    out.dedup();
    Ok(out)
}
