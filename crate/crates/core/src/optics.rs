//! Model of the optical datapath: SLM encoding, far-field propagation and
//! camera detection, with fidelity measured against exact convolution.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::field::{convolve_direct, convolve_spectral, dft2, ComplexGrid, Direction};

/// Largest detector extent per axis accepted by [`far_field_oracle`].
pub const ORACLE_MAX_SAMPLES_PER_AXIS: usize = 64;
/// Aperture-element × detector-sample budget of [`far_field_oracle`].
pub const ORACLE_MAX_WORK: usize = 64 * 64 * 64 * 64;
/// Above this many elements the fidelity reference switches from the
/// quadruple-loop convolution to the spectral one.
pub const DIRECT_REFERENCE_MAX_ELEMS: usize = 64 * 64;

/// Row-major grid of real values (SLM drive levels, detector intensities).
#[derive(Debug, Clone, PartialEq)]
pub struct RealGrid {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl RealGrid {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(invalid(format!("grid dimensions must be positive, got {rows}x{cols}")));
        }
        if data.len() != rows * cols {
            return Err(invalid(format!("grid {rows}x{cols} needs {} values, got {}", rows * cols, data.len())));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self::new(rows, cols, data)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.cols + c]
    }

    pub fn to_complex(&self) -> ComplexGrid {
        ComplexGrid::from_real(self.rows, self.cols, &self.data).expect("dims already validated")
    }
}

/// Spatial light modulator geometry and drive resolution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SlmConfig {
    pub pixel_rows: usize,
    pub pixel_cols: usize,
    pub pixel_pitch_m: f64,
    pub bit_depth: u32,
    /// Pixels aggregated per axis into one macro pixel; 1 disables it.
    pub macro_pixel: usize,
}

impl SlmConfig {
    pub fn new(
        pixel_rows: usize,
        pixel_cols: usize,
        pixel_pitch_m: f64,
        bit_depth: u32,
        macro_pixel: usize,
    ) -> Result<Self> {
        if pixel_rows == 0 || pixel_cols == 0 {
            return Err(invalid("SLM pixel counts must be positive"));
        }
        if !(pixel_pitch_m.is_finite() && pixel_pitch_m > 0.0) {
            return Err(invalid(format!("pixel pitch must be positive, got {pixel_pitch_m}")));
        }
        if !(1..=24).contains(&bit_depth) {
            return Err(invalid(format!("bit depth must be in 1..=24, got {bit_depth}")));
        }
        if macro_pixel == 0 || macro_pixel > pixel_rows || macro_pixel > pixel_cols {
            return Err(invalid(format!(
                "macro pixel factor {macro_pixel} does not fit a {pixel_rows}x{pixel_cols} SLM"
            )));
        }
        Ok(Self { pixel_rows, pixel_cols, pixel_pitch_m, bit_depth, macro_pixel })
    }

    pub fn aperture_width_m(&self) -> f64 {
        self.pixel_cols as f64 * self.pixel_pitch_m
    }

    pub fn effective_dims(&self) -> (usize, usize) {
        (self.pixel_rows / self.macro_pixel, self.pixel_cols / self.macro_pixel)
    }

    /// Pitch of one effective (possibly macro) pixel.
    pub fn effective_pitch_m(&self) -> f64 {
        self.pixel_pitch_m * self.macro_pixel as f64
    }

    pub fn phase_levels(&self) -> u32 {
        1 << self.bit_depth
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OpticalSetup {
    pub wavelength_m: f64,
    pub distance_m: f64,
    /// How many times larger `D` must be for "much greater than" to hold.
    pub fraunhofer_margin: f64,
}

impl OpticalSetup {
    pub const DEFAULT_MARGIN: f64 = 10.0;

    pub fn new(wavelength_m: f64, distance_m: f64, fraunhofer_margin: f64) -> Result<Self> {
        if !(wavelength_m.is_finite() && wavelength_m > 0.0) {
            return Err(invalid(format!("wavelength must be positive, got {wavelength_m}")));
        }
        if !(distance_m.is_finite() && distance_m > 0.0) {
            return Err(invalid(format!("propagation distance must be positive, got {distance_m}")));
        }
        if !(fraunhofer_margin.is_finite() && fraunhofer_margin >= 1.0) {
            return Err(invalid(format!("Fraunhofer margin must be >= 1, got {fraunhofer_margin}")));
        }
        Ok(Self { wavelength_m, distance_m, fraunhofer_margin })
    }

    pub fn wavenumber(&self) -> f64 {
        2.0 * PI / self.wavelength_m
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DetectorMode {
    /// The full complex spectrum reaches the digital side.
    IdealComplex,
    /// Only `|C|` is recorded.
    Magnitude,
    /// `|C|²` is recorded and square-rooted after digitization.
    Intensity,
}

/// How a drive value in `[0, 1]` becomes an optical field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Encoding {
    /// Value becomes the (real) field amplitude, unquantized.
    Amplitude,
    /// Value becomes the quantized phase of a unit-amplitude field.
    Phase,
}

/// Averages non-overlapping `m × m` blocks; trailing rows/columns that do
/// not fill a block are dropped.
pub fn macro_average(values: &RealGrid, m: usize) -> Result<RealGrid> {
    if m == 0 {
        return Err(invalid("macro pixel factor must be >= 1"));
    }
    let (rows, cols) = (values.rows / m, values.cols / m);
    if rows == 0 || cols == 0 {
        return Err(invalid(format!("macro pixel factor {m} larger than {}x{} grid", values.rows, values.cols)));
    }
    let norm = 1.0 / (m * m) as f64;
    RealGrid::from_fn(rows, cols, |r, c| {
        let mut acc = 0.0;
        for dr in 0..m {
            for dc in 0..m {
                acc += values.get(r * m + dr, c * m + dc);
            }
        }
        acc * norm
    })
}

/// Quantizes `v ∈ [0, 1]` to one of `levels` phase steps; 1.0 lands on the
/// top step `(levels−1)/levels` rather than wrapping to 0.
pub fn quantize(v: f64, levels: u32) -> f64 {
    let top = levels - 1;
    let step = ((v * levels as f64).floor() as u32).min(top);
    step as f64 / levels as f64
}

fn check_drive(values: &RealGrid, slm: &SlmConfig) -> Result<()> {
    if values.dims() != (slm.pixel_rows, slm.pixel_cols) {
        return Err(invalid(format!(
            "drive grid {}x{} does not match SLM {}x{}",
            values.rows, values.cols, slm.pixel_rows, slm.pixel_cols
        )));
    }
    if let Some(bad) = values.data.iter().find(|v| !(0.0..=1.0).contains(*v)) {
        return Err(invalid(format!("drive value {bad} outside [0, 1]")));
    }
    Ok(())
}

/// Unit-amplitude field `exp(i·2π·q)` from quantized, macro-averaged drive
/// values.
pub fn encode_phase(values: &RealGrid, slm: &SlmConfig) -> Result<ComplexGrid> {
    check_drive(values, slm)?;
    let avg = macro_average(values, slm.macro_pixel)?;
    let levels = slm.phase_levels();
    ComplexGrid::new(
        avg.rows,
        avg.cols,
        avg.data.iter().map(|&v| Complex64::from_polar(1.0, 2.0 * PI * quantize(v, levels))).collect(),
    )
}

/// Real field whose amplitude is the macro-averaged drive value.
pub fn encode_amplitude(values: &RealGrid, slm: &SlmConfig) -> Result<ComplexGrid> {
    check_drive(values, slm)?;
    Ok(macro_average(values, slm.macro_pixel)?.to_complex())
}

pub fn encode(values: &RealGrid, slm: &SlmConfig, encoding: Encoding) -> Result<ComplexGrid> {
    match encoding {
        Encoding::Amplitude => encode_amplitude(values, slm),
        Encoding::Phase => encode_phase(values, slm),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FraunhoferCheck {
    pub valid: bool,
    /// `D / a`
    pub margin_a: f64,
    /// `D / (a² / λ)`
    pub margin_a2_over_lambda: f64,
}

/// Far-field test `D ≥ margin·a` and `D ≥ margin·a²/λ`.
pub fn fraunhofer_ok(setup: &OpticalSetup, slm: &SlmConfig) -> FraunhoferCheck {
    let a = slm.aperture_width_m();
    let d = setup.distance_m;
    let margin_a = d / a;
    let margin_a2_over_lambda = d / (a * a / setup.wavelength_m);
    FraunhoferCheck {
        valid: margin_a >= setup.fraunhofer_margin && margin_a2_over_lambda >= setup.fraunhofer_margin,
        margin_a,
        margin_a2_over_lambda,
    }
}

/// Detector coordinate of sample `j` out of `count`: the window spans one
/// full diffraction period `λD/p`, centred on the optical axis, so that with
/// `count` equal to the aperture size sample `j` sits on spatial frequency
/// `j − count/2` of the DFT.
fn detector_coord(j: usize, count: usize, setup: &OpticalSetup, pitch: f64) -> f64 {
    let span = setup.wavelength_m * setup.distance_m / pitch;
    (j as f64 - (count / 2) as f64) * span / count as f64
}

fn aperture_coord(n: usize, count: usize, pitch: f64) -> f64 {
    (n as f64 - (count / 2) as f64) * pitch
}

/// Brute-force Huygens superposition: every aperture element emits a wavelet
/// `exp(i·k·r)/r` and the detector records `|Σ|²` at each sample point.
///
/// Cost is aperture elements × detector samples, so requests beyond
/// [`ORACLE_MAX_SAMPLES_PER_AXIS`] per axis or [`ORACLE_MAX_WORK`] total are
/// refused.
pub fn far_field_oracle(
    aperture: &ComplexGrid,
    setup: &OpticalSetup,
    slm: &SlmConfig,
    detector_samples: (usize, usize),
) -> Result<RealGrid> {
    let (det_rows, det_cols) = detector_samples;
    if det_rows == 0 || det_cols == 0 {
        return Err(invalid("detector sample counts must be positive"));
    }
    if aperture.dims() != slm.effective_dims() {
        return Err(invalid(format!(
            "aperture {}x{} does not match SLM effective grid {:?}",
            aperture.rows(),
            aperture.cols(),
            slm.effective_dims()
        )));
    }
    let elems = aperture.rows() * aperture.cols();
    let samples = det_rows * det_cols;
    if det_rows > ORACLE_MAX_SAMPLES_PER_AXIS
        || det_cols > ORACLE_MAX_SAMPLES_PER_AXIS
        || elems.saturating_mul(samples) > ORACLE_MAX_WORK
    {
        return Err(Error::CostGuard { aperture: elems, samples });
    }

    let pitch = slm.effective_pitch_m();
    let k = setup.wavenumber();
    let d = setup.distance_m;
    let xs: Vec<f64> = (0..aperture.cols()).map(|n| aperture_coord(n, aperture.cols(), pitch)).collect();
    let ys: Vec<f64> = (0..aperture.rows()).map(|m| aperture_coord(m, aperture.rows(), pitch)).collect();
    let open: Vec<(f64, f64, Complex64)> = (0..aperture.rows())
        .flat_map(|m| (0..aperture.cols()).map(move |n| (m, n)))
        .filter(|&(m, n)| aperture[(m, n)] != Complex64::new(0.0, 0.0))
        .map(|(m, n)| (ys[m], xs[n], aperture[(m, n)]))
        .collect();

    RealGrid::from_fn(det_rows, det_cols, |i, j| {
        let v = detector_coord(i, det_rows, setup, pitch);
        let u = detector_coord(j, det_cols, setup, pitch);
        let mut acc = Complex64::new(0.0, 0.0);
        for &(y, x, amp) in &open {
            let rho2 = (u - x).powi(2) + (v - y).powi(2);
            let r = (d * d + rho2).sqrt();
            // k·(r − D) without cancellation; the common k·D phase drops out
            // of the intensity.
            let excess = rho2 / (r + d);
            acc += amp * Complex64::from_polar(1.0 / r, k * excess);
        }
        acc.norm_sqr()
    })
}

/// `|dft2(aperture)|²` with the zero frequency moved to the centre, laid out
/// on the same sample points as [`far_field_oracle`] with a detector equal
/// in size to the aperture.
pub fn fraunhofer_intensity(aperture: &ComplexGrid) -> RealGrid {
    let spectrum = dft2(aperture, Direction::Forward).fftshift();
    RealGrid::new(spectrum.rows(), spectrum.cols(), spectrum.data().iter().map(|z| z.norm_sqr()).collect())
        .expect("dims already validated")
}

/// `|⟨x, y⟩| / (‖x‖·‖y‖)`, 1 when both grids are zero and 0 when only one is.
pub fn fidelity(result: &ComplexGrid, reference: &ComplexGrid) -> Result<f64> {
    if result.dims() != reference.dims() {
        return Err(invalid("fidelity needs grids of equal dimensions"));
    }
    let (er, eg) = (result.energy(), reference.energy());
    if er == 0.0 && eg == 0.0 {
        return Ok(1.0);
    }
    if er == 0.0 || eg == 0.0 {
        return Ok(0.0);
    }
    let inner: Complex64 = result.data().iter().zip(reference.data()).map(|(a, b)| a * b.conj()).sum();
    Ok((inner.norm() / (er.sqrt() * eg.sqrt())).min(1.0))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Simulation {
    pub result: ComplexGrid,
    pub reference: ComplexGrid,
    pub fidelity: f64,
}

/// Encodes both operands, multiplies their spectra (the camera plane),
/// applies the detector, and inverts digitally.
///
/// The reference is [`convolve_direct`] of the encoded fields, or
/// [`convolve_spectral`] above [`DIRECT_REFERENCE_MAX_ELEMS`] elements.
pub fn simulate_4f_convolution(
    a_values: &RealGrid,
    b_values: &RealGrid,
    slm: &SlmConfig,
    encoding: Encoding,
    mode: DetectorMode,
) -> Result<Simulation> {
    if a_values.dims() != b_values.dims() {
        return Err(invalid(format!("operand dimension mismatch: {:?} vs {:?}", a_values.dims(), b_values.dims())));
    }
    let a = encode(a_values, slm, encoding)?;
    let b = encode(b_values, slm, encoding)?;
    let camera = dft2(&a, Direction::Forward).hadamard(&dft2(&b, Direction::Forward))?;
    let detected = detect(&camera, mode);
    let result = dft2(&detected, Direction::Inverse);
    let reference = if a.rows() * a.cols() <= DIRECT_REFERENCE_MAX_ELEMS {
        convolve_direct(&a, &b)?
    } else {
        convolve_spectral(&a, &b)?
    };
    let fidelity = fidelity(&result, &reference)?;
    Ok(Simulation { result, reference, fidelity })
}

pub fn detect(camera: &ComplexGrid, mode: DetectorMode) -> ComplexGrid {
    match mode {
        DetectorMode::IdealComplex => camera.clone(),
        DetectorMode::Magnitude => camera.map(|z| Complex64::new(z.norm(), 0.0)),
        DetectorMode::Intensity => camera.map(|z| Complex64::new(z.norm_sqr().sqrt(), 0.0)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn slm(rows: usize, cols: usize, bits: u32, m: usize) -> SlmConfig {
        SlmConfig::new(rows, cols, 15e-6, bits, m).unwrap()
    }

    #[test]
    fn zero_value_is_zero_phase() {
        let s = slm(2, 2, 8, 1);
        let v = RealGrid::new(2, 2, vec![0.0; 4]).unwrap();
        let f = encode_phase(&v, &s).unwrap();
        for z in f.data() {
            assert!((z - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn full_scale_never_reaches_two_pi() {
        let s = slm(1, 1, 8, 1);
        let v = RealGrid::new(1, 1, vec![1.0]).unwrap();
        let f = encode_phase(&v, &s).unwrap();
        let want = 2.0 * PI * 255.0 / 256.0;
        let got = f.data()[0].arg().rem_euclid(2.0 * PI);
        assert!((got - want).abs() < 1e-12, "{got} vs {want}");
    }

    #[test]
    fn macro_pixels_average_blocks() {
        let s = slm(6, 6, 8, 3);
        let v = RealGrid::from_fn(6, 6, |r, c| if r < 3 && c >= 3 { 0.5 } else { 0.0 }).unwrap();
        let avg = macro_average(&v, 3).unwrap();
        assert_eq!(avg.dims(), (2, 2));
        assert_eq!(avg.data(), &[0.0, 0.5, 0.0, 0.0]);
        let f = encode_phase(&v, &s).unwrap();
        assert_eq!(f.dims(), (2, 2));
        assert!((f[(0, 1)] - Complex64::new(-1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn macro_pixels_drop_ragged_edges() {
        let v = RealGrid::new(7, 8, vec![0.25; 56]).unwrap();
        assert_eq!(macro_average(&v, 3).unwrap().dims(), (2, 2));
    }

    #[test]
    fn drive_validation() {
        let s = slm(2, 2, 8, 1);
        assert!(encode_phase(&RealGrid::new(2, 2, vec![0.0, 1.2, 0.0, 0.0]).unwrap(), &s).is_err());
        assert!(encode_phase(&RealGrid::new(2, 2, vec![0.0, f64::NAN, 0.0, 0.0]).unwrap(), &s).is_err());
        assert!(encode_phase(&RealGrid::new(1, 4, vec![0.0; 4]).unwrap(), &s).is_err());
        assert!(SlmConfig::new(4, 4, 15e-6, 8, 5).is_err());
        assert!(SlmConfig::new(4, 4, 0.0, 8, 1).is_err());
        assert!(OpticalSetup::new(632.8e-9, 1.0, 0.5).is_err());
    }

    #[test]
    fn fraunhofer_prototype_geometry_is_near_field() {
        let s = SlmConfig::new(768, 1024, 15e-6, 8, 1).unwrap();
        let setup = OpticalSetup::new(632.8e-9, 1.0, 10.0).unwrap();
        let chk = fraunhofer_ok(&setup, &s);
        // a²/λ = 0.01536² / 632.8e-9 = 372.83 m
        assert!((1.0 / chk.margin_a2_over_lambda - 372.83).abs() < 0.01);
        assert!(!chk.valid);
    }

    #[test]
    fn fraunhofer_small_aperture_far_away() {
        // a = 1 mm as 100 px x 10 µm; a²/λ = 1.5803 m
        let s = SlmConfig::new(100, 100, 10e-6, 8, 1).unwrap();
        let setup = OpticalSetup::new(632.8e-9, 100.0, 10.0).unwrap();
        let chk = fraunhofer_ok(&setup, &s);
        assert!(chk.valid);
        assert!((chk.margin_a - 1e5).abs() < 1e-6);
        assert!((100.0 / chk.margin_a2_over_lambda - 1.5803).abs() < 1e-4);
    }

    #[test]
    fn oracle_cost_guard() {
        let s = slm(4, 4, 8, 1);
        let setup = OpticalSetup::new(632.8e-9, 10.0, 10.0).unwrap();
        let ap = ComplexGrid::zeros(4, 4).unwrap();
        assert!(matches!(far_field_oracle(&ap, &setup, &s, (65, 8)), Err(Error::CostGuard { .. })));
        assert!(far_field_oracle(&ap, &setup, &s, (0, 8)).is_err());
        let big = slm(128, 128, 8, 1);
        let ap = ComplexGrid::zeros(128, 128).unwrap();
        assert!(matches!(far_field_oracle(&ap, &setup, &big, (64, 64)), Err(Error::CostGuard { .. })));
    }

    #[test]
    fn detector_modes_agree_without_noise() {
        let cam = ComplexGrid::new(1, 2, vec![Complex64::new(3.0, 4.0), Complex64::new(0.0, -2.0)]).unwrap();
        let m = detect(&cam, DetectorMode::Magnitude);
        let i = detect(&cam, DetectorMode::Intensity);
        assert!(m.rel_error(&i).unwrap() < 1e-15);
        assert_eq!(m.data()[0], Complex64::new(5.0, 0.0));
    }

    #[test]
    fn fidelity_edge_cases() {
        let z = ComplexGrid::zeros(2, 2).unwrap();
        let d = ComplexGrid::delta(2, 2, 0, 0).unwrap();
        assert_eq!(fidelity(&z, &z).unwrap(), 1.0);
        assert_eq!(fidelity(&z, &d).unwrap(), 0.0);
        let scaled = d.map(|x| x * Complex64::new(0.0, 3.0));
        assert!((fidelity(&scaled, &d).unwrap() - 1.0).abs() < 1e-15);
    }
}
