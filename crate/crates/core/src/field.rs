//! Exact discrete Fourier machinery on 2D complex grids.
//!
//! The forward transform is the unnormalized sum
//! `X[k,l] = Σ x[m,n] · exp(-2πi (km/R + ln/C))` and the inverse carries the
//! `1/(R·C)` factor, so `inverse(forward(a) ⊙ forward(b))` is exactly the
//! circular convolution of `a` and `b` with no extra scale.
//!
//! [`dft2_naive`] and [`convolve_direct`] are literal-sum reference
//! implementations; the fast path in [`dft2`] and [`convolve_spectral`] is
//! checked against them.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use rustfft::FftPlanner;

use crate::error::{invalid, Result};

/// Row-major 2D grid of complex amplitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexGrid {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Inverse,
}

impl ComplexGrid {
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(invalid(format!("grid dimensions must be positive, got {rows}x{cols}")));
        }
        if data.len() != rows * cols {
            return Err(invalid(format!("grid {rows}x{cols} needs {} values, got {}", rows * cols, data.len())));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Result<Self> {
        Self::new(rows, cols, vec![Complex64::new(0.0, 0.0); rows * cols])
    }

    /// Unit impulse at `(row, col)`.
    pub fn delta(rows: usize, cols: usize, row: usize, col: usize) -> Result<Self> {
        let mut g = Self::zeros(rows, cols)?;
        if row >= rows || col >= cols {
            return Err(invalid(format!("delta position ({row},{col}) outside {rows}x{cols}")));
        }
        g[(row, col)] = Complex64::new(1.0, 0.0);
        Ok(g)
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Result<Self> {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self::new(rows, cols, data)
    }

    pub fn from_real(rows: usize, cols: usize, values: &[f64]) -> Result<Self> {
        Self::new(rows, cols, values.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }

    /// Entries with real and imaginary parts uniform in `[-1, 1)`.
    pub fn random(rows: usize, cols: usize, rng: &mut impl Rng) -> Result<Self> {
        Self::from_fn(rows, cols, |_, _| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
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

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn into_data(self) -> Vec<Complex64> {
        self.data
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&z| f(z)).collect() }
    }

    /// Elementwise (Hadamard) product.
    pub fn hadamard(&self, other: &Self) -> Result<Self> {
        ensure_same_dims(self, other)?;
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a * b).collect(),
        })
    }

    /// `α·self + β·other`.
    pub fn axpby(&self, alpha: Complex64, other: &Self, beta: Complex64) -> Result<Self> {
        ensure_same_dims(self, other)?;
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| alpha * a + beta * b).collect(),
        })
    }

    /// Largest entry magnitude (the ∞-norm).
    pub fn max_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn energy(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }

    /// `‖self − reference‖∞ / ‖reference‖∞`; absolute difference when the
    /// reference is identically zero.
    pub fn rel_error(&self, reference: &Self) -> Result<f64> {
        ensure_same_dims(self, reference)?;
        let diff = self.data.iter().zip(&reference.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        let scale = reference.max_norm();
        Ok(if scale == 0.0 { diff } else { diff / scale })
    }

    /// Swaps the half-planes so the zero-frequency bin sits at
    /// `(rows/2, cols/2)`.
    pub fn fftshift(&self) -> Self {
        let (r0, c0) = (self.rows / 2, self.cols / 2);
        let mut out = self.clone();
        for r in 0..self.rows {
            for c in 0..self.cols {
                out[((r + r0) % self.rows, (c + c0) % self.cols)] = self[(r, c)];
            }
        }
        out
    }

    fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for c in 0..self.cols {
            for r in 0..self.rows {
                data.push(self.data[r * self.cols + c]);
            }
        }
        Self { rows: self.cols, cols: self.rows, data }
    }
}

impl std::ops::Index<(usize, usize)> for ComplexGrid {
    type Output = Complex64;

    fn index(&self, (r, c): (usize, usize)) -> &Complex64 {
        assert!(r < self.rows && c < self.cols, "index ({r},{c}) out of bounds");
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ComplexGrid {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex64 {
        assert!(r < self.rows && c < self.cols, "index ({r},{c}) out of bounds");
        &mut self.data[r * self.cols + c]
    }
}

fn ensure_same_dims(a: &ComplexGrid, b: &ComplexGrid) -> Result<()> {
    if a.dims() != b.dims() {
        return Err(invalid(format!("dimension mismatch: {}x{} vs {}x{}", a.rows, a.cols, b.rows, b.cols)));
    }
    Ok(())
}

fn transform_rows(grid: &mut ComplexGrid, planner: &mut FftPlanner<f64>, direction: Direction) {
    let fft = match direction {
        Direction::Forward => planner.plan_fft_forward(grid.cols),
        Direction::Inverse => planner.plan_fft_inverse(grid.cols),
    };
    // rustfft processes the buffer as consecutive chunks of the plan length.
    fft.process(&mut grid.data);
}

/// Fast 2D DFT for arbitrary sizes (mixed radix / Bluestein under the hood).
pub fn dft2(input: &ComplexGrid, direction: Direction) -> ComplexGrid {
    let mut planner = FftPlanner::new();
    let mut work = input.clone();
    transform_rows(&mut work, &mut planner, direction);
    let mut work = work.transpose();
    transform_rows(&mut work, &mut planner, direction);
    let mut out = work.transpose();
    if direction == Direction::Inverse {
        let scale = 1.0 / (out.rows * out.cols) as f64;
        out.data.iter_mut().for_each(|z| *z *= scale);
    }
    out
}

/// Literal O(R²C²) double-sum DFT with the same normalization as [`dft2`].
///
/// Twiddles are taken from `(k·m mod R)` so the argument stays small and
/// exact for every grid size.
pub fn dft2_naive(input: &ComplexGrid, direction: Direction) -> ComplexGrid {
    let (rows, cols) = input.dims();
    let sign = match direction {
        Direction::Forward => -1.0,
        Direction::Inverse => 1.0,
    };
    let row_tw: Vec<Complex64> =
        (0..rows).map(|j| Complex64::from_polar(1.0, sign * 2.0 * PI * j as f64 / rows as f64)).collect();
    let col_tw: Vec<Complex64> =
        (0..cols).map(|j| Complex64::from_polar(1.0, sign * 2.0 * PI * j as f64 / cols as f64)).collect();
    let scale = match direction {
        Direction::Forward => 1.0,
        Direction::Inverse => 1.0 / (rows * cols) as f64,
    };
    let mut data = Vec::with_capacity(rows * cols);
    for k in 0..rows {
        for l in 0..cols {
            let mut acc = Complex64::new(0.0, 0.0);
            for m in 0..rows {
                let wr = row_tw[(k * m) % rows];
                for n in 0..cols {
                    acc += input.data[m * cols + n] * wr * col_tw[(l * n) % cols];
                }
            }
            data.push(acc * scale);
        }
    }
    ComplexGrid { rows, cols, data }
}

/// Circular convolution by the literal quadruple loop:
/// `out[i,j] = Σ a[m,n] · b[(i−m) mod R, (j−n) mod C]`.
pub fn convolve_direct(a: &ComplexGrid, b: &ComplexGrid) -> Result<ComplexGrid> {
    ensure_same_dims(a, b)?;
    let (rows, cols) = a.dims();
    let mut data = Vec::with_capacity(rows * cols);
    for i in 0..rows {
        for j in 0..cols {
            let mut acc = Complex64::new(0.0, 0.0);
            for m in 0..rows {
                let br = (i + rows - m) % rows;
                for n in 0..cols {
                    let bc = (j + cols - n) % cols;
                    acc += a.data[m * cols + n] * b.data[br * cols + bc];
                }
            }
            data.push(acc);
        }
    }
    Ok(ComplexGrid { rows, cols, data })
}

/// Circular convolution through the convolution theorem.
pub fn convolve_spectral(a: &ComplexGrid, b: &ComplexGrid) -> Result<ComplexGrid> {
    ensure_same_dims(a, b)?;
    let product = dft2(a, Direction::Forward).hadamard(&dft2(b, Direction::Forward))?;
    Ok(dft2(&product, Direction::Inverse))
}

/// Per-axis grid size at which circular convolution of an `m`-long and an
/// `n`-long signal equals their linear convolution: `m + n − 1`.
pub fn linear_conv_size(m: usize, n: usize) -> usize {
    (m + n).saturating_sub(1).max(1)
}

/// Zero-pads `grid` to `rows × cols`, keeping it anchored at the origin.
pub fn zero_pad(grid: &ComplexGrid, rows: usize, cols: usize) -> Result<ComplexGrid> {
    if rows < grid.rows || cols < grid.cols {
        return Err(invalid(format!("cannot pad {}x{} down to {rows}x{cols}", grid.rows, grid.cols)));
    }
    ComplexGrid::from_fn(rows, cols, |r, c| {
        if r < grid.rows && c < grid.cols {
            grid[(r, c)]
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}
