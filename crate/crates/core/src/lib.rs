//! Simulation and analysis toolkit for analog optical Fourier-transform and
//! convolution accelerators.
//!
//! The crate models the accelerator end to end and asks whether offloading
//! pays off once data movement and conversion are counted:
//!
//! - [`field`]: exact 2D DFT and circular convolution, with literal-sum
//!   references.
//! - [`optics`]: SLM phase encoding, far-field (Fraunhofer) propagation, a
//!   Huygens-superposition oracle, and the full optical convolution datapath.
//! - [`costmodel`]: per-stage latency and per-operation energy accounting.
//! - [`pareto`]: converter survey frontiers and energy-per-bit feasibility.
//! - [`amdahl`]: accelerable fractions and end-to-end speedup limits from
//!   profiles, with the bundled 27-application dataset.
//! - [`complexity`]: conversion overhead versus computational complexity.
//! - [`io`]: CSV and config formats.
//! - [`validate`]: seeded brute-force validation suites.

pub mod amdahl;
pub mod complexity;
pub mod costmodel;
pub mod error;
pub mod field;
pub mod io;
pub mod optics;
pub mod pareto;
pub mod ratio;
pub mod validate;

pub use error::{Error, Result};
pub use field::{ComplexGrid, Direction};
pub use ratio::Ratio;
