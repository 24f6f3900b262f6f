//! Numerical two-dimensional potential theory.
//!
//! Green and Robin functions of canonical planar domains, logarithmic
//! capacity via Fekete points and equilibrium measures, point-vortex
//! dynamics, Hadamard's variational formula, monopole Green functions and
//! kernels on the sphere and the torus, and the kernel family of the
//! Schottky double of a periodic strip.
//!
//! Green functions use the physics normalization
//! `G(z,a) = (1/2π)(−log|z−a| + H(z,a))`, so that `−ΔG = δ_a`.

// `!(x > 0.0)` also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod elliptic;
pub mod equilibrium;
mod error;
pub mod hadamard;
pub mod numkit;
pub mod planar_green;
pub mod schottky;
pub mod surface;
pub mod vortex;

pub use error::{Error, Result};
pub use num_complex::Complex64;

pub use elliptic::TorusLattice;
pub use equilibrium::{CapacityReport, CompactSet, Pole, WeightedMeasure};
pub use numkit::{Curve, Trajectory};
pub use planar_green::{DomainDescriptor, GreenExpansion};
pub use schottky::{CapacityFunctions, StripDouble};
pub use surface::{PeriodMatrices, SurfaceExpansion, TorusSpec};
pub use vortex::{Vortex, VortexDomain, VortexSystem};

/// Imaginary unit.
pub const I: Complex64 = Complex64::new(0.0, 1.0);

#[inline]
pub(crate) fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}
