//! Hadamard's variational formula for the disk: finite differences of the
//! Green and Robin functions under boundary perturbations, compared with
//! boundary quadratures, and the triple normal-derivative integral.
//!
//! Perturbed disks come from exact families where available (dilation,
//! translation). Any other normal speed `δn` is realized by the map
//! `f(w) = R w exp(ε H(w)/R)` of the unit disk, with `H` the Herglotz
//! transform of `δn`, whose image has boundary `r(θ) = R + ε δn(θ) + O(ε²)`.
//! Left-hand sides are central differences in `ε` by default (`O(ε²)`
//! error); [`Difference::Forward`] gives the one-sided quotient with an
//! `O(ε)` error.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;

use crate::planar_green::DomainDescriptor;
use crate::{c, Error, Result, I};

/// Number of samples used to expand a general normal speed.
const FOURIER_NODES: usize = 256;

/// Normal speed `δn(θ)` on the circle `R e^{iθ}`.
#[derive(Clone)]
pub enum NormalSpeed {
    /// `δn ≡ 1`
    Dilation,
    /// `δn = cos θ`
    Translation,
    General(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

impl std::fmt::Debug for NormalSpeed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Dilation => f.write_str("Dilation"),
            Self::Translation => f.write_str("Translation"),
            Self::General(_) => f.write_str("General(..)"),
        }
    }
}

impl NormalSpeed {
    pub fn general<F: Fn(f64) -> f64 + Send + Sync + 'static>(f: F) -> Self {
        Self::General(Arc::new(f))
    }

    /// `α cos kθ + β sin kθ`.
    pub fn fourier(k: u32, alpha: f64, beta: f64) -> Self {
        Self::general(move |t| alpha * (k as f64 * t).cos() + beta * (k as f64 * t).sin())
    }

    /// Hele-Shaw speed `−∂G(·,c)/∂n` on the disk of radius `r`.
    pub fn hele_shaw(c0: Complex64, r: f64) -> Self {
        Self::general(move |t| -outward_normal_derivative(r, r * (I * t).exp(), c0))
    }

    pub fn eval(&self, theta: f64) -> f64 {
        match self {
            Self::Dilation => 1.0,
            Self::Translation => theta.cos(),
            Self::General(f) => f(theta),
        }
    }
}

/// Difference quotient used for the left-hand sides.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Difference {
    /// `[F(ε) − F(0)]/ε`
    Forward,
    /// `[F(ε) − F(−ε)]/(2ε)`
    #[default]
    Central,
}

/// Perturbation `R e^{iθ} ↦ R e^{iθ} + ε δn(θ) n` of a disk.
#[derive(Debug, Clone)]
pub struct BoundaryVariation {
    pub base: DomainDescriptor,
    pub speed: NormalSpeed,
    pub epsilon: f64,
    pub difference: Difference,
}

/// Outward normal derivative of the disk Green function at boundary point `z`.
pub fn outward_normal_derivative(r: f64, z: Complex64, a: Complex64) -> f64 {
    -(r * r - a.norm_sqr()) / (2.0 * PI * r * (z - a).norm_sqr())
}

fn disk_green(r: f64, z: Complex64, a: Complex64) -> f64 {
    -((r * (z - a)) / (r * r - z * a.conj())).norm().ln() / (2.0 * PI)
}

fn disk_h0(r: f64, a: Complex64) -> f64 {
    ((r * r - a.norm_sqr()) / r).ln()
}

/// Herglotz transform `H(w) = c₀ + 2Σ c_k w^k` of sampled boundary data.
struct Herglotz {
    coef: Vec<(usize, Complex64)>,
}

impl Herglotz {
    fn new(speed: &NormalSpeed) -> Self {
        let m = FOURIER_NODES;
        let samples: Vec<f64> = (0..m).map(|j| speed.eval(2.0 * PI * j as f64 / m as f64)).collect();
        let mut coef = Vec::new();
        for k in 0..m / 2 {
            let ck: Complex64 = samples
                .iter()
                .enumerate()
                .map(|(j, s)| s * (-I * (2.0 * PI * (k * j) as f64 / m as f64)).exp())
                .sum::<Complex64>()
                / m as f64;
            if ck.norm() > 1e-16 {
                coef.push((k, if k == 0 { ck } else { 2.0 * ck }));
            }
        }
        Self { coef }
    }

    fn eval(&self, w: Complex64) -> (Complex64, Complex64) {
        let mut h = c(0.0, 0.0);
        let mut dh = c(0.0, 0.0);
        for &(k, ck) in &self.coef {
            h += ck * w.powu(k as u32);
            if k > 0 {
                dh += ck * k as f64 * w.powu(k as u32 - 1);
            }
        }
        (h, dh)
    }
}

/// Realized perturbed disk.
enum Perturbed {
    Disk { r: f64, center: Complex64 },
    Mapped { r: f64, eps: f64, herglotz: Herglotz },
}

impl Perturbed {
    fn map(&self, w: Complex64) -> (Complex64, Complex64) {
        match self {
            Self::Disk { r, center } => (center + r * w, c(*r, 0.0)),
            Self::Mapped { r, eps, herglotz } => {
                let (h, dh) = herglotz.eval(w);
                let e = (eps * h / r).exp();
                (r * w * e, r * e * (1.0 + eps * w * dh / r))
            }
        }
    }

    /// Preimage in the unit disk.
    fn inverse(&self, z: Complex64) -> Result<Complex64> {
        let (r, center) = match self {
            Self::Disk { r, center } => return Ok((z - center) / *r),
            Self::Mapped { r, .. } => (*r, c(0.0, 0.0)),
        };
        let mut w = (z - center) / r;
        for _ in 0..50 {
            let (f, df) = self.map(w);
            let step = (f - z) / df;
            w -= step;
            if step.norm() < 1e-15 {
                break;
            }
        }
        if (self.map(w).0 - z).norm() > 1e-12 * r || w.norm() >= 1.0 {
            return Err(Error::Domain { z, reason: "not inside the perturbed disk".into() });
        }
        Ok(w)
    }

    fn green(&self, a: Complex64, b: Complex64) -> Result<f64> {
        Ok(disk_green(1.0, self.inverse(a)?, self.inverse(b)?))
    }

    /// `h0_Ω(f(w)) = h0_D(w) + log|f'(w)|`.
    fn h0(&self, a: Complex64) -> Result<f64> {
        let w = self.inverse(a)?;
        Ok(disk_h0(1.0, w) + self.map(w).1.norm().ln())
    }
}

impl BoundaryVariation {
    pub fn new(base: DomainDescriptor, speed: NormalSpeed, epsilon: f64) -> Result<Self> {
        let v = Self { base, speed, epsilon, difference: Difference::Central };
        v.radius()?;
        Ok(v)
    }

    pub fn with_difference(mut self, difference: Difference) -> Self {
        self.difference = difference;
        self
    }

    fn radius(&self) -> Result<f64> {
        let r = match self.base {
            DomainDescriptor::Disk { r } if r > 0.0 && r.is_finite() => r,
            ref d => return Err(Error::Unsupported(format!("Hadamard variation of {d:?}"))),
        };
        let peak = (0..FOURIER_NODES)
            .map(|j| self.speed.eval(2.0 * PI * j as f64 / FOURIER_NODES as f64).abs())
            .fold(0.0, f64::max);
        if !peak.is_finite() || self.epsilon.abs() * peak > r / 10.0 {
            return Err(Error::Parameter(format!("|ε|·max|δn| = {} exceeds R/10", self.epsilon.abs() * peak)));
        }
        Ok(r)
    }

    fn perturbed(&self, eps: f64) -> Result<Perturbed> {
        let r = self.radius()?;
        Ok(match self.speed {
            NormalSpeed::Dilation => Perturbed::Disk { r: r + eps, center: c(0.0, 0.0) },
            NormalSpeed::Translation => Perturbed::Disk { r, center: c(eps, 0.0) },
            NormalSpeed::General(_) => Perturbed::Mapped { r, eps, herglotz: Herglotz::new(&self.speed) },
        })
    }

    /// Difference quotient of `F(domain)` across the variation.
    fn quotient<F: Fn(&Perturbed) -> Result<f64>>(&self, f: F, base: f64) -> Result<f64> {
        let eps = self.epsilon;
        match self.difference {
            Difference::Forward => Ok((f(&self.perturbed(eps)?)? - base) / eps),
            Difference::Central => Ok((f(&self.perturbed(eps)?)? - f(&self.perturbed(-eps)?)?) / (2.0 * eps)),
        }
    }
}

/// Trapezoid sum of `F(θ)·ds` over the circle of radius `r`.
fn boundary_sum<F: Fn(Complex64, f64) -> f64>(r: f64, n: usize, f: F) -> f64 {
    let ds = 2.0 * PI * r / n as f64;
    (0..n)
        .map(|j| {
            let t = 2.0 * PI * j as f64 / n as f64;
            f(r * (I * t).exp(), t)
        })
        .sum::<f64>()
        * ds
}

/// Check `∮ −∂G(·,a)/∂n ds = 1` with the given quadrature.
fn assert_unit_flux(r: f64, a: Complex64, n: usize) -> Result<()> {
    if a.norm() >= r {
        return Err(Error::Domain { z: a, reason: "not interior to the disk".into() });
    }
    let flux = -boundary_sum(r, n, |z, _| outward_normal_derivative(r, z, a));
    if (flux - 1.0).abs() > 1e-8 {
        return Err(Error::Normalization(format!("boundary flux {flux} at {a} with n = {n}")));
    }
    Ok(())
}

/// First variation of `G(a,b)`: difference quotient against
/// `∮ ∂G(·,a)/∂n ∂G(·,b)/∂n δn ds`.
pub fn hadamard_delta_green(var: &BoundaryVariation, a: Complex64, b: Complex64, n: usize) -> Result<(f64, f64)> {
    let r = var.radius()?;
    if (a - b).norm() == 0.0 {
        return Err(Error::Pole { z: a });
    }
    assert_unit_flux(r, a, n)?;
    assert_unit_flux(r, b, n)?;
    let rhs = boundary_sum(r, n, |z, t| {
        outward_normal_derivative(r, z, a) * outward_normal_derivative(r, z, b) * var.speed.eval(t)
    });
    let lhs = var.quotient(|p| p.green(a, b), disk_green(r, a, b))?;
    Ok((lhs, rhs))
}

/// First variation of the Robin function: difference quotient against
/// `2π ∮ (∂G(·,a)/∂n)² δn ds`.
pub fn hadamard_delta_h0(var: &BoundaryVariation, a: Complex64, n: usize) -> Result<(f64, f64)> {
    let r = var.radius()?;
    assert_unit_flux(r, a, n)?;
    let rhs = 2.0 * PI * boundary_sum(r, n, |z, t| outward_normal_derivative(r, z, a).powi(2) * var.speed.eval(t));
    let lhs = var.quotient(|p| p.h0(a), disk_h0(r, a))?;
    Ok((lhs, rhs))
}

/// `∮ ∂G(·,a)/∂n ∂G(·,b)/∂n ∂G(·,c)/∂n ds` on the unit disk (outward normals).
pub fn triple_green(a: Complex64, b: Complex64, c0: Complex64, n: usize) -> Result<f64> {
    for p in [a, b, c0] {
        assert_unit_flux(1.0, p, n)?;
    }
    Ok(boundary_sum(1.0, n, |z, _| {
        outward_normal_derivative(1.0, z, a)
            * outward_normal_derivative(1.0, z, b)
            * outward_normal_derivative(1.0, z, c0)
    }))
}
