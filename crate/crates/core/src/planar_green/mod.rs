//! Green functions, Robin data, Poisson kernel, conformal transport and the
//! disk Bergman kernel for the canonical planar domains.

mod fd;

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::numkit::{contour_integral, gauss_legendre, laplacian_richardson, Curve, Quadrature};
use crate::{c, schottky, Error, Result, I};

pub use fd::{fd_dirichlet_green, GriddedGreen, RectGrid, RectangleSolver};

/// A canonical planar domain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum DomainDescriptor {
    /// `|z| < R`
    Disk {
        #[serde(rename = "R")]
        r: f64,
    },
    /// `Im z > 0`
    HalfPlane,
    /// `C ∖ [0, ∞)`
    SlitPlane,
    /// `(0,w)×(0,h)`, discretized with `grid` cells across the width.
    Rectangle { w: f64, h: f64, grid: usize },
    /// `−½ < Re z < 0` with `y` taken modulo `Im τ`.
    PeriodicStrip { tau: Complex64 },
}

impl DomainDescriptor {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Self::Disk { r } if !(r > 0.0 && r.is_finite()) => Err(Error::Parameter(format!("disk radius {r}"))),
            Self::Rectangle { w, h, grid } => RectGrid::new(w, h, grid).map(|_| ()),
            Self::PeriodicStrip { tau } if !(tau.re == 0.0 && tau.im > 0.0) => {
                Err(Error::Parameter(format!("strip modulus must be purely imaginary, got {tau}")))
            }
            _ => Ok(()),
        }
    }

    /// Euclidean distance from `z` to the boundary (negative outside).
    pub fn boundary_distance(&self, z: Complex64) -> f64 {
        match *self {
            Self::Disk { r } => r - z.norm(),
            Self::HalfPlane => z.im,
            Self::SlitPlane => {
                if z.re <= 0.0 {
                    z.norm()
                } else {
                    z.im.abs()
                }
            }
            Self::Rectangle { w, h, .. } => z.re.min(w - z.re).min(z.im).min(h - z.im),
            Self::PeriodicStrip { .. } => (-z.re).min(z.re + 0.5),
        }
    }

    /// Open-set membership.
    pub fn contains(&self, z: Complex64) -> bool {
        z.re.is_finite() && z.im.is_finite() && self.boundary_distance(z) > 0.0
    }

    /// Membership in the closure, with a small tolerance.
    pub fn contains_closed(&self, z: Complex64) -> bool {
        z.re.is_finite() && z.im.is_finite() && self.boundary_distance(z) >= -1e-12
    }

    pub fn is_convex(&self) -> bool {
        matches!(self, Self::Disk { .. } | Self::HalfPlane | Self::Rectangle { .. })
    }

    pub fn is_simply_connected(&self) -> bool {
        !matches!(self, Self::PeriodicStrip { .. })
    }
}

/// Local data of the regular part at a point:
/// `H(z,a) = h0(a) + 2 Re(h1(a)(z−a)) + …`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GreenExpansion {
    /// Robin function value `H(a,a)`.
    pub h0: f64,
    /// `∂h0/∂a`.
    pub h1: Complex64,
    /// Gaussian curvature of `e^{−h0}|dz|`.
    pub curvature: f64,
}

fn require_interior(domain: &DomainDescriptor, z: Complex64) -> Result<()> {
    if domain.contains(z) {
        Ok(())
    } else {
        Err(Error::Domain { z, reason: format!("not interior to {domain:?}") })
    }
}

/// Upper-half-plane coordinate of the slit plane: `w² = z`, `Im w > 0`.
fn slit_to_half_plane(z: Complex64) -> Complex64 {
    I * (-z).sqrt()
}

/// Dirichlet Green function `G(z,a)`, normalized so that `−ΔG = δ_a`.
///
/// `z` may lie on the boundary (the value is then 0 up to rounding);
/// `a` must be interior.
pub fn green(domain: &DomainDescriptor, z: Complex64, a: Complex64) -> Result<f64> {
    domain.validate()?;
    require_interior(domain, a)?;
    if !domain.contains_closed(z) {
        return Err(Error::Domain { z, reason: "outside the domain".into() });
    }
    if (z - a).norm() == 0.0 {
        return Err(Error::Pole { z });
    }
    let two_pi = 2.0 * PI;
    match *domain {
        DomainDescriptor::Disk { r } => Ok(-((r * (z - a)) / (r * r - z * a.conj())).norm().ln() / two_pi),
        DomainDescriptor::HalfPlane => Ok(-((z - a) / (z - a.conj())).norm().ln() / two_pi),
        DomainDescriptor::SlitPlane => {
            let (wz, wa) = (slit_to_half_plane(z), slit_to_half_plane(a));
            Ok(-((wz - wa) / (wz - wa.conj())).norm().ln() / two_pi)
        }
        DomainDescriptor::Rectangle { w, h, grid } => {
            let g = fd_dirichlet_green(w, h, grid, a)?;
            Ok(g.interpolate(z))
        }
        DomainDescriptor::PeriodicStrip { tau } => {
            let dbl = schottky::StripDouble::new(tau, 0.0)?;
            schottky::g_electro_strip(z, a, &dbl)
        }
    }
}

/// `∂G(z,a)/∂z` in closed form (disk, half-plane, slit plane).
pub fn green_dz(domain: &DomainDescriptor, z: Complex64, a: Complex64) -> Result<Complex64> {
    let k = -1.0 / (4.0 * PI);
    match *domain {
        DomainDescriptor::Disk { r } => Ok(k * (r * r - a.norm_sqr()) / ((z - a) * (r * r - z * a.conj()))),
        DomainDescriptor::HalfPlane => Ok(k * (1.0 / (z - a) - 1.0 / (z - a.conj()))),
        DomainDescriptor::SlitPlane => {
            let (wz, wa) = (slit_to_half_plane(z), slit_to_half_plane(a));
            // chain rule through w = √z, dw/dz = 1/(2w)
            Ok(k * (1.0 / (wz - wa) - 1.0 / (wz - wa.conj())) / (2.0 * wz))
        }
        _ => Err(Error::Unsupported(format!("closed-form ∂G/∂z for {domain:?}"))),
    }
}

/// Robin data `h0`, `h1` and curvature at an interior point.
pub fn robin_data(domain: &DomainDescriptor, a: Complex64) -> Result<GreenExpansion> {
    domain.validate()?;
    require_interior(domain, a)?;
    if domain.boundary_distance(a) < 1e-9 {
        return Err(Error::Conditioning(format!("{a} within 1e-9 of the boundary")));
    }
    match *domain {
        DomainDescriptor::Disk { r } => {
            let d = r * r - a.norm_sqr();
            Ok(GreenExpansion { h0: (d / r).ln(), h1: -a.conj() / d, curvature: -4.0 })
        }
        DomainDescriptor::HalfPlane => Ok(half_plane_expansion(a)),
        DomainDescriptor::SlitPlane => {
            let w = slit_to_half_plane(a);
            conformal_transport(&half_plane_expansion(w), 2.0 * w, c(2.0, 0.0))
        }
        DomainDescriptor::Rectangle { w, h, grid } => rectangle_robin(w, h, grid, a),
        DomainDescriptor::PeriodicStrip { tau } => {
            let dbl = schottky::StripDouble::new(tau, 0.0)?;
            let h0 = schottky::gamma_electro(a, &dbl)?;
            let h1 = schottky::gamma_electro_da(a, &dbl)?;
            let curvature = curvature_of_metric(|z| schottky::gamma_electro(z, &dbl), a, 1e-3)?;
            Ok(GreenExpansion { h0, h1, curvature })
        }
    }
}

fn half_plane_expansion(a: Complex64) -> GreenExpansion {
    GreenExpansion { h0: (2.0 * a.im).ln(), h1: 1.0 / (2.0 * I * a.im), curvature: -4.0 }
}

/// Rectangle Robin data from the fd oracle: discrete Robin values on the
/// grid and on its refinement, one Richardson step, then central
/// differences over the four neighbouring nodes for `h1`.
fn rectangle_robin(w: f64, h: f64, grid: usize, a: Complex64) -> Result<GreenExpansion> {
    let coarse = RectangleSolver::new(RectGrid::new(w, h, grid)?)?;
    let fine = RectangleSolver::new(RectGrid::new(w, h, 2 * grid)?)?;
    let node = coarse
        .grid
        .node_of(a)
        .ok_or_else(|| Error::Domain { z: a, reason: "rectangle Robin data needs a grid node".into() })?;
    let (i, j) = node;
    if i < 2 || j < 2 || i + 2 > coarse.grid.nx || j + 2 > coarse.grid.ny {
        return Err(Error::Conditioning("node too close to the boundary for the fd stencil".into()));
    }
    let robin = |ii: usize, jj: usize| -> Result<f64> {
        let c0 = coarse.robin_raw((ii, jj))?;
        let f0 = fine.robin_raw((2 * ii, 2 * jj))?;
        Ok((4.0 * f0 - c0) / 3.0)
    };
    let h0 = robin(i, j)?;
    let s = coarse.grid.step;
    let wide = i >= 3 && j >= 3 && i + 3 <= coarse.grid.nx && j + 3 <= coarse.grid.ny;
    // fourth-order central differences where the stencil fits, else second order
    let diff = |f: &dyn Fn(isize) -> Result<f64>| -> Result<f64> {
        if wide {
            Ok((8.0 * (f(1)? - f(-1)?) - (f(2)? - f(-2)?)) / (12.0 * s))
        } else {
            Ok((f(1)? - f(-1)?) / (2.0 * s))
        }
    };
    let dx = diff(&|k| robin((i as isize + k) as usize, j))?;
    let dy = diff(&|k| robin(i, (j as isize + k) as usize))?;
    // Liouville: every simply connected domain carries curvature −4
    Ok(GreenExpansion { h0, h1: 0.5 * c(dx, -dy), curvature: -4.0 })
}

/// `h1 = 4πi ∮ (∂G/∂z)² dz` along the boundary.
///
/// Disk: trapezoid rule on the circle. Half-plane: the real axis mapped
/// to `(−π/2, π/2)` by `x = tan s` and integrated by Gauss–Legendre; the
/// reported error compares against half the nodes.
pub fn h1_contour(domain: &DomainDescriptor, a: Complex64, n: usize) -> Result<Quadrature> {
    domain.validate()?;
    require_interior(domain, a)?;
    match *domain {
        DomainDescriptor::Disk { r } => {
            let curve = Curve::circle(c(0.0, 0.0), r);
            let f = |z: Complex64| green_dz(domain, z, a).map(|g| g * g);
            let v = contour_integral(f, &curve, n)?;
            let v2 = contour_integral(f, &curve, (n / 2).max(16))?;
            let k = 4.0 * PI * I;
            Ok(Quadrature { value: k * v, error: (k * (v - v2)).norm() })
        }
        DomainDescriptor::HalfPlane => {
            let rule = |m: usize| -> Result<Complex64> {
                let (x, w) = gauss_legendre(m);
                let mut s = c(0.0, 0.0);
                for (xi, wi) in x.iter().zip(&w) {
                    let t = 0.5 * PI * xi;
                    let z = c(t.tan(), 0.0);
                    let g = green_dz(domain, z, a)?;
                    s += g * g * (wi * 0.5 * PI / (t.cos() * t.cos()));
                }
                Ok(4.0 * PI * I * s)
            };
            let v = rule(n)?;
            Ok(Quadrature { value: v, error: (v - rule((n / 2).max(8))?).norm() })
        }
        _ => Err(Error::Unsupported(format!("h1 contour formula for {domain:?}"))),
    }
}

/// Harmonic extension into `|a| < R` of boundary data on `|z| = R`.
pub fn poisson_value<F>(boundary_data: F, a: Complex64, r: f64, n: usize) -> Result<f64>
where
    F: Fn(Complex64) -> f64,
{
    if a.norm() >= r {
        return Err(Error::Domain { z: a, reason: format!("outside the disk of radius {r}") });
    }
    let mut s = 0.0;
    for j in 0..n {
        let z = Complex64::from_polar(r, 2.0 * PI * j as f64 / n as f64);
        let u = boundary_data(z);
        if !u.is_finite() {
            return Err(Error::Evaluation { node: j, z });
        }
        s += u * (r * r - a.norm_sqr()) / (z - a).norm_sqr();
    }
    Ok(s / n as f64)
}

/// Transport of Robin data under a conformal map `z = f(z̃)`:
/// `h0 = h̃0 + log|f′|` and `h1·f′ = h̃1 + f″/(2f′)`.
pub fn conformal_transport(src: &GreenExpansion, fp: Complex64, fpp: Complex64) -> Result<GreenExpansion> {
    if fp.norm() < 1e-300 || !fp.re.is_finite() || !fp.im.is_finite() {
        return Err(Error::SingularMap);
    }
    Ok(GreenExpansion { h0: src.h0 + fp.norm().ln(), h1: (src.h1 + fpp / (2.0 * fp)) / fp, curvature: src.curvature })
}

/// Gaussian curvature `κ = e^{2γ} Δγ` of the metric `e^{−γ}|dz|`.
pub fn curvature_of_metric<F>(gamma: F, z: Complex64, h: f64) -> Result<f64>
where
    F: Fn(Complex64) -> Result<f64>,
{
    let g0 = gamma(z)?;
    Ok((2.0 * g0).exp() * laplacian_richardson(&gamma, z, h)?)
}

/// Bergman kernel of the unit disk, `1/(π(1 − z ā)²)`.
pub fn bergman_disk(z: Complex64, a: Complex64) -> Complex64 {
    let d = 1.0 - z * a.conj();
    1.0 / (PI * d * d)
}

#[cfg(test)]
mod tests;
