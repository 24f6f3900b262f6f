//! The periodic strip `Ω = {−½ < Re z < 0}` (with `y` modulo `Im τ`) and
//! its Schottky double, the rectangular torus `C/(Z + τZ)` with the
//! anti-conformal involution `J(z) = −z̄`.
//!
//! Green functions on Ω are odd and even combinations of the torus
//! monopole Green function `G_d`; the Bergman, Schiffer, Szegő and
//! third-kind kernels have closed forms in Weierstrass functions.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::elliptic::{wp, zeta_w};
use crate::numkit::{gauss_legendre, line_integral, periodic_line_integral, Quadrature, Region};
use crate::planar_green::{bergman_disk, curvature_of_metric, green_dz, robin_data, DomainDescriptor};
use crate::surface::{
    torus_green_dz, torus_harmonic_basis, torus_kernels, torus_monopole_green, wedge_integral, PeriodMatrices,
    TorusSpec,
};
use crate::{c, Error, Result};

/// Schottky double of the periodic strip.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "StripDocument", into = "StripDocument")]
pub struct StripDouble {
    pub spec: TorusSpec,
    /// Circulation around the hole used by the hydrodynamic kernels.
    pub p: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StripDocument {
    tau: Complex64,
    #[serde(default)]
    p: f64,
}

impl TryFrom<StripDocument> for StripDouble {
    type Error = Error;
    fn try_from(d: StripDocument) -> Result<Self> {
        StripDouble::new(d.tau, d.p)
    }
}

impl From<StripDouble> for StripDocument {
    fn from(s: StripDouble) -> Self {
        StripDocument { tau: s.tau(), p: s.p }
    }
}

impl StripDouble {
    pub fn new(tau: Complex64, p: f64) -> Result<Self> {
        if tau.re != 0.0 || !(tau.im > 0.0) {
            return Err(Error::Parameter(format!("strip modulus must be purely imaginary with Im > 0, got {tau}")));
        }
        if !p.is_finite() {
            return Err(Error::Parameter("circulation must be finite".into()));
        }
        Ok(Self { spec: TorusSpec::new(tau)?, p })
    }

    pub fn tau(&self) -> Complex64 {
        self.spec.tau()
    }

    /// `Im τ`, the period of the strip in `y`.
    pub fn period(&self) -> f64 {
        self.spec.volume()
    }

    /// Area of Ω, half the torus.
    pub fn area(&self) -> f64 {
        0.5 * self.period()
    }

    /// `J(z) = −z̄`.
    pub fn involution(&self, z: Complex64) -> Complex64 {
        -z.conj()
    }

    /// Harmonic measure of the line `x = 0`: `u1 = 1 + 2x`.
    pub fn harmonic_measure(&self, z: Complex64) -> f64 {
        1.0 + 2.0 * z.re
    }

    pub fn contains(&self, z: Complex64) -> bool {
        z.re > -0.5 && z.re < 0.0 && z.im.is_finite()
    }

    pub fn contains_closed(&self, z: Complex64) -> bool {
        z.re >= -0.5 - 1e-12 && z.re <= 1e-12 && z.im.is_finite()
    }

    /// Period matrices of the double with `P`, `Q` from the Dirichlet
    /// integrals `∫ η_β ∧ *η_β`, `∫ η_α ∧ *η_α` over the torus.
    pub fn period_matrices(&self) -> Result<PeriodMatrices> {
        let b = torus_harmonic_basis(&self.spec)?;
        let cell = Region::Parallelogram { origin: c(-0.5, 0.0), e1: c(1.0, 0.0), e2: self.tau() };
        let p = wedge_integral(&b.eta_beta, &b.star_eta_beta, &cell, 8)?.value.re;
        let q = wedge_integral(&b.eta_alpha, &b.star_eta_alpha, &cell, 8)?.value.re;
        let one = |v: f64| DMatrix::from_element(1, 1, v);
        PeriodMatrices::new(one(p), one(q), b.periods.r.clone())
    }

    fn require_closed(&self, z: Complex64) -> Result<()> {
        if self.contains_closed(z) {
            Ok(())
        } else {
            Err(Error::Domain { z, reason: "outside the strip −½ ≤ Re z ≤ 0".into() })
        }
    }

    fn require_interior(&self, z: Complex64) -> Result<()> {
        if self.contains(z) {
            Ok(())
        } else {
            Err(Error::Domain { z, reason: "not interior to the strip".into() })
        }
    }
}

/// Schwarz function `R²/z` of the circle `|z| = R`.
pub fn schwarz_circle(z: Complex64, r: f64) -> Result<Complex64> {
    if z.norm() == 0.0 {
        return Err(Error::Pole { z });
    }
    Ok(r * r / z)
}

/// `(K_electro, K_hydro, K_double)` at `(z, a)`.
pub fn strip_bergman_kernels(
    z: Complex64,
    a: Complex64,
    dbl: &StripDouble,
) -> Result<(Complex64, Complex64, Complex64)> {
    dbl.require_closed(z)?;
    dbl.require_closed(a)?;
    let (ke, kh) = double_bergman_kernels(z, a, dbl)?;
    Ok((ke, kh, c(1.0 / dbl.period(), 0.0)))
}

/// `K_electro` and `K_hydro` as differentials in `z` on the whole double
/// (no restriction of `z` to the strip).
pub fn double_bergman_kernels(z: Complex64, a: Complex64, dbl: &StripDouble) -> Result<(Complex64, Complex64)> {
    let ke = (wp(z + a.conj(), &dbl.spec.lattice)? + dbl.spec.lattice.eta1) / PI;
    Ok((ke, ke - 2.0 / dbl.period()))
}

/// Cycle periods of the two Bergman kernels.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelPeriods {
    pub electro_alpha: Complex64,
    pub electro_beta: Complex64,
    pub hydro_alpha: Complex64,
    pub hydro_beta: Complex64,
}

/// Periods of `K_electro(·,a)` and `K_hydro(·,a)` along the cycles through 0.
pub fn kernel_periods(a: Complex64, dbl: &StripDouble, n: usize) -> Result<KernelPeriods> {
    let ke = |z: Complex64| double_bergman_kernels(z, a, dbl).map(|k| k.0);
    let kh = |z: Complex64| double_bergman_kernels(z, a, dbl).map(|k| k.1);
    let (electro_alpha, electro_beta) = cycle_periods(ke, c(0.0, 0.0), dbl, n)?;
    let (hydro_alpha, hydro_beta) = cycle_periods(kh, c(0.0, 0.0), dbl, n)?;
    Ok(KernelPeriods { electro_alpha, electro_beta, hydro_alpha, hydro_beta })
}

/// Residuals of the relations between the planar Bergman kernels and the
/// kernels of the double.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KklResiduals {
    /// `K_electro − (K_double + L_double(z, J(a)))`
    pub electro: f64,
    /// `K_hydro − (−K_double + L_double(z, J(a)))`
    pub hydro: f64,
    /// `L_double(z, J(a)) − ½(K_electro + K_hydro)`
    pub sum: f64,
    /// `K_double − ½(K_electro − K_hydro)`
    pub difference: f64,
}

/// Both sides of the electro/hydro decomposition; `dJ(a) = −dā`.
pub fn kkl_combinations(z: Complex64, a: Complex64, dbl: &StripDouble) -> Result<KklResiduals> {
    let (ke, kh, kd) = strip_bergman_kernels(z, a, dbl)?;
    let (_, l) = torus_kernels(z, dbl.involution(a), &dbl.spec)?;
    Ok(KklResiduals {
        electro: (ke - (kd + l)).norm(),
        hydro: (kh - (-kd + l)).norm(),
        sum: (l - 0.5 * (ke + kh)).norm(),
        difference: (kd - 0.5 * (ke - kh)).norm(),
    })
}

/// Dirichlet Green function of the strip, `G_d(z,a) − G_d(z,J(a))`.
pub fn g_electro_strip(z: Complex64, a: Complex64, dbl: &StripDouble) -> Result<f64> {
    dbl.require_closed(z)?;
    dbl.require_interior(a)?;
    Ok(torus_monopole_green(z, a, &dbl.spec)? - torus_monopole_green(z, dbl.involution(a), &dbl.spec)?)
}

/// `∂G_electro/∂z`.
pub fn g_electro_dz(z: Complex64, a: Complex64, dbl: &StripDouble) -> Result<Complex64> {
    Ok(torus_green_dz(z, a, &dbl.spec)? - torus_green_dz(z, dbl.involution(a), &dbl.spec)?)
}

/// Hydrodynamic Green function
/// `G_electro + (1/(2 Im τ))(u1(z) − p)(u1(a) − p)`.
pub fn g_hydro_strip(z: Complex64, a: Complex64, dbl: &StripDouble, p: f64) -> Result<f64> {
    let k = 0.5 / dbl.period();
    Ok(g_electro_strip(z, a, dbl)? + k * (dbl.harmonic_measure(z) - p) * (dbl.harmonic_measure(a) - p))
}

/// `∂G_hydro/∂z`; `∂u1/∂z = 1`.
pub fn g_hydro_dz(z: Complex64, a: Complex64, dbl: &StripDouble, p: f64) -> Result<Complex64> {
    Ok(g_electro_dz(z, a, dbl)? + 0.5 / dbl.period() * (dbl.harmonic_measure(a) - p))
}

/// Neumann function `G_d(z,a) + G_d(z,J(a))`.
pub fn neumann_strip(z: Complex64, a: Complex64, dbl: &StripDouble) -> Result<f64> {
    dbl.require_closed(z)?;
    dbl.require_interior(a)?;
    Ok(torus_monopole_green(z, a, &dbl.spec)? + torus_monopole_green(z, dbl.involution(a), &dbl.spec)?)
}

/// `∂N/∂z`.
pub fn neumann_dz(z: Complex64, a: Complex64, dbl: &StripDouble) -> Result<Complex64> {
    Ok(torus_green_dz(z, a, &dbl.spec)? + torus_green_dz(z, dbl.involution(a), &dbl.spec)?)
}

/// Robin function `γ_electro(a) = H_electro(a,a)`: the regular part of
/// `G_d` on the diagonal is `2πc(τ)`, leaving `−2πG_d(a, J(a))`.
pub fn gamma_electro(a: Complex64, dbl: &StripDouble) -> Result<f64> {
    dbl.require_interior(a)?;
    let h0 = 2.0 * PI * dbl.spec.green_constant;
    Ok(h0 - 2.0 * PI * torus_monopole_green(a, dbl.involution(a), &dbl.spec)?)
}

/// `∂γ_electro/∂a = ζ(2x) − 2η1x`, real since `γ_electro` depends on `x` only.
pub fn gamma_electro_da(a: Complex64, dbl: &StripDouble) -> Result<Complex64> {
    dbl.require_interior(a)?;
    let x2 = c(2.0 * a.re, 0.0);
    Ok(c((zeta_w(x2, &dbl.spec.lattice)? - dbl.spec.lattice.eta1 * x2).re, 0.0))
}

/// `γ_hydro = γ_electro + (π/Im τ)(u1(a) − p)²`.
pub fn gamma_hydro(a: Complex64, dbl: &StripDouble, p: f64) -> Result<f64> {
    let u = dbl.harmonic_measure(a) - p;
    Ok(gamma_electro(a, dbl)? + PI / dbl.period() * u * u)
}

/// `∫_Ω f dxdy`: periodic trapezoid in `y`, Gauss–Legendre in `x`, with
/// a half-resolution error estimate.
pub fn strip_area_integral<F>(f: F, dbl: &StripDouble, resolution: usize) -> Result<Quadrature>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    if resolution < 8 {
        return Err(Error::Parameter("strip quadrature needs resolution >= 8".into()));
    }
    let t = dbl.period();
    let rule = |m: usize| -> Result<Complex64> {
        let (x, w) = gauss_legendre(m);
        let ny = 2 * m;
        let mut s = c(0.0, 0.0);
        for (xi, wi) in x.iter().zip(&w) {
            let xx = -0.25 + 0.25 * xi;
            let mut row = c(0.0, 0.0);
            for j in 0..ny {
                let z = c(xx, t * j as f64 / ny as f64);
                let v = f(z)?;
                if !(v.re.is_finite() && v.im.is_finite()) {
                    return Err(Error::Evaluation { node: j, z });
                }
                row += v;
            }
            s += row * (wi * 0.25 * t / ny as f64);
        }
        Ok(s)
    };
    let fine = rule(resolution)?;
    let coarse = rule(resolution / 2)?;
    Ok(Quadrature { value: fine, error: (fine - coarse).norm() })
}

/// Which Bergman kernel of the strip to reproduce with.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StripKernel {
    Electro,
    Hydro,
}

/// `(i/2)∫_Ω f dz ∧ conj(K(·,a) dz) = ∫_Ω f conj(K(·,a)) dxdy`.
///
/// The hydrodynamic kernel reproduces only exact differentials; `f` with
/// a nonzero period around the hole is rejected.
pub fn reproducing_check<F>(
    kernel: StripKernel,
    f: F,
    a: Complex64,
    dbl: &StripDouble,
    resolution: usize,
) -> Result<Quadrature>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    dbl.require_interior(a)?;
    if kernel == StripKernel::Hydro {
        let period = periodic_line_integral(&f, c(0.0, 0.0), dbl.tau(), 256)?;
        let scale = 1.0 + f(a)?.norm();
        if period.norm() > 1e-8 * scale {
            return Err(Error::Admissibility(format!("differential has period {period} around the hole")));
        }
    }
    let g = |z: Complex64| -> Result<Complex64> {
        let (ke, kh, _) = strip_bergman_kernels(z, a, dbl)?;
        let k = if kernel == StripKernel::Electro { ke } else { kh };
        Ok(f(z)? * k.conj())
    };
    strip_area_integral(g, dbl, resolution)
}

/// Abelian differential of the third kind with purely imaginary periods,
/// `ζ(z−a) − ζ(z−b) + η1(a−b) + (2π/τ) Im(a−b)` (coefficient of `dz`).
pub fn upsilon_third_kind(z: Complex64, a: Complex64, b: Complex64, dbl: &StripDouble) -> Result<Complex64> {
    let l = &dbl.spec.lattice;
    Ok(zeta_w(z - a, l)? - zeta_w(z - b, l)? + l.eta1 * (a - b) + 2.0 * PI / dbl.tau() * (a - b).im)
}

/// `α`- and `β`-periods of a differential on the double, along cycles
/// through `base`.
pub fn cycle_periods<F>(f: F, base: Complex64, dbl: &StripDouble, n: usize) -> Result<(Complex64, Complex64)>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    let pa = periodic_line_integral(&f, base, base + 1.0, n)?;
    let pb = periodic_line_integral(&f, base, base + dbl.tau(), n)?;
    Ok((pa, pb))
}

/// Continue `√(F(w))` along the straight segment from `w0` (where the
/// value is `s0`) to `w1`, choosing at each step the root nearer to the
/// previous one.
fn continue_sqrt<F>(f: F, w0: Complex64, s0: Complex64, w1: Complex64) -> Result<Complex64>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    let steps = 64 + (400.0 * (w1 - w0).norm()) as usize;
    let mut prev = s0;
    for k in 1..=steps {
        let w = w0 + (w1 - w0) * (k as f64 / steps as f64);
        let v = f(w)?;
        let s = v.sqrt();
        if s.norm() < 1e-6 * (1.0 + prev.norm()) {
            return Err(Error::Branch { z: w });
        }
        let (d1, d2) = ((s - prev).norm(), (s + prev).norm());
        if (d1 - d2).abs() < 0.1 * s.norm() {
            return Err(Error::Branch { z: w });
        }
        prev = if d1 <= d2 { s } else { -s };
    }
    Ok(prev)
}

/// Genus-one Szegő data: `L_Szegő(z,a) = (1/2π)√(℘(z−a) − e2)` with the
/// branch continued from the Laurent head `1/(2π(z−a))`, and the diagonal
/// `K_Szegő(a,a) = (1/2π)√(℘(2 Re a) − e2) > 0`.
pub fn szego_genus1(z: Complex64, a: Complex64, dbl: &StripDouble) -> Result<(Complex64, f64)> {
    dbl.require_interior(a)?;
    let l = &dbl.spec.lattice;
    let f = |w: Complex64| Ok(wp(w, l)? - l.e2);
    let w = z - a;
    if w.norm() < 1e-12 {
        return Err(Error::Pole { z });
    }
    let r0 = w.norm().min(1e-2);
    let w0 = w * (r0 / w.norm());
    let s = f(w0)?.sqrt();
    let head = 1.0 / w0;
    let s0 = if (s - head).norm() <= (s + head).norm() { s } else { -s };
    let big_l = continue_sqrt(f, w0, s0, w)? / (2.0 * PI);
    Ok((big_l, szego_diagonal(a, dbl)?))
}

/// `K_Szegő(a,a) = (1/2π)√(℘(2 Re a) − e2)`; on the real axis of a
/// rectangular lattice `℘ ≥ e1 > e2`, so the root is real and positive.
pub fn szego_diagonal(a: Complex64, dbl: &StripDouble) -> Result<f64> {
    dbl.require_interior(a)?;
    let l = &dbl.spec.lattice;
    let diag = wp(c(2.0 * a.re, 0.0), l)? - l.e2;
    if diag.re <= 0.0 {
        return Err(Error::Branch { z: a });
    }
    Ok(diag.re.sqrt() / (2.0 * PI))
}

/// Front-side Szegő kernel `K_Szegő(z,a) = (1/2π)√(℘(z+ā) − e2)`, with
/// the phase fixed by positivity on the diagonal and continued from
/// `z + ā = 2 Re a`.
pub fn szego_kernel(z: Complex64, a: Complex64, dbl: &StripDouble) -> Result<Complex64> {
    dbl.require_closed(z)?;
    let kd = szego_diagonal(a, dbl)?;
    let l = &dbl.spec.lattice;
    let f = |w: Complex64| Ok(wp(w, l)? - l.e2);
    let w0 = c(2.0 * a.re, 0.0);
    Ok(continue_sqrt(f, w0, c(2.0 * PI * kd, 0.0), z + a.conj())? / (2.0 * PI))
}

/// The five capacity functions at a point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CapacityFunctions {
    /// `e^{−γ_hydro}`
    pub c1: f64,
    /// `√(π K_hydro(a,a))`
    pub c_d: f64,
    /// `2π K_Szegő(a,a)`
    pub c_b: f64,
    /// `e^{−γ_electro}`
    pub c_beta: f64,
    /// `√(π K_electro(a,a))`
    pub m_sqrt: f64,
}

impl CapacityFunctions {
    /// Successive gaps `cD − c1`, `cB − cD`, `c_β − cB`, `√M − c_β`.
    pub fn margins(&self) -> [f64; 4] {
        [self.c_d - self.c1, self.c_b - self.c_d, self.c_beta - self.c_b, self.m_sqrt - self.c_beta]
    }

    pub fn is_strict(&self) -> bool {
        self.margins().iter().all(|&m| m > 0.0)
    }

    /// Largest pairwise difference among the five values.
    pub fn spread(&self) -> f64 {
        let v = [self.c1, self.c_d, self.c_b, self.c_beta, self.m_sqrt];
        let hi = v.iter().copied().fold(f64::MIN, f64::max);
        let lo = v.iter().copied().fold(f64::MAX, f64::min);
        hi - lo
    }
}

/// Capacity functions of the strip at an interior point, with the
/// circulation `p` of `dbl`.
pub fn capacity_functions(a: Complex64, dbl: &StripDouble) -> Result<CapacityFunctions> {
    dbl.require_interior(a)?;
    let d = (-a.re).min(a.re + 0.5);
    if d < 1e-6 {
        return Err(Error::Conditioning(format!("{a} within 1e-6 of the boundary")));
    }
    let (ke, kh, _) = strip_bergman_kernels(a, a, dbl)?;
    let ks = szego_diagonal(a, dbl)?;
    Ok(CapacityFunctions {
        c1: (-gamma_hydro(a, dbl, dbl.p)?).exp(),
        c_d: (PI * kh.re).sqrt(),
        c_b: 2.0 * PI * ks,
        c_beta: (-gamma_electro(a, dbl)?).exp(),
        m_sqrt: (PI * ke.re).sqrt(),
    })
}

/// Szegő kernel of the unit disk, `1/(2π(1 − zā))`.
pub fn szego_disk(z: Complex64, a: Complex64) -> Complex64 {
    1.0 / (2.0 * PI * (1.0 - z * a.conj()))
}

/// Capacity functions of the unit disk, where all five coincide.
pub fn capacity_functions_disk(a: Complex64) -> Result<CapacityFunctions> {
    let disk = DomainDescriptor::Disk { r: 1.0 };
    let gamma = robin_data(&disk, a)?.h0;
    let k = bergman_disk(a, a).re;
    Ok(CapacityFunctions {
        c1: (-gamma).exp(),
        c_d: (PI * k).sqrt(),
        c_b: 2.0 * PI * szego_disk(a, a).re,
        c_beta: (-gamma).exp(),
        m_sqrt: (PI * k).sqrt(),
    })
}

/// Gaussian curvature of the metric `c_β |dz|` on the strip.
pub fn capacity_metric_curvature(a: Complex64, dbl: &StripDouble) -> Result<f64> {
    curvature_of_metric(|z| gamma_electro(z, dbl), a, 1e-3)
}

/// Ahlfors map of the unit disk for the point `a`: `(z − a)/(1 − āz)`.
pub fn ahlfors_map_disk(z: Complex64, a: Complex64) -> Result<Complex64> {
    if a.norm() >= 1.0 {
        return Err(Error::Domain { z: a, reason: "base point outside the unit disk".into() });
    }
    if z.norm() > 1.0 + 1e-12 {
        return Err(Error::Domain { z, reason: "outside the closed unit disk".into() });
    }
    Ok((z - a) / (1.0 - a.conj() * z))
}

/// Circular slit map `f = exp(γ(a) − 2πG − 2πiG*)` of a simply connected
/// domain, normalized by `f(a) = 0`, `f′(a) = 1`. Writing
/// `2π(G + iG*) = −log(z−a) + Φ` with `Re Φ = H(·,a)`,
/// `f(z) = (z − a) exp(−∫_a^z Φ′)` and `Φ′ = 4π ∂G/∂z + 1/(z − a)`;
/// the boundary is mapped to the circle of radius `e^{γ(a)}`.
pub fn circular_slit_map(z: Complex64, a: Complex64, domain: &DomainDescriptor) -> Result<Complex64> {
    domain.validate()?;
    if !domain.contains(a) {
        return Err(Error::Domain { z: a, reason: "base point not interior".into() });
    }
    if !domain.contains_closed(z) {
        return Err(Error::Domain { z, reason: "outside the domain".into() });
    }
    if z == a {
        return Ok(c(0.0, 0.0));
    }
    // the conjugate function is integrated along the segment, which must
    // stay inside for the result to be the single-valued branch
    for k in 1..32 {
        let w = a + (z - a) * (k as f64 / 32.0);
        if !domain.contains(w) {
            return Err(Error::Normalization(format!("segment from {a} to {z} leaves the domain")));
        }
    }
    let phi_prime = |w: Complex64| Ok(4.0 * PI * green_dz(domain, w, a)? + 1.0 / (w - a));
    let integral = line_integral(phi_prime, a, z, 48)?;
    let f = (z - a) * (-integral).exp();
    if !(f.re.is_finite() && f.im.is_finite()) {
        return Err(Error::Normalization("non-finite map value".into()));
    }
    Ok(f)
}
