//! Monopole Green functions, Bergman and Schiffer kernels, harmonic
//! one-forms and period matrices on the sphere and on flat tori.
//!
//! On a closed surface of volume `V` the monopole Green function solves
//! `−4 ∂²G/∂z∂z̄ = δ_a − λ²/V` and is normalized by `∫ G vol = 0`.

use std::f64::consts::PI;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::elliptic::{wp, zeta_w, TorusLattice};
use crate::numkit::{area_quadrature, contour_integral, gauss_legendre, Curve, Quadrature, Region};
use crate::{c, Error, Result, I};

/// Coefficients of the local expansion of the regular part
/// `H(z,a) = h0 + Re(h1(z−a)) + Re(h2(z−a)²) + h11|z−a|² + …`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SurfaceExpansion {
    pub h0: f64,
    pub h1: Complex64,
    pub h2: Complex64,
    pub h11: f64,
    /// Metric density `λ²` at the point.
    pub lambda_sq: f64,
}

fn finite(z: Complex64) -> Result<()> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(())
    } else {
        Err(Error::Parameter(format!("non-finite chart point {z}")))
    }
}

// ---------------------------------------------------------------- sphere

/// Round metric density `4/(1+|z|²)²` in the stereographic chart.
pub fn sphere_lambda_sq(z: Complex64) -> f64 {
    let s = 1.0 + z.norm_sqr();
    4.0 / (s * s)
}

/// Sphere volume.
pub const SPHERE_VOLUME: f64 = 4.0 * PI;

/// Monopole Green function of the unit sphere,
/// `−(1/4π)(log(|z−a|²/((1+|z|²)(1+|a|²))) + 1)`.
pub fn sphere_green(z: Complex64, a: Complex64) -> Result<f64> {
    finite(z)?;
    finite(a)?;
    let d = (z - a).norm_sqr();
    if d == 0.0 {
        return Err(Error::Pole { z });
    }
    Ok(-((d / ((1.0 + z.norm_sqr()) * (1.0 + a.norm_sqr()))).ln() + 1.0) / (4.0 * PI))
}

/// `∂G/∂z` on the sphere.
pub fn sphere_green_dz(z: Complex64, a: Complex64) -> Result<Complex64> {
    if z == a {
        return Err(Error::Pole { z });
    }
    Ok(-(1.0 / (z - a) - z.conj() / (1.0 + z.norm_sqr())) / (4.0 * PI))
}

/// Local expansion of the sphere Green function at `a`.
pub fn sphere_expansion(a: Complex64) -> Result<SurfaceExpansion> {
    finite(a)?;
    let s = 1.0 + a.norm_sqr();
    Ok(SurfaceExpansion {
        h0: s.ln() - 0.5,
        h1: a.conj() / s,
        h2: -a.conj() * a.conj() / (2.0 * s * s),
        h11: 1.0 / (2.0 * s * s),
        lambda_sq: sphere_lambda_sq(a),
    })
}

/// Bergman and Schiffer kernels of the sphere: `(0, 1/(π(z−a)²))`.
pub fn sphere_kernels(z: Complex64, a: Complex64) -> Result<(Complex64, Complex64)> {
    if z == a {
        return Err(Error::Pole { z });
    }
    Ok((c(0.0, 0.0), 1.0 / (PI * (z - a) * (z - a))))
}

/// `∫ G(·,a) vol` over the sphere.
pub fn sphere_green_mean(a: Complex64, resolution: usize) -> Result<Quadrature> {
    area_quadrature(|z| sphere_green(z, a).map(|g| c(g, 0.0)), &Region::Sphere, resolution, &[a])
}

/// Mutual energy `∫ dG(·,a) ∧ *dG(·,b)`; the Dirichlet integral is
/// conformally invariant, so the chart integrand `4 Re(G_z conj G_z′)`
/// is divided by `λ²` before integrating against the spherical area.
pub fn sphere_mutual_energy(a: Complex64, b: Complex64, resolution: usize) -> Result<Quadrature> {
    let f = |z: Complex64| -> Result<Complex64> {
        let v = 4.0 * (sphere_green_dz(z, a)? * sphere_green_dz(z, b)?.conj()).re;
        Ok(c(v / sphere_lambda_sq(z), 0.0))
    };
    area_quadrature(f, &Region::Sphere, resolution, &[a, b])
}

// ----------------------------------------------------------------- torus

/// Flat torus `C/(Z + τZ)` with the constant that normalizes its
/// monopole Green function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "TauDocument", into = "TauDocument")]
pub struct TorusSpec {
    pub lattice: TorusLattice,
    /// Additive constant `c(τ)` making `∫_F G dxdy = 0`.
    pub green_constant: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TauDocument {
    tau: Complex64,
}

impl TryFrom<TauDocument> for TorusSpec {
    type Error = Error;
    fn try_from(d: TauDocument) -> Result<Self> {
        TorusSpec::new(d.tau)
    }
}

impl From<TorusSpec> for TauDocument {
    fn from(s: TorusSpec) -> Self {
        TauDocument { tau: s.lattice.tau }
    }
}

impl TorusSpec {
    pub fn new(tau: Complex64) -> Result<Self> {
        if !(tau.im > 0.0) {
            return Err(Error::Parameter(format!("Im tau must be positive, got {tau}")));
        }
        let lattice = TorusLattice::new(tau)?;
        let t = tau.im;
        // S = Σ log|1 − qⁿ| from θ1′(0) = 2π q^{1/8} Π(1 − qⁿ)³
        let s = ((lattice.theta1_prime0().norm() / (2.0 * PI)).ln() + PI * t / 4.0) / 3.0;
        let green_constant = t / 12.0 - (2.0 * s + (2.0 * PI).ln()) / (2.0 * PI);
        Ok(Self { lattice, green_constant })
    }

    pub fn tau(&self) -> Complex64 {
        self.lattice.tau
    }

    /// Area of the fundamental cell, `Im τ`.
    pub fn volume(&self) -> f64 {
        self.lattice.tau.im
    }

    /// The cell spanned by 1 and τ, centred at `a`.
    pub fn cell_at(&self, a: Complex64) -> Region {
        Region::Parallelogram { origin: a - 0.5 * (1.0 + self.tau()), e1: c(1.0, 0.0), e2: self.tau() }
    }
}

fn reduced_difference(z: Complex64, a: Complex64, spec: &TorusSpec) -> Result<Complex64> {
    let (w, _, _) = spec.lattice.reduce(z - a);
    if w.norm() < 1e-14 {
        return Err(Error::Pole { z });
    }
    Ok(w)
}

/// Monopole Green function of the flat torus,
/// `−(1/2π) log|θ1(z−a)/θ1′(0)| + (Im(z−a))²/(2 Im τ) + c(τ)`.
pub fn torus_monopole_green(z: Complex64, a: Complex64, spec: &TorusSpec) -> Result<f64> {
    let w = reduced_difference(z, a, spec)?;
    let l = &spec.lattice;
    let log_ratio = l.log_abs_theta1(w)? - l.theta1_prime0().norm().ln();
    Ok(-log_ratio / (2.0 * PI) + w.im * w.im / (2.0 * spec.volume()) + spec.green_constant)
}

/// `∂G/∂z = −(1/4π)(ζ(w) − η1 w) − i Im w/(2 Im τ)`, `w = z − a`.
pub fn torus_green_dz(z: Complex64, a: Complex64, spec: &TorusSpec) -> Result<Complex64> {
    let w = reduced_difference(z, a, spec)?;
    let l = &spec.lattice;
    Ok(-(zeta_w(w, l)? - l.eta1 * w) / (4.0 * PI) - I * w.im / (2.0 * spec.volume()))
}

/// Local expansion of the torus Green function (the same at every point).
pub fn torus_expansion(spec: &TorusSpec) -> SurfaceExpansion {
    let t = spec.volume();
    SurfaceExpansion {
        h0: 2.0 * PI * spec.green_constant,
        h1: c(0.0, 0.0),
        h2: 0.5 * spec.lattice.eta1 - PI / (2.0 * t),
        h11: PI / (2.0 * t),
        lambda_sq: 1.0,
    }
}

/// The constant Bergman kernel `1/Im τ`.
pub fn torus_bergman(spec: &TorusSpec) -> Complex64 {
    c(1.0 / spec.volume(), 0.0)
}

/// Bergman and Schiffer kernels `(1/Im τ, (1/π)(℘(z−a) + η1) − 1/Im τ)`.
pub fn torus_kernels(z: Complex64, a: Complex64, spec: &TorusSpec) -> Result<(Complex64, Complex64)> {
    let k = torus_bergman(spec);
    let l = (wp(z - a, &spec.lattice)? + spec.lattice.eta1) / PI - k;
    Ok((k, l))
}

/// `∫_F G(·,a) dxdy` over the cell centred at `a`.
pub fn torus_green_mean(a: Complex64, spec: &TorusSpec, resolution: usize) -> Result<Quadrature> {
    let f = |z: Complex64| torus_monopole_green(z, a, spec).map(|g| c(g, 0.0));
    area_quadrature(f, &spec.cell_at(a), resolution, &[a])
}

/// Principal value of `∫_F L(z,a) dxdy`.
///
/// The double pole `1/(π(z−a)²)` is subtracted over the cell centred at
/// `a`; its principal value equals the boundary term
/// `(1/π)(i/2)∮_{∂F} −dz̄/(z−a)` because the excised circle contributes
/// nothing.
pub fn torus_schiffer_mean(a: Complex64, spec: &TorusSpec, resolution: usize) -> Result<Quadrature> {
    let f = |z: Complex64| -> Result<Complex64> {
        let (_, l) = torus_kernels(z, a, spec)?;
        Ok(l - 1.0 / (PI * (z - a) * (z - a)))
    };
    let bulk = area_quadrature(f, &spec.cell_at(a), resolution, &[])?;
    let o = a - 0.5 * (1.0 + spec.tau());
    let corners = [o, o + 1.0, o + 1.0 + spec.tau(), o + spec.tau()];
    let (x, w) = gauss_legendre(resolution);
    let mut ring = c(0.0, 0.0);
    for k in 0..4 {
        let (p, q) = (corners[k], corners[(k + 1) % 4]);
        let (mid, half) = (0.5 * (p + q), 0.5 * (q - p));
        for (xi, wi) in x.iter().zip(&w) {
            ring += -1.0 / (mid + half * xi - a) * half.conj() * *wi;
        }
    }
    let boundary = 0.5 * I * ring / PI;
    Ok(Quadrature { value: bulk.value + boundary, error: bulk.error })
}

/// A real one-form `A dx + B dy` with complex-valued coefficient
/// functions (complex forms are allowed for holomorphic differentials).
#[derive(Clone)]
pub struct OneForm {
    dx: Arc<dyn Fn(Complex64) -> Result<Complex64> + Send + Sync>,
    dy: Arc<dyn Fn(Complex64) -> Result<Complex64> + Send + Sync>,
}

impl std::fmt::Debug for OneForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("OneForm")
    }
}

impl OneForm {
    pub fn new<A, B>(dx: A, dy: B) -> Self
    where
        A: Fn(Complex64) -> Result<Complex64> + Send + Sync + 'static,
        B: Fn(Complex64) -> Result<Complex64> + Send + Sync + 'static,
    {
        Self { dx: Arc::new(dx), dy: Arc::new(dy) }
    }

    /// `a dx + b dy` with constant coefficients.
    pub fn constant(a: Complex64, b: Complex64) -> Self {
        Self::new(move |_| Ok(a), move |_| Ok(b))
    }

    /// `f(z) dz = f dx + i f dy`.
    pub fn holomorphic<F>(f: F) -> Self
    where
        F: Fn(Complex64) -> Result<Complex64> + Send + Sync + 'static,
    {
        let f = Arc::new(f);
        let g = f.clone();
        Self::new(move |z| f(z), move |z| Ok(I * g(z)?))
    }

    /// Coefficients `(A, B)` at `z`.
    pub fn eval(&self, z: Complex64) -> Result<(Complex64, Complex64)> {
        Ok(((self.dx)(z)?, (self.dy)(z)?))
    }

    /// Hodge star: `*(A dx + B dy) = −B dx + A dy`.
    pub fn star(&self) -> Self {
        let (a, b) = (self.dx.clone(), self.dy.clone());
        Self::new(move |z| Ok(-b(z)?), move |z| a(z))
    }

    /// `dz`-coefficient of `η + i*η`, namely `A − iB`.
    pub fn dz_part(&self, z: Complex64) -> Result<Complex64> {
        let (a, b) = self.eval(z)?;
        Ok(a - I * b)
    }
}

/// `∮_cycle form` by the trapezoid rule with `n` nodes.
pub fn form_period(form: &OneForm, cycle: &Curve, n: usize) -> Result<Complex64> {
    let mut s = c(0.0, 0.0);
    for j in 0..n {
        let (z, dz) = cycle.eval(j as f64 / n as f64);
        let (a, b) = form.eval(z)?;
        let v = a * dz.re + b * dz.im;
        if !(v.re.is_finite() && v.im.is_finite()) {
            return Err(Error::Pole { z });
        }
        s += v;
    }
    Ok(s * (cycle.orientation as f64) / n as f64)
}

/// `∫ σ ∧ ρ = ∫ (A_σ B_ρ − B_σ A_ρ) dxdy` over a region.
pub fn wedge_integral(sigma: &OneForm, rho: &OneForm, region: &Region, resolution: usize) -> Result<Quadrature> {
    let f = |z: Complex64| -> Result<Complex64> {
        let (a1, b1) = sigma.eval(z)?;
        let (a2, b2) = rho.eval(z)?;
        Ok(a1 * b2 - b1 * a2)
    };
    area_quadrature(f, region, resolution, &[])
}

/// Period matrices `P`, `Q`, `R` of a genus-`g` surface.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodMatrices {
    pub p: DMatrix<f64>,
    pub q: DMatrix<f64>,
    pub r: DMatrix<f64>,
    pub genus: usize,
}

impl PeriodMatrices {
    pub fn new(p: DMatrix<f64>, q: DMatrix<f64>, r: DMatrix<f64>) -> Result<Self> {
        let g = p.nrows();
        for m in [&p, &q, &r] {
            if m.nrows() != g || m.ncols() != g {
                return Err(Error::Parameter("period matrices must all be g×g".into()));
            }
        }
        Ok(Self { p, q, r, genus: g })
    }

    /// `max |PQ − I − R²|`.
    pub fn pq_residual(&self) -> f64 {
        let id = DMatrix::<f64>::identity(self.genus, self.genus);
        (&self.p * &self.q - id - &self.r * &self.r).amax()
    }

    /// Largest asymmetry among `P`, `Q`, `RP`, `QR`.
    pub fn symmetry_residual(&self) -> f64 {
        let rp = &self.r * &self.p;
        let qr = &self.q * &self.r;
        [&self.p, &self.q, &rp, &qr].iter().map(|m| (*m - m.transpose()).amax()).fold(0.0, f64::max)
    }

    /// Whether `P` and `Q` are positive definite.
    pub fn positive_definite(&self) -> bool {
        self.p.clone().cholesky().is_some() && self.q.clone().cholesky().is_some()
    }
}

/// The harmonic and holomorphic one-forms of a flat torus.
#[derive(Debug, Clone)]
pub struct TorusHarmonicBasis {
    pub eta_alpha: OneForm,
    pub eta_beta: OneForm,
    pub star_eta_alpha: OneForm,
    pub star_eta_beta: OneForm,
    /// `dz`-coefficient of `ω_α = η_α + i*η_α`.
    pub omega_alpha: Complex64,
    /// `dz`-coefficient of `ω_β = η_β + i*η_β`.
    pub omega_beta: Complex64,
    pub periods: PeriodMatrices,
}

impl TorusHarmonicBasis {
    /// `|Q⁻¹(Rᵀ + iI)ω_α + ω_β|`.
    pub fn uqru_residual(&self) -> f64 {
        let m = &self.periods;
        (c(m.r[(0, 0)], 1.0) / m.q[(0, 0)] * self.omega_alpha + self.omega_beta).norm()
    }
}

/// The cycles α = [0,1] and β = [0,τ], shifted by `base`.
pub fn torus_cycles(spec: &TorusSpec, base: Complex64) -> (Curve, Curve) {
    (Curve::segment(base, base + 1.0), Curve::segment(base, base + spec.tau()))
}

/// Harmonic basis `η_α = dy/Im τ`, `η_β = −dx + (Re τ/Im τ) dy`, their
/// conjugates, and the period matrices computed from their periods:
/// `P = −∮_β *η_β`, `Q = −∮_α *η_α`, `R = ∮_α *η_β`.
pub fn torus_harmonic_basis(spec: &TorusSpec) -> Result<TorusHarmonicBasis> {
    let t = spec.volume();
    let s = spec.tau().re / t;
    let eta_alpha = OneForm::constant(c(0.0, 0.0), c(1.0 / t, 0.0));
    let eta_beta = OneForm::constant(c(-1.0, 0.0), c(s, 0.0));
    let star_eta_alpha = eta_alpha.star();
    let star_eta_beta = eta_beta.star();
    let (alpha, beta) = torus_cycles(spec, c(0.0, 0.0));
    let n = 64;
    let p = -form_period(&star_eta_beta, &beta, n)?.re;
    let q = -form_period(&star_eta_alpha, &alpha, n)?.re;
    let r = form_period(&star_eta_beta, &alpha, n)?.re;
    let one = |v: f64| DMatrix::from_element(1, 1, v);
    let z0 = c(0.0, 0.0);
    Ok(TorusHarmonicBasis {
        omega_alpha: eta_alpha.dz_part(z0)?,
        omega_beta: eta_beta.dz_part(z0)?,
        eta_alpha,
        eta_beta,
        star_eta_alpha,
        star_eta_beta,
        periods: PeriodMatrices::new(one(p), one(q), one(r))?,
    })
}

/// Bergman kernel rebuilt from the period data, compared with the closed
/// form `1/Im τ`: returns the largest residuals of the `P⁻¹ω_βω̄_β` and
/// `Q⁻¹ω_αω̄_α` expansions over a set of sample pairs.
pub fn bergman_expansion_check(spec: &TorusSpec) -> Result<(f64, f64)> {
    let basis = torus_harmonic_basis(spec)?;
    let pinv = basis.periods.p.clone().try_inverse().ok_or(Error::SingularMap)?;
    let qinv = basis.periods.q.clone().try_inverse().ok_or(Error::SingularMap)?;
    let (mut rp, mut rq) = (0.0f64, 0.0f64);
    for k in 0..8 {
        let z = c(0.1 * k as f64, 0.2 + 0.05 * k as f64);
        let a = c(0.37 - 0.03 * k as f64, 0.11 * k as f64);
        let kd = torus_bergman(spec);
        let via_p = pinv[(0, 0)] * basis.eta_beta.dz_part(z)? * basis.eta_beta.dz_part(a)?.conj();
        let via_q = qinv[(0, 0)] * basis.eta_alpha.dz_part(z)? * basis.eta_alpha.dz_part(a)?.conj();
        rp = rp.max((via_p - kd).norm());
        rq = rq.max((via_q - kd).norm());
    }
    Ok((rp, rq))
}

/// `∫_F f(z) conj(K(z,a)) dxdy`, the reproducing integral of the torus
/// Bergman kernel against the holomorphic differential `f dz`.
pub fn torus_reproduce<F>(f: F, a: Complex64, spec: &TorusSpec, resolution: usize) -> Result<Quadrature>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    let g = |z: Complex64| -> Result<Complex64> { Ok(f(z)? * torus_bergman(spec).conj()) };
    area_quadrature(g, &spec.cell_at(a), resolution, &[])
}

/// Residue of a meromorphic coefficient at `a` by a small circle.
pub fn residue<F>(f: F, a: Complex64, radius: f64) -> Result<Complex64>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    Ok(contour_integral(f, &Curve::circle(a, radius), 128)? / (2.0 * PI * I))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkit::laplacian_richardson;
    use rand::{Rng, SeedableRng};

    fn rng() -> rand::rngs::StdRng {
        rand::rngs::StdRng::seed_from_u64(51)
    }

    /// Torus Green function for τ = iT by a Fourier series in x; the n = 0
    /// mode is the periodic one-dimensional kernel with zero mean.
    fn fourier_green(w: Complex64, t: f64) -> f64 {
        let mut y = w.im.rem_euclid(t);
        if y > 0.5 * t {
            y -= t;
        }
        let y = y.abs();
        let mut g = y * y / (2.0 * t) - 0.5 * y + t / 12.0;
        for n in 1..400 {
            let k = 2.0 * PI * n as f64;
            // cosh(k(y − T/2))/(2k sinh(kT/2)) written with decaying exponentials
            let num = (-k * y).exp() + (-k * (t - y)).exp();
            let den = 2.0 * k * (1.0 - (-k * t).exp());
            g += 2.0 * (k * w.re).cos() * num / den;
        }
        g
    }

    #[test]
    fn sphere_green_isometry_and_symmetry() {
        let mut r = rng();
        for _ in 0..20 {
            let z = c(r.gen_range(-2.0..2.0), r.gen_range(-2.0..2.0));
            let a = c(r.gen_range(-2.0..2.0), r.gen_range(-2.0..2.0));
            let g = sphere_green(z, a).unwrap();
            let inv = |u: Complex64| 1.0 / u.conj();
            assert!((sphere_green(inv(z), inv(a)).unwrap() - g).abs() < 1e-12);
            assert!((sphere_green(a, z).unwrap() - g).abs() < 1e-14);
            // rotation z ↦ (z + b)/(1 − b̄z)
            let b = c(0.3, -0.2);
            let m = |u: Complex64| (u + b) / (1.0 - b.conj() * u);
            assert!((sphere_green(m(z), m(a)).unwrap() - g).abs() < 1e-12);
        }
        assert!(matches!(sphere_green(I, I), Err(Error::Pole { .. })));
    }

    #[test]
    fn sphere_green_has_zero_mean() {
        for a in [c(0.0, 0.0), c(0.7, -0.4), c(2.0, 1.0)] {
            let q = sphere_green_mean(a, 32).unwrap();
            assert!(q.value.norm() < 1e-6, "a={a}: {}", q.value);
        }
    }

    #[test]
    fn sphere_green_off_pole_laplacian() {
        // ∂²G/∂z∂z̄ = λ²/(4V) away from the pole; 1/(4π) at z = 0
        let lap = laplacian_richardson(|z| sphere_green(z, c(1.0, 0.0)), c(0.0, 0.0), 1e-3).unwrap();
        assert!((lap / 4.0 - 1.0 / (4.0 * PI)).abs() < 1e-8);
        assert!((1.0 / (4.0 * PI) - 0.0795775).abs() < 1e-7);
    }

    #[test]
    fn sphere_expansion_examples() {
        let e = sphere_expansion(c(0.0, 0.0)).unwrap();
        assert_eq!((e.h0, e.h1), (-0.5, c(0.0, 0.0)));
        assert_eq!(e.lambda_sq, 4.0);
        assert_eq!(8.0 * e.h11, 4.0);
        // h11 = πλ²/(2V)
        assert!((e.h11 - PI * e.lambda_sq / (2.0 * SPHERE_VOLUME)).abs() < 1e-15);
        let e = sphere_expansion(c(1.0, 0.0)).unwrap();
        assert_eq!(e.h1, c(0.5, 0.0));
    }

    #[test]
    fn sphere_expansion_matches_regular_part() {
        let a = c(0.4, -0.3);
        let e = sphere_expansion(a).unwrap();
        let h = |z: Complex64| 2.0 * PI * sphere_green(z, a).unwrap() + (z - a).norm().ln();
        // H(z,a) is smooth through z = a; probe a small circle
        let rho = 1e-3;
        let mut worst = 0.0f64;
        for k in 0..12 {
            let d = Complex64::from_polar(rho, 2.0 * PI * k as f64 / 12.0);
            let taylor = e.h0 + (e.h1 * d).re + (e.h2 * d * d).re + e.h11 * d.norm_sqr();
            worst = worst.max((h(a + d) - taylor).abs());
        }
        assert!(worst < 1e-8, "{worst}");
    }

    #[test]
    fn sphere_robin_laplacian_is_metric() {
        let mut r = rng();
        for _ in 0..10 {
            let a = c(r.gen_range(-1.5..1.5), r.gen_range(-1.5..1.5));
            let lap = laplacian_richardson(|z| sphere_expansion(z).map(|e| e.h0), a, 1e-3).unwrap();
            assert!((lap - sphere_lambda_sq(a)).abs() < 1e-6);
        }
    }

    #[test]
    fn sphere_kernels_examples() {
        let (k, l) = sphere_kernels(c(0.3, 0.1), c(-0.2, 0.5)).unwrap();
        assert_eq!(k, c(0.0, 0.0));
        let d = c(0.5, -0.4);
        assert!((l - 1.0 / (PI * d * d)).norm() < 1e-15);
    }

    #[test]
    fn sphere_mutual_energy_identity() {
        let (a, b) = (c(0.3, 0.2), c(-0.5, 0.6));
        let q = sphere_mutual_energy(a, b, 40).unwrap();
        assert!((q.value.re - sphere_green(a, b).unwrap()).abs() < 1e-3);
    }

    #[test]
    fn torus_spec_json() {
        let s: TorusSpec = serde_json::from_str(r#"{"tau":[0.0,2.0]}"#).unwrap();
        assert_eq!(s.tau(), c(0.0, 2.0));
        assert_eq!(serde_json::to_string(&s).unwrap(), r#"{"tau":[0.0,2.0]}"#);
        assert!(serde_json::from_str::<TorusSpec>(r#"{"tau":[0.0,-1.0]}"#).is_err());
        assert!(serde_json::from_str::<TorusSpec>(r#"{"tau":[0.0,1.0],"x":1}"#).is_err());
    }

    #[test]
    fn torus_green_matches_fourier_series() {
        let spec = TorusSpec::new(c(0.0, 2.0)).unwrap();
        let mut r = rng();
        for _ in 0..20 {
            let z = c(r.gen_range(-1.0..1.0), r.gen_range(-2.0..2.0));
            let a = c(r.gen_range(-1.0..1.0), r.gen_range(-2.0..2.0));
            let w = spec.lattice.reduce(z - a).0;
            if w.im.abs() < 0.1 {
                continue;
            }
            let g = torus_monopole_green(z, a, &spec).unwrap();
            assert!((g - fourier_green(z - a, 2.0)).abs() < 1e-10, "z={z} a={a}");
        }
    }

    #[test]
    fn torus_green_symmetry_periodicity_and_laplacian() {
        let mut r = rng();
        for tau in [c(0.0, 2.0), c(0.3, 1.2)] {
            let spec = TorusSpec::new(tau).unwrap();
            for _ in 0..20 {
                let z = c(r.gen_range(0.0..1.0), r.gen_range(0.0..tau.im));
                let a = c(r.gen_range(0.0..1.0), r.gen_range(0.0..tau.im));
                let g = torus_monopole_green(z, a, &spec).unwrap();
                assert!((torus_monopole_green(a, z, &spec).unwrap() - g).abs() < 1e-10);
                assert!((torus_monopole_green(z + 1.0, a, &spec).unwrap() - g).abs() < 1e-10);
                assert!((torus_monopole_green(z + tau, a - tau, &spec).unwrap() - g).abs() < 1e-10);
            }
        }
        let spec = TorusSpec::new(c(0.0, 2.0)).unwrap();
        let a = c(0.1, 0.2);
        let lap = laplacian_richardson(|z| torus_monopole_green(z, a, &spec), c(0.6, 1.1), 1e-3).unwrap();
        assert!((lap / 4.0 - 0.125).abs() < 1e-5);
    }

    #[test]
    fn torus_green_dz_matches_finite_differences() {
        let spec = TorusSpec::new(c(0.2, 1.5)).unwrap();
        let (z, a) = (c(0.3, 0.8), c(-0.1, 0.2));
        let h = 1e-6;
        let g = |u: Complex64| torus_monopole_green(u, a, &spec).unwrap();
        let fd = 0.5 * c((g(z + h) - g(z - h)) / (2.0 * h), -(g(z + I * h) - g(z - I * h)) / (2.0 * h));
        assert!((torus_green_dz(z, a, &spec).unwrap() - fd).norm() < 1e-8);
    }

    #[test]
    fn torus_green_has_zero_mean() {
        for tau in [c(0.0, 2.0), c(0.0, 1.0), c(0.3, 2.0)] {
            let spec = TorusSpec::new(tau).unwrap();
            let q = torus_green_mean(c(0.2, 0.3), &spec, 32).unwrap();
            assert!(q.value.norm() < 1e-6, "tau={tau}: {}", q.value);
        }
    }

    #[test]
    fn torus_expansion_matches_regular_part() {
        let spec = TorusSpec::new(c(0.3, 1.4)).unwrap();
        let e = torus_expansion(&spec);
        assert!((e.h11 - PI * e.lambda_sq / (2.0 * spec.volume())).abs() < 1e-15);
        let a = c(0.2, 0.5);
        let h = |z: Complex64| 2.0 * PI * torus_monopole_green(z, a, &spec).unwrap() + (z - a).norm().ln();
        let rho = 1e-3;
        for k in 0..12 {
            let d = Complex64::from_polar(rho, 2.0 * PI * k as f64 / 12.0);
            let taylor = e.h0 + (e.h1 * d).re + (e.h2 * d * d).re + e.h11 * d.norm_sqr();
            assert!((h(a + d) - taylor).abs() < 1e-8);
        }
    }

    #[test]
    fn torus_kernel_examples() {
        let spec = TorusSpec::new(c(0.0, 2.0)).unwrap();
        let a = c(0.3, 0.4);
        let (k, _) = torus_kernels(c(0.7, 1.9), a, &spec).unwrap();
        assert_eq!(k, c(0.5, 0.0));
        for eps in [1e-3, 1e-4] {
            let d = Complex64::from_polar(eps, 0.7);
            let (_, l) = torus_kernels(a + d, a, &spec).unwrap();
            assert!((d * d * l - 1.0 / PI).norm() < 10.0 * eps * eps);
        }
        let pv = torus_schiffer_mean(a, &spec, 48).unwrap();
        assert!(pv.value.norm() < 1e-6, "{}", pv.value);
        let spec = TorusSpec::new(c(0.4, 1.1)).unwrap();
        let pv = torus_schiffer_mean(a, &spec, 48).unwrap();
        assert!(pv.value.norm() < 1e-6, "{}", pv.value);
    }

    #[test]
    fn period_matrices_of_square_like_torus() {
        let spec = TorusSpec::new(c(0.0, 2.0)).unwrap();
        let b = torus_harmonic_basis(&spec).unwrap();
        let m = &b.periods;
        assert!((m.p[(0, 0)] - 2.0).abs() < 1e-14);
        assert!((m.q[(0, 0)] - 0.5).abs() < 1e-14);
        assert!(m.r[(0, 0)].abs() < 1e-14);
        assert!(m.pq_residual() < 1e-12 && m.positive_definite());
        assert!((b.omega_alpha - c(0.0, -0.5)).norm() < 1e-15);
        assert!(b.uqru_residual() < 1e-12);
        let (alpha, beta) = torus_cycles(&spec, c(0.0, 0.0));
        assert!((form_period(&b.eta_beta, &alpha, 32).unwrap() - c(-1.0, 0.0)).norm() < 1e-14);
        assert!((form_period(&b.eta_alpha, &beta, 32).unwrap() - c(1.0, 0.0)).norm() < 1e-14);
        let wa = OneForm::holomorphic(|_| Ok(c(0.0, -0.5)));
        assert!((form_period(&wa, &beta, 32).unwrap() - c(1.0, 0.0)).norm() < 1e-14);
        assert!((form_period(&wa, &alpha, 32).unwrap() - c(0.0, -0.5)).norm() < 1e-14);
        let cell = Region::Parallelogram { origin: c(0.0, 0.0), e1: c(1.0, 0.0), e2: spec.tau() };
        let q = wedge_integral(&b.eta_alpha, &b.eta_beta, &cell, 8).unwrap();
        assert!((q.value - 1.0).norm() < 1e-13);
    }

    #[test]
    fn period_matrices_of_oblique_torus() {
        let tau = c(0.3, 2.0);
        let b = torus_harmonic_basis(&TorusSpec::new(tau).unwrap()).unwrap();
        let m = &b.periods;
        assert!((m.p[(0, 0)] - tau.norm_sqr() / 2.0).abs() < 1e-13);
        assert!((m.r[(0, 0)] + 0.15).abs() < 1e-14);
        assert!(m.pq_residual() < 1e-10 && m.symmetry_residual() < 1e-10);
        assert!((b.omega_beta - (-I * tau.conj() / 2.0)).norm() < 1e-14);
        assert!(b.uqru_residual() < 1e-12);
        // Dirichlet integral of η_β equals P
        let cell = Region::Parallelogram { origin: c(0.0, 0.0), e1: c(1.0, 0.0), e2: tau };
        let q = wedge_integral(&b.eta_beta, &b.star_eta_beta, &cell, 8).unwrap();
        assert!((q.value.re - m.p[(0, 0)]).abs() < 1e-12);
    }

    #[test]
    fn bergman_expansion_residuals() {
        let (rp, rq) = bergman_expansion_check(&TorusSpec::new(c(0.0, 2.0)).unwrap()).unwrap();
        assert!(rp < 1e-12 && rq < 1e-12);
        let (rp, rq) = bergman_expansion_check(&TorusSpec::new(c(0.3, 2.0)).unwrap()).unwrap();
        assert!(rp < 1e-10 && rq < 1e-10);
    }

    #[test]
    fn torus_bergman_reproduces_dz() {
        let spec = TorusSpec::new(c(0.2, 1.3)).unwrap();
        let q = torus_reproduce(|_| Ok(c(1.0, 0.0)), c(0.1, 0.1), &spec, 8).unwrap();
        assert!((q.value - 1.0).norm() < 1e-8);
    }

    #[test]
    fn residue_extraction() {
        let r = residue(|z| Ok(3.0 / (z - 0.2) + z), c(0.2, 0.0), 0.1).unwrap();
        assert!((r - 3.0).norm() < 1e-13);
    }
}
