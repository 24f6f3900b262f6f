//! Discrete energies, Fekete points, transfinite diameter, equilibrium
//! measures, harmonic measure and condenser capacity.
//!
//! `δ_n` uses the exponent `2/(n(n−1))`. The alternative normalization
//! `2/n²` has the same limit and is not computed.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::check_finite;
use crate::planar_green::{DomainDescriptor, RectGrid, RectangleSolver};
use crate::{c, Error, Result, I};

/// A compact subset of the Riemann sphere with positive capacity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum CompactSet {
    /// `|z| = R`
    Circle {
        #[serde(rename = "R")]
        r: f64,
    },
    /// `|z| ≤ R`
    Disk {
        #[serde(rename = "R")]
        r: f64,
    },
    /// `[−ℓ/2, ℓ/2]`
    Segment { length: f64 },
    /// `{|z| ≥ R} ∪ {∞}`; only meaningful with a finite pole.
    ExteriorDisk {
        #[serde(rename = "R")]
        r: f64,
    },
    /// Boundary of a bounded domain (disk or rectangle).
    Boundary { domain: DomainDescriptor },
}

/// Point playing the role of infinity in the capacity problem.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Pole {
    #[default]
    Infinity,
    Finite(Complex64),
}

impl Pole {
    fn log_dist(&self, z: Complex64) -> f64 {
        match *self {
            Pole::Infinity => 0.0,
            Pole::Finite(a) => (z - a).norm().ln(),
        }
    }
}

impl CompactSet {
    pub fn validate(&self) -> Result<()> {
        let positive = |v: f64, what: &str| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::Parameter(format!("{what} must be positive, got {v}")))
            }
        };
        match self {
            Self::Circle { r } | Self::Disk { r } | Self::ExteriorDisk { r } => positive(*r, "radius"),
            Self::Segment { length } => positive(*length, "segment length"),
            Self::Boundary { domain } => {
                domain.validate()?;
                match domain {
                    DomainDescriptor::Disk { .. } | DomainDescriptor::Rectangle { .. } => Ok(()),
                    _ => Err(Error::Parameter(format!("boundary of {domain:?} is not compact"))),
                }
            }
        }
    }

    fn is_closed_curve(&self) -> bool {
        !matches!(self, Self::Segment { .. })
    }

    fn diameter(&self) -> f64 {
        match self {
            Self::Circle { r } | Self::Disk { r } | Self::ExteriorDisk { r } => 2.0 * r,
            Self::Segment { length } => *length,
            Self::Boundary { domain } => match *domain {
                DomainDescriptor::Disk { r } => 2.0 * r,
                DomainDescriptor::Rectangle { w, h, .. } => w.hypot(h),
                _ => f64::INFINITY,
            },
        }
    }

    /// Boundary parametrization `t ↦ (z, z', z'')`, `t ∈ [0,1]`; periodic
    /// for closed curves. Fekete points and equilibrium charges live here.
    pub fn boundary_point(&self, t: f64) -> (Complex64, Complex64, Complex64) {
        let circle = |r: f64| {
            let w = 2.0 * PI * I;
            let z = r * (w * t).exp();
            (z, w * z, w * w * z)
        };
        match self {
            Self::Circle { r } | Self::Disk { r } | Self::ExteriorDisk { r } => circle(*r),
            Self::Segment { length } => {
                let h = 0.5 * length;
                let (s, co) = (PI * t).sin_cos();
                (c(-h * co, 0.0), c(h * PI * s, 0.0), c(h * PI * PI * co, 0.0))
            }
            Self::Boundary { domain } => match *domain {
                DomainDescriptor::Disk { r } => circle(r),
                DomainDescriptor::Rectangle { w, h, .. } => {
                    let (z, d) = rectangle_perimeter(w, h, t);
                    (z, d, Complex64::new(0.0, 0.0))
                }
                _ => (c(f64::NAN, f64::NAN), c(0.0, 0.0), c(0.0, 0.0)),
            },
        }
    }

    /// Membership test with absolute tolerance `1e-9·diam`.
    pub fn contains(&self, z: Complex64) -> bool {
        let tol = 1e-9 * self.diameter();
        match self {
            Self::Circle { r } => (z.norm() - r).abs() <= tol,
            Self::Disk { r } => z.norm() <= r + tol,
            Self::ExteriorDisk { r } => z.norm() >= r - tol,
            Self::Segment { length } => z.im.abs() <= tol && z.re.abs() <= 0.5 * length + tol,
            Self::Boundary { domain } => domain.contains_closed(z) && domain.boundary_distance(z).abs() <= tol,
        }
    }

    fn check_pole(&self, pole: Pole) -> Result<()> {
        match pole {
            Pole::Infinity if matches!(self, Self::ExteriorDisk { .. }) => {
                Err(Error::Parameter("∞ belongs to the exterior disk; choose a finite pole".into()))
            }
            Pole::Infinity => Ok(()),
            Pole::Finite(a) => {
                check_finite(a)?;
                if self.contains(a) {
                    Err(Error::Parameter(format!("pole {a} lies on the compact set")))
                } else {
                    Ok(())
                }
            }
        }
    }

    /// Closed polygon (or open polyline for the segment) with about `m`
    /// vertices on the boundary parametrization.
    fn polyline(&self, m: usize) -> Vec<Complex64> {
        match self {
            Self::Boundary { domain: DomainDescriptor::Rectangle { w, h, .. } } => {
                let (w, h) = (*w, *h);
                let per = 2.0 * (w + h);
                let corners = [c(0.0, 0.0), c(w, 0.0), c(w, h), c(0.0, h), c(0.0, 0.0)];
                let mut out = Vec::with_capacity(m + 4);
                for side in 0..4 {
                    let (p, q) = (corners[side], corners[side + 1]);
                    let k = (((q - p).norm() / per) * m as f64).round().max(1.0) as usize;
                    out.extend((0..k).map(|i| p + (q - p) * (i as f64 / k as f64)));
                }
                out
            }
            Self::Segment { .. } => (0..=m).map(|k| self.boundary_point(k as f64 / m as f64).0).collect(),
            _ => (0..m).map(|k| self.boundary_point(k as f64 / m as f64).0).collect(),
        }
    }
}

fn rectangle_perimeter(w: f64, h: f64, t: f64) -> (Complex64, Complex64) {
    let per = 2.0 * (w + h);
    let s = t.rem_euclid(1.0) * per;
    if s < w {
        (c(s, 0.0), c(per, 0.0))
    } else if s < w + h {
        (c(w, s - w), c(0.0, per))
    } else if s < 2.0 * w + h {
        (c(2.0 * w + h - s, h), c(-per, 0.0))
    } else {
        (c(0.0, per - s), c(0.0, -per))
    }
}

/// Probability measure carried by finitely many points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightedMeasure {
    pub points: Vec<Complex64>,
    pub weights: Vec<f64>,
}

impl WeightedMeasure {
    /// Checks nonnegativity and unit mass (within 1e-12).
    pub fn new(points: Vec<Complex64>, weights: Vec<f64>) -> Result<Self> {
        if points.len() != weights.len() || points.is_empty() {
            return Err(Error::Parameter("points and weights must be nonempty and of equal length".into()));
        }
        if weights.iter().any(|w| !(*w >= 0.0)) {
            return Err(Error::Normalization("negative or NaN weight".into()));
        }
        let mass: f64 = weights.iter().sum();
        if (mass - 1.0).abs() > 1e-12 {
            return Err(Error::Normalization(format!("total mass {mass}")));
        }
        Ok(Self { points, weights })
    }

    pub fn total_mass(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn integrate<F: Fn(Complex64) -> f64>(&self, f: F) -> f64 {
        self.points.iter().zip(&self.weights).map(|(z, w)| w * f(*z)).sum()
    }

    /// Logarithmic potential `∫ log(1/|z−ζ|) dμ(ζ)`.
    pub fn log_potential(&self, z: Complex64) -> f64 {
        self.integrate(|p| -(z - p).norm().ln())
    }
}

/// Output of [`transfinite_diameter`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CapacityReport {
    /// Ladder sizes.
    pub n: Vec<usize>,
    pub delta_n: Vec<f64>,
    /// Extrapolated transfinite diameter.
    pub delta: f64,
    /// `−log δ`.
    pub gamma: f64,
    /// `e^{−γ}`.
    pub logcap: f64,
    /// Energy of the equilibrium measure; `e^{−4πE}` should match `delta`.
    pub energy: f64,
}

/// `(1/4π) Σ_{j≠k} Γ_j Γ_k log(1/|z_j−z_k|)`.
pub fn discrete_energy(points: &[Complex64], strengths: &[f64]) -> Result<f64> {
    if points.len() != strengths.len() {
        return Err(Error::Parameter("points and strengths differ in length".into()));
    }
    let mut e = 0.0;
    for j in 0..points.len() {
        for k in j + 1..points.len() {
            let d = (points[j] - points[k]).norm();
            if d == 0.0 {
                return Err(Error::Conditioning(format!("coincident points at {}", points[j])));
            }
            e -= strengths[j] * strengths[k] * d.ln();
        }
    }
    // each unordered pair appears twice in the full sum
    Ok(e / (2.0 * PI))
}

/// Result of a Fekete optimization for fixed `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct FeketeResult {
    pub points: Vec<Complex64>,
    /// Boundary parameters of `points`.
    pub params: Vec<f64>,
    /// `Σ_{j<k} log|z_j−z_k| − (n−1) Σ_j log|z_j−a|`.
    pub log_product: f64,
    pub delta_n: f64,
    pub gradient_norm: f64,
    /// False when the polish stalled above the gradient tolerance; the
    /// best configuration found is still returned.
    pub converged: bool,
}

struct FeketeProblem<'a> {
    set: &'a CompactSet,
    pole: Pole,
    n: usize,
    closed: bool,
}

impl FeketeProblem<'_> {
    fn objective(&self, zs: &[Complex64]) -> f64 {
        let mut f = 0.0;
        for j in 0..zs.len() {
            for k in j + 1..zs.len() {
                f += (zs[j] - zs[k]).norm().ln();
            }
            f -= (self.n - 1) as f64 * self.pole.log_dist(zs[j]);
        }
        f
    }

    fn partial(&self, zs: &[Complex64], j: usize, z: Complex64) -> f64 {
        let mut f = -((self.n - 1) as f64) * self.pole.log_dist(z);
        for (k, zk) in zs.iter().enumerate() {
            if k != j {
                f += (z - zk).norm().ln();
            }
        }
        f
    }

    fn clamp(&self, t: f64) -> f64 {
        if self.closed {
            t
        } else {
            t.clamp(0.0, 1.0)
        }
    }

    fn leja(&self) -> Vec<f64> {
        let m = 64 * self.n;
        let cand: Vec<f64> = if self.closed {
            (0..m).map(|k| k as f64 / m as f64).collect()
        } else {
            (0..=m).map(|k| k as f64 / m as f64).collect()
        };
        let cz: Vec<Complex64> = cand.iter().map(|&t| self.set.boundary_point(t).0).collect();
        let mut score: Vec<f64> = cz.iter().map(|&z| -self.pole.log_dist(z)).collect();
        let mut chosen = Vec::with_capacity(self.n);
        for _ in 0..self.n {
            let (best, _) = score
                .iter()
                .enumerate()
                .fold((0, f64::NEG_INFINITY), |acc, (i, &s)| if s > acc.1 { (i, s) } else { acc });
            chosen.push(cand[best]);
            let zb = cz[best];
            for (s, z) in score.iter_mut().zip(&cz) {
                *s += (z - zb).norm().ln() - self.pole.log_dist(*z);
            }
        }
        chosen.sort_by(f64::total_cmp);
        chosen
    }

    fn golden_sweep(&self, ts: &mut [f64], zs: &mut [Complex64]) {
        const PHI: f64 = 0.618_033_988_749_894_8;
        let n = ts.len();
        for j in 0..n {
            let (lo, hi) = if self.closed {
                let prev = if j == 0 { ts[n - 1] - 1.0 } else { ts[j - 1] };
                let next = if j == n - 1 { ts[0] + 1.0 } else { ts[j + 1] };
                (prev, next)
            } else {
                let prev = if j == 0 { 0.0 } else { ts[j - 1] };
                let next = if j == n - 1 { 1.0 } else { ts[j + 1] };
                (prev, next)
            };
            let f = |t: f64| self.partial(zs, j, self.set.boundary_point(t).0);
            let (mut a, mut b) = (lo, hi);
            let mut x1 = b - PHI * (b - a);
            let mut x2 = a + PHI * (b - a);
            let (mut f1, mut f2) = (f(x1), f(x2));
            while b - a > 1e-13 {
                if f1 < f2 {
                    a = x1;
                    x1 = x2;
                    f1 = f2;
                    x2 = a + PHI * (b - a);
                    f2 = f(x2);
                } else {
                    b = x2;
                    x2 = x1;
                    f2 = f1;
                    x1 = b - PHI * (b - a);
                    f1 = f(x1);
                }
            }
            let mut best = 0.5 * (a + b);
            // endpoints of an open arc may be optimal but are never probed above
            if !self.closed && (j == 0 || j == n - 1) {
                let edge = if j == 0 { 0.0 } else { 1.0 };
                if f(edge) >= f(best) {
                    best = edge;
                }
            }
            if f(best) > f(ts[j]) {
                ts[j] = best;
                zs[j] = self.set.boundary_point(best).0;
            }
        }
    }

    fn gradient_hessian(&self, ts: &[f64]) -> (DVector<f64>, DMatrix<f64>) {
        let n = ts.len();
        let pts: Vec<_> = ts.iter().map(|&t| self.set.boundary_point(t)).collect();
        let mut g = DVector::zeros(n);
        let mut h = DMatrix::zeros(n, n);
        let pw = (self.n - 1) as f64;
        for j in 0..n {
            let (zj, d1, d2) = pts[j];
            for k in 0..n {
                if k == j {
                    continue;
                }
                let (zk, e1, _) = pts[k];
                let u = 1.0 / (zj - zk);
                g[j] += (d1 * u).re;
                h[(j, j)] += (d2 * u - d1 * d1 * u * u).re;
                h[(j, k)] += (d1 * e1 * u * u).re;
            }
            if let Pole::Finite(a) = self.pole {
                let u = 1.0 / (zj - a);
                g[j] -= pw * (d1 * u).re;
                h[(j, j)] -= pw * (d2 * u - d1 * d1 * u * u).re;
            }
        }
        (g, h)
    }

    /// Damped Newton ascent on all parameters at once.
    fn newton(&self, ts: &mut Vec<f64>, f0: f64) -> (f64, f64) {
        let n = ts.len();
        let mut f = f0;
        let mut mu = 0.0;
        let mut gnorm = f64::INFINITY;
        for _ in 0..60 {
            let (g, h) = self.gradient_hessian(ts);
            gnorm = g.amax();
            if gnorm < 1e-12 * n as f64 {
                break;
            }
            let scale = (0..n).map(|i| h[(i, i)].abs()).fold(0.0, f64::max).max(1.0);
            let mut accepted = false;
            for _ in 0..30 {
                let mut m = -&h;
                for i in 0..n {
                    m[(i, i)] += (mu + 1e-13) * scale;
                }
                let step = match m.cholesky() {
                    Some(ch) => ch.solve(&g),
                    None => {
                        mu = (mu * 10.0).max(1e-8);
                        continue;
                    }
                };
                let trial: Vec<f64> = ts.iter().zip(step.iter()).map(|(t, s)| self.clamp(t + s)).collect();
                let zs: Vec<_> = trial.iter().map(|&t| self.set.boundary_point(t).0).collect();
                let ft = self.objective(&zs);
                if ft.is_finite() && ft >= f - 1e-13 * f.abs().max(1.0) {
                    *ts = trial;
                    f = f.max(ft);
                    mu *= 0.1;
                    accepted = true;
                    break;
                }
                mu = (mu * 10.0).max(1e-8);
            }
            if !accepted {
                break;
            }
        }
        (f, gnorm)
    }
}

/// Fekete points of `set` for `n` charges, sought on the boundary
/// parametrization: Leja initialization, cyclic golden-section sweeps, then
/// a Newton polish.
pub fn fekete_points(set: &CompactSet, n: usize, pole: Pole) -> Result<FeketeResult> {
    set.validate()?;
    set.check_pole(pole)?;
    if n < 2 {
        return Err(Error::Parameter(format!("need n ≥ 2, got {n}")));
    }
    let prob = FeketeProblem { set, pole, n, closed: set.is_closed_curve() };
    let mut ts = prob.leja();
    let mut zs: Vec<Complex64> = ts.iter().map(|&t| set.boundary_point(t).0).collect();
    let mut f = prob.objective(&zs);
    for _ in 0..200 {
        prob.golden_sweep(&mut ts, &mut zs);
        let f_new = prob.objective(&zs);
        let gain = f_new - f;
        f = f_new;
        if gain < 1e-10 {
            break;
        }
    }
    let (f, gnorm) = prob.newton(&mut ts, f);
    let zs: Vec<Complex64> = ts.iter().map(|&t| set.boundary_point(t).0).collect();
    let pairs = (n * (n - 1) / 2) as f64;
    Ok(FeketeResult {
        points: zs,
        params: ts,
        log_product: f,
        delta_n: (f / pairs).exp(),
        gradient_norm: gnorm,
        converged: gnorm < 1e-8 * n as f64,
    })
}

/// Ladder sizes used by [`transfinite_diameter`].
pub fn ladder(n_max: usize) -> Vec<usize> {
    let mut ns: Vec<usize> = (1..=8).map(|k| (n_max * k).div_ceil(8).max(2)).collect();
    ns.dedup();
    ns
}

/// Least-squares fit of `log δ_n = L + (A log n + B)/(n−1)`; returns `e^L`.
pub fn extrapolate_delta(ns: &[usize], deltas: &[f64]) -> Result<f64> {
    if ns.len() < 3 || ns.len() != deltas.len() {
        return Err(Error::Parameter("extrapolation needs at least 3 ladder values".into()));
    }
    let rows = ns.len();
    let a = DMatrix::from_fn(rows, 3, |i, j| {
        let nf = ns[i] as f64;
        match j {
            0 => 1.0,
            1 => nf.ln() / (nf - 1.0),
            _ => 1.0 / (nf - 1.0),
        }
    });
    let b = DVector::from_iterator(rows, deltas.iter().map(|d| d.ln()));
    let sol = a.svd(true, true).solve(&b, 1e-14).map_err(|e| Error::Solver(e.to_string()))?;
    Ok(sol[0].exp())
}

/// `δ_n` ladder up to `n_max`, extrapolated limit and the equilibrium
/// energy (with `m = 256` panels).
pub fn transfinite_diameter(set: &CompactSet, pole: Pole, n_max: usize) -> Result<CapacityReport> {
    fekete_ladder(set, pole, n_max).map(|(report, _)| report)
}

/// Like [`transfinite_diameter`], also returning the Fekete configuration
/// for every ladder size.
pub fn fekete_ladder(set: &CompactSet, pole: Pole, n_max: usize) -> Result<(CapacityReport, Vec<FeketeResult>)> {
    if n_max < 8 {
        return Err(Error::Parameter(format!("n_max must be at least 8, got {n_max}")));
    }
    let ns = ladder(n_max);
    let mut runs = Vec::with_capacity(ns.len());
    for &n in &ns {
        runs.push(fekete_points(set, n, pole)?);
    }
    let delta_n: Vec<f64> = runs.iter().map(|r| r.delta_n).collect();
    for (k, w) in delta_n.windows(2).enumerate() {
        if w[1].ln() > w[0].ln() + 1e-6 {
            return Err(Error::Convergence(format!(
                "δ_n increases from n = {} to n = {}: {} → {}",
                ns[k],
                ns[k + 1],
                w[0],
                w[1]
            )));
        }
    }
    let tail = ns.len().saturating_sub(4);
    let delta = extrapolate_delta(&ns[tail..], &delta_n[tail..])?;
    let eq = equilibrium_measure_with_pole(set, pole, 256)?;
    let gamma = -delta.ln();
    let report = CapacityReport { n: ns, delta_n, delta, gamma, logcap: (-gamma).exp(), energy: eq.energy };
    Ok((report, runs))
}

/// `∫_p^q log|z−w| |dw|`.
fn panel_log_integral(z: Complex64, p: Complex64, q: Complex64) -> f64 {
    let len = (q - p).norm();
    let e = (q - p) / len;
    let u = e.conj() * (z - p);
    let v = u.im.abs();
    let phi = |x: f64| {
        let r2 = x * x + v * v;
        let log_term = if r2 > 0.0 { 0.5 * x * r2.ln() } else { 0.0 };
        let at = if v > 0.0 { v * (x / v).atan() } else { 0.0 };
        log_term - x + at
    };
    phi(len - u.re) - phi(-u.re)
}

/// Discrete equilibrium measure with its Robin constant.
#[derive(Debug, Clone, PartialEq)]
pub struct EquilibriumSolution {
    pub measure: WeightedMeasure,
    /// Value of the potential `2π V_K` on the support.
    pub gamma: f64,
    /// `wᵀAw/(4π)`.
    pub energy: f64,
    /// Largest deviation of `2π V_K` from `gamma` over the collocation points.
    pub potential_spread: f64,
    panels: Vec<(Complex64, Complex64)>,
    pole: Pole,
}

impl EquilibriumSolution {
    /// `V_K(z) = (1/2π)∫ k(z,w) dε_K(w)` with the panel densities.
    pub fn potential(&self, z: Complex64) -> f64 {
        let mut u = 0.0;
        for (w, &(p, q)) in self.measure.weights.iter().zip(&self.panels) {
            u += w * panel_kernel(z, p, q, self.pole);
        }
        u / (2.0 * PI)
    }
}

/// Panel average of `log(1/|z−w|) + log|z−a| + log|w−a|` (pole terms
/// dropped for `a = ∞`).
fn panel_kernel(z: Complex64, p: Complex64, q: Complex64, pole: Pole) -> f64 {
    let len = (q - p).norm();
    let mut k = -panel_log_integral(z, p, q) / len;
    if let Pole::Finite(a) = pole {
        k += (z - a).norm().ln() + panel_log_integral(a, p, q) / len;
    }
    k
}

fn project_simplex(v: &mut [f64]) {
    let mut u = v.to_vec();
    u.sort_by(|a, b| b.total_cmp(a));
    let mut cum = 0.0;
    let mut theta = 0.0;
    for (i, ui) in u.iter().enumerate() {
        cum += ui;
        let t = (cum - 1.0) / (i + 1) as f64;
        if ui - t > 0.0 {
            theta = t;
        }
    }
    for x in v.iter_mut() {
        *x = (*x - theta).max(0.0);
    }
}

/// Bordered KKT solve on the support `S`: `A_SS w = λ1`, `Σw = 1`.
fn kkt_polish(a: &DMatrix<f64>, w: &mut [f64]) -> Result<()> {
    let m = w.len();
    let mut support: Vec<usize> = (0..m).filter(|&i| w[i] > 1e-14).collect();
    for _ in 0..m {
        let s = support.len();
        let mut k = DMatrix::zeros(s + 1, s + 1);
        for (r, &i) in support.iter().enumerate() {
            for (col, &j) in support.iter().enumerate() {
                k[(r, col)] = a[(i, j)];
            }
            k[(r, s)] = -1.0;
            k[(s, r)] = 1.0;
        }
        let mut rhs = DVector::zeros(s + 1);
        rhs[s] = 1.0;
        let sol = k.lu().solve(&rhs).ok_or_else(|| Error::Solver("singular KKT system".into()))?;
        let negative: Vec<usize> = (0..s).filter(|&r| sol[r] < 0.0).collect();
        if negative.is_empty() {
            w.iter_mut().for_each(|x| *x = 0.0);
            for (r, &i) in support.iter().enumerate() {
                w[i] = sol[r];
            }
            return Ok(());
        }
        support = (0..s).filter(|r| !negative.contains(r)).map(|r| support[r]).collect();
        if support.is_empty() {
            return Err(Error::Convergence("empty support in KKT polish".into()));
        }
    }
    Err(Error::Convergence("KKT active set did not settle".into()))
}

/// Equilibrium measure of `set` (pole at infinity) on `m` panels.
pub fn equilibrium_measure(set: &CompactSet, m: usize) -> Result<EquilibriumSolution> {
    equilibrium_measure_with_pole(set, Pole::Infinity, m)
}

/// Equilibrium measure for the kernel `log(|z−a||w−a|/|z−w|)`, which
/// reduces to `log(1/|z−w|)` for `a = ∞`.
///
/// Panels are chords of the boundary polyline carrying constant density;
/// the kernel matrix collocates panel averages at chord midpoints. Weights
/// come from projected gradient on the simplex (step `1/L`), finished by an
/// active-set KKT solve.
pub fn equilibrium_measure_with_pole(set: &CompactSet, pole: Pole, m: usize) -> Result<EquilibriumSolution> {
    set.validate()?;
    set.check_pole(pole)?;
    if m < 32 {
        return Err(Error::Parameter(format!("need m ≥ 32 panels, got {m}")));
    }
    let verts = set.polyline(m);
    let mut panels: Vec<(Complex64, Complex64)> = verts.windows(2).map(|w| (w[0], w[1])).collect();
    if set.is_closed_curve() {
        panels.push((*verts.last().unwrap(), verts[0]));
    }
    let min_len = panels.iter().map(|(p, q)| (q - p).norm()).fold(f64::INFINITY, f64::min);
    if min_len < 1e-12 * set.diameter() {
        return Err(Error::Conditioning(format!("panel of length {min_len}")));
    }
    let np = panels.len();
    let mids: Vec<Complex64> = panels.iter().map(|(p, q)| 0.5 * (p + q)).collect();
    let raw = DMatrix::from_fn(np, np, |i, j| panel_kernel(mids[i], panels[j].0, panels[j].1, pole));
    let a = 0.5 * (&raw + raw.transpose());
    let lip = 2.0 * (0..np).map(|i| a.row(i).iter().map(|x| x.abs()).sum::<f64>()).fold(0.0, f64::max);
    let mut w = vec![1.0 / np as f64; np];
    let mut prev = f64::INFINITY;
    for _ in 0..10_000 {
        let wv = DVector::from_column_slice(&w);
        let g = &a * &wv;
        let obj = wv.dot(&g);
        if (prev - obj).abs() < 1e-15 * obj.abs().max(1.0) {
            break;
        }
        prev = obj;
        for i in 0..np {
            w[i] -= 2.0 * g[i] / lip;
        }
        project_simplex(&mut w);
    }
    kkt_polish(&a, &mut w)?;
    let wv = DVector::from_column_slice(&w);
    let u = &a * &wv;
    let quad = wv.dot(&u);
    let supp: Vec<usize> = (0..np).filter(|&i| w[i] > 0.0).collect();
    let spread = supp.iter().map(|&i| (u[i] - quad).abs()).fold(0.0, f64::max);
    let points = match set {
        CompactSet::Circle { r }
        | CompactSet::Disk { r }
        | CompactSet::ExteriorDisk { r }
        | CompactSet::Boundary { domain: DomainDescriptor::Disk { r } } => {
            mids.iter().map(|z| z * (r / z.norm())).collect()
        }
        _ => mids.clone(),
    };
    let total: f64 = w.iter().sum();
    w.iter_mut().for_each(|x| *x /= total);
    Ok(EquilibriumSolution {
        measure: WeightedMeasure::new(points, w)?,
        gamma: quad,
        energy: quad / (4.0 * PI),
        potential_spread: spread,
        panels,
        pole,
    })
}

/// Harmonic measure of `domain` seen from `a` (balayage of `δ_a` onto the
/// boundary).
///
/// Disk: closed-form Poisson density on `m` equispaced nodes. Half-plane:
/// `m` equal-mass nodes at the harmonic-measure quantiles. Rectangle: the
/// discrete flux of the finite-difference Green function at the boundary
/// nodes (the source is snapped to the nearest grid node; `m` is unused).
pub fn harmonic_measure(domain: &DomainDescriptor, a: Complex64, m: usize) -> Result<WeightedMeasure> {
    domain.validate()?;
    if !domain.contains(a) {
        return Err(Error::Domain { z: a, reason: "harmonic measure needs an interior point".into() });
    }
    match *domain {
        DomainDescriptor::Disk { r } => {
            if m < 8 {
                return Err(Error::Parameter(format!("need m ≥ 8 nodes, got {m}")));
            }
            let pts: Vec<Complex64> = (0..m).map(|k| r * (2.0 * PI * I * (k as f64 / m as f64)).exp()).collect();
            let s = r * r - a.norm_sqr();
            let w: Vec<f64> = pts.iter().map(|z| s / (m as f64 * (z - a).norm_sqr())).collect();
            let mass: f64 = w.iter().sum();
            if (mass - 1.0).abs() > 1e-10 {
                return Err(Error::Normalization(format!("disk harmonic measure mass {mass} with m = {m}")));
            }
            WeightedMeasure::new(pts, w.iter().map(|x| x / mass).collect())
        }
        DomainDescriptor::HalfPlane => {
            let pts = (0..m).map(|k| c(a.re + a.im * (PI * ((k as f64 + 0.5) / m as f64 - 0.5)).tan(), 0.0)).collect();
            WeightedMeasure::new(pts, vec![1.0 / m as f64; m])
        }
        DomainDescriptor::Rectangle { w, h, grid } => {
            let g = RectGrid::new(w, h, grid)?;
            let i = ((a.re / g.step).round() as usize).clamp(1, g.nx - 1);
            let j = ((a.im / g.step).round() as usize).clamp(1, g.ny - 1);
            let green = RectangleSolver::new(g)?.green((i, j))?;
            let mut pts = Vec::new();
            let mut wts = Vec::new();
            for i in 1..g.nx {
                pts.push(g.point(i, 0));
                wts.push(green.at(i, 1));
                pts.push(g.point(i, g.ny));
                wts.push(green.at(i, g.ny - 1));
            }
            for j in 1..g.ny {
                pts.push(g.point(0, j));
                wts.push(green.at(1, j));
                pts.push(g.point(g.nx, j));
                wts.push(green.at(g.nx - 1, j));
            }
            let mass: f64 = wts.iter().sum();
            if (mass - 1.0).abs() > 1e-4 {
                return Err(Error::Normalization(format!("rectangle harmonic measure mass {mass}")));
            }
            WeightedMeasure::new(pts, wts.iter().map(|x| x / mass).collect())
        }
        _ => Err(Error::Unsupported(format!("harmonic measure of {domain:?}"))),
    }
}

/// Largest `|U_μ(z) − log(1/|z−a|)|` over `probes` outside the closed domain.
pub fn balayage_defect(measure: &WeightedMeasure, a: Complex64, probes: &[Complex64]) -> f64 {
    probes.iter().map(|&z| (measure.log_potential(z) + (z - a).norm().ln()).abs()).fold(0.0, f64::max)
}

fn gamma_half_integer(twice: usize) -> f64 {
    // Γ(twice/2) by the recursion Γ(x+1) = xΓ(x)
    let (mut x, mut g) = if twice.is_multiple_of(2) { (1.0, 1.0) } else { (0.5, PI.sqrt()) };
    while 2.0 * x < twice as f64 {
        g *= x;
        x += 1.0;
    }
    g
}

/// Capacity of the spherical condenser `r < |x| < R` in `R^n`.
/// `R = ∞` is accepted for `n ≥ 3`.
pub fn condenser_capacity(r: f64, big_r: f64, n_dim: usize) -> Result<f64> {
    if !(r > 0.0 && r < big_r) {
        return Err(Error::Parameter(format!("need 0 < r < R, got r = {r}, R = {big_r}")));
    }
    match n_dim {
        0 | 1 => Err(Error::Parameter(format!("dimension {n_dim} < 2"))),
        2 if big_r.is_infinite() => Ok(0.0),
        2 => Ok(2.0 * PI / (big_r / r).ln()),
        n => {
            let sphere = 2.0 * PI.powf(n as f64 / 2.0) / gamma_half_integer(n);
            let e = 2.0 - n as f64;
            let outer = if big_r.is_infinite() { 0.0 } else { big_r.powf(e) };
            Ok((n as f64 - 2.0) * sphere / (r.powf(e) - outer))
        }
    }
}
