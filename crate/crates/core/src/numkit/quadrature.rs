use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;

use crate::{c, Error, Result, I};

/// Gauss–Legendre nodes and weights on [−1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
    if n == 1 {
        return (vec![0.0], vec![2.0]);
    }
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            // p1 = P_n(z), p0 = P_{n-1}(z)
            dp = nf * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

/// Smooth closed curve `t ∈ [0,1) ↦ (z(t), z'(t))`.
#[derive(Clone)]
pub struct Curve {
    param: Arc<dyn Fn(f64) -> (Complex64, Complex64) + Send + Sync>,
    /// +1 counterclockwise, −1 clockwise.
    pub orientation: i8,
    /// Default number of trapezoid nodes.
    pub sample_count: usize,
}

impl std::fmt::Debug for Curve {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Curve")
            .field("orientation", &self.orientation)
            .field("sample_count", &self.sample_count)
            .finish_non_exhaustive()
    }
}

impl Curve {
    /// Curve from a parametrization returning point and derivative.
    pub fn new<F>(param: F, orientation: i8, sample_count: usize) -> Result<Self>
    where
        F: Fn(f64) -> (Complex64, Complex64) + Send + Sync + 'static,
    {
        if orientation != 1 && orientation != -1 {
            return Err(Error::Parameter("orientation must be +1 or -1".into()));
        }
        if sample_count == 0 {
            return Err(Error::Parameter("sample_count must be positive".into()));
        }
        Ok(Self { param: Arc::new(param), orientation, sample_count })
    }

    /// Counterclockwise circle.
    pub fn circle(center: Complex64, radius: f64) -> Self {
        let p = move |t: f64| {
            let e = Complex64::from_polar(1.0, 2.0 * PI * t);
            (center + radius * e, 2.0 * PI * I * radius * e)
        };
        Self { param: Arc::new(p), orientation: 1, sample_count: 256 }
    }

    /// Straight segment from `a` to `b`. The trapezoid rule is only
    /// accurate on it for integrands periodic along the segment, which is
    /// the case for cycles of a torus.
    pub fn segment(a: Complex64, b: Complex64) -> Self {
        let p = move |t: f64| (a + (b - a) * t, b - a);
        Self { param: Arc::new(p), orientation: 1, sample_count: 256 }
    }

    /// Point and velocity at parameter `t`, ignoring orientation.
    pub fn eval(&self, t: f64) -> (Complex64, Complex64) {
        (self.param)(t)
    }
}

fn finite_or(node: usize, z: Complex64, v: Complex64) -> Result<Complex64> {
    if v.re.is_finite() && v.im.is_finite() {
        Ok(v)
    } else {
        Err(Error::Evaluation { node, z })
    }
}

/// Trapezoid-rule value of `∮ f(z) dz` along `curve` with `n` nodes.
pub fn contour_integral<F>(f: F, curve: &Curve, n: usize) -> Result<Complex64>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    if n < 16 {
        return Err(Error::Parameter(format!("contour_integral needs n >= 16, got {n}")));
    }
    let mut s = Complex64::new(0.0, 0.0);
    for j in 0..n {
        let (z, dz) = curve.eval(j as f64 / n as f64);
        s += finite_or(j, z, f(z)?)? * dz;
    }
    Ok(s * (curve.orientation as f64) / n as f64)
}

/// Gauss–Legendre value of `∫ f(z) dz` along the straight segment from `a` to `b`.
pub fn line_integral<F>(f: F, a: Complex64, b: Complex64, n: usize) -> Result<Complex64>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    let (x, w) = gauss_legendre(n);
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let mut s = Complex64::new(0.0, 0.0);
    for (j, (&xj, &wj)) in x.iter().zip(&w).enumerate() {
        let z = mid + half * xj;
        s += finite_or(j, z, f(z)?)? * wj;
    }
    Ok(s * half)
}

/// Trapezoid value of `∫ f(z) dz` from `a` to `b` for integrands that are
/// periodic along the segment (cycles on a torus); spectrally accurate.
pub fn periodic_line_integral<F>(f: F, a: Complex64, b: Complex64, n: usize) -> Result<Complex64>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    if n < 2 {
        return Err(Error::Parameter("need at least 2 nodes".into()));
    }
    let d = b - a;
    let mut s = Complex64::new(0.0, 0.0);
    for j in 0..n {
        let z = a + d * (j as f64 / n as f64);
        s += finite_or(j, z, f(z)?)?;
    }
    Ok(s * d / n as f64)
}

/// Integration region for [`area_quadrature`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Region {
    Disk {
        center: Complex64,
        radius: f64,
    },
    Rectangle {
        x0: f64,
        x1: f64,
        y0: f64,
        y1: f64,
    },
    /// `{origin + s·e1 + t·e2 : s, t ∈ [0,1]}`
    Parallelogram {
        origin: Complex64,
        e1: Complex64,
        e2: Complex64,
    },
    /// The Riemann sphere in the stereographic chart; integrates against
    /// the spherical area `4 dxdy/(1+|z|²)²` instead of `dxdy`.
    Sphere,
}

/// Quadrature value with an error estimate from a half-resolution rerun.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: Complex64,
    pub error: f64,
}

type ParamFn<'a> = dyn Fn(f64, f64) -> Result<Complex64> + 'a;

struct Engine<'a> {
    g: &'a ParamFn<'a>,
    x: Vec<f64>,
    w: Vec<f64>,
    node: std::cell::Cell<usize>,
}

impl Engine<'_> {
    fn eval(&self, s: f64, t: f64) -> Result<Complex64> {
        let v = (self.g)(s, t)?;
        let k = self.node.get();
        self.node.set(k + 1);
        finite_or(k, c(s, t), v)
    }

    /// Tensor Gauss–Legendre on [s0,s1]×[t0,t1].
    fn tensor(&self, s0: f64, s1: f64, t0: f64, t1: f64) -> Result<Complex64> {
        let (hs, ms) = (0.5 * (s1 - s0), 0.5 * (s1 + s0));
        let (ht, mt) = (0.5 * (t1 - t0), 0.5 * (t1 + t0));
        let mut acc = Complex64::new(0.0, 0.0);
        for (xi, wi) in self.x.iter().zip(&self.w) {
            for (xj, wj) in self.x.iter().zip(&self.w) {
                acc += self.eval(ms + hs * xi, mt + ht * xj)? * (wi * wj);
            }
        }
        Ok(acc * hs * ht)
    }

    /// Triangle (p, q, r) with an integrable point singularity at `p`:
    /// Duffy collapse plus quadratic grading toward the vertex.
    fn duffy(&self, p: (f64, f64), q: (f64, f64), r: (f64, f64)) -> Result<Complex64> {
        let (ax, ay) = (q.0 - p.0, q.1 - p.1);
        let (bx, by) = (r.0 - q.0, r.1 - q.1);
        let area2 = (ax * by - ay * bx).abs();
        if area2 < 1e-300 {
            return Ok(Complex64::new(0.0, 0.0));
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for (xi, wi) in self.x.iter().zip(&self.w) {
            let t = 0.5 * (xi + 1.0);
            let u = t * t;
            for (xj, wj) in self.x.iter().zip(&self.w) {
                let v = 0.5 * (xj + 1.0);
                let s = p.0 + u * (ax + v * bx);
                let tt = p.1 + u * (ay + v * by);
                acc += self.eval(s, tt)? * (wi * wj * 2.0 * t * u);
            }
        }
        Ok(acc * (0.25 * area2))
    }

    fn rect(&self, s0: f64, s1: f64, t0: f64, t1: f64, sing: &[(f64, f64)]) -> Result<Complex64> {
        let tol = 1e-14 * (1.0 + (s1 - s0).abs() + (t1 - t0).abs());
        let inside: Vec<(f64, f64)> = sing
            .iter()
            .copied()
            .filter(|&(s, t)| s >= s0 - tol && s <= s1 + tol && t >= t0 - tol && t <= t1 + tol)
            .collect();
        match inside.len() {
            0 => self.tensor(s0, s1, t0, t1),
            1 => {
                let p = (inside[0].0.clamp(s0, s1), inside[0].1.clamp(t0, t1));
                let corners = [(s0, t0), (s1, t0), (s1, t1), (s0, t1)];
                let mut acc = Complex64::new(0.0, 0.0);
                for k in 0..4 {
                    acc += self.duffy(p, corners[k], corners[(k + 1) % 4])?;
                }
                Ok(acc)
            }
            _ => {
                let (p, q) = (inside[0], inside[1]);
                if (p.0 - q.0).abs() >= (p.1 - q.1).abs() && (p.0 - q.0).abs() > tol {
                    let m = 0.5 * (p.0 + q.0);
                    Ok(self.rect(s0, m, t0, t1, &inside)? + self.rect(m, s1, t0, t1, &inside)?)
                } else if (p.1 - q.1).abs() > tol {
                    let m = 0.5 * (p.1 + q.1);
                    Ok(self.rect(s0, s1, t0, m, &inside)? + self.rect(s0, s1, m, t1, &inside)?)
                } else {
                    // coincident declarations
                    let mut dedup = inside.clone();
                    dedup.remove(1);
                    self.rect(s0, s1, t0, t1, &dedup)
                }
            }
        }
    }
}

fn param_integral(g: &ParamFn<'_>, rect: [f64; 4], m: usize, sing: &[(f64, f64)]) -> Result<Complex64> {
    let (x, w) = gauss_legendre(m);
    let e = Engine { g, x, w, node: std::cell::Cell::new(0) };
    e.rect(rect[0], rect[1], rect[2], rect[3], sing)
}

/// `∫ f dxdy` over `region` (spherical area for [`Region::Sphere`]).
///
/// `resolution` is the number of Gauss–Legendre nodes per direction and
/// per panel. Points in `singular` mark integrable point singularities
/// (logarithmic or `1/r`); the region is split so that each sits at a
/// vertex of a Duffy triangle. The error estimate compares against a
/// run at half resolution.
pub fn area_quadrature<F>(f: F, region: &Region, resolution: usize, singular: &[Complex64]) -> Result<Quadrature>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    if resolution < 4 {
        return Err(Error::Parameter("area_quadrature needs resolution >= 4".into()));
    }
    let (g, rect, sing): (Box<ParamFn<'_>>, [f64; 4], Vec<(f64, f64)>) = match *region {
        Region::Rectangle { x0, x1, y0, y1 } => {
            if !(x1 > x0 && y1 > y0) {
                return Err(Error::Parameter("degenerate rectangle".into()));
            }
            let sing = singular.iter().map(|z| (z.re, z.im)).collect();
            (Box::new(|s, t| f(c(s, t))), [x0, x1, y0, y1], sing)
        }
        Region::Parallelogram { origin, e1, e2 } => {
            let jac = (e1.re * e2.im - e1.im * e2.re).abs();
            if jac == 0.0 {
                return Err(Error::Parameter("degenerate parallelogram".into()));
            }
            // solve origin + s e1 + t e2 = z
            let sing = singular
                .iter()
                .map(|z| {
                    let d = z - origin;
                    let det = e1.re * e2.im - e1.im * e2.re;
                    ((d.re * e2.im - d.im * e2.re) / det, (e1.re * d.im - e1.im * d.re) / det)
                })
                .collect();
            (Box::new(move |s, t| Ok(f(origin + e1 * s + e2 * t)? * jac)), [0.0, 1.0, 0.0, 1.0], sing)
        }
        Region::Disk { center, radius } => {
            if !(radius > 0.0) {
                return Err(Error::Parameter("disk radius must be positive".into()));
            }
            let sing = singular
                .iter()
                .map(|z| {
                    let d = z - center;
                    let th = d.im.atan2(d.re);
                    (d.norm(), if th < 0.0 { th + 2.0 * PI } else { th })
                })
                .collect();
            (
                Box::new(move |r, th| Ok(f(center + Complex64::from_polar(r, th))? * r)),
                [0.0, radius, 0.0, 2.0 * PI],
                sing,
            )
        }
        Region::Sphere => {
            let sing = singular
                .iter()
                .map(|z| {
                    let th = z.im.atan2(z.re);
                    (2.0 * z.norm().atan(), if th < 0.0 { th + 2.0 * PI } else { th })
                })
                .collect();
            (
                Box::new(move |th, ph| {
                    let z = Complex64::from_polar((0.5 * th).tan(), ph);
                    Ok(f(z)? * th.sin())
                }),
                [0.0, PI, 0.0, 2.0 * PI],
                sing,
            )
        }
    };
    let fine = param_integral(&*g, rect, resolution, &sing)?;
    let coarse = param_integral(&*g, rect, (resolution / 2).max(2), &sing)?;
    Ok(Quadrature { value: fine, error: (fine - coarse).norm() })
}
