//! Weierstrass ℘, ℘′, ζ and the theta function θ1 for the lattice `Z + τZ`.
//!
//! Everything is evaluated from q-series in the nome `e^{iπτ}` after the
//! argument has been folded into the cell `|Re w| ≤ ½, |Im w| ≤ Im τ/2`.
//! Writing `a_n = e^{2πinτ}/(1 − e^{2πinτ})`:
//!
//! ```text
//! ℘(z) = −η1 + π²/sin²(πz) − 8π² Σ n a_n cos(2πnz)
//! ζ(z) = η1 z + π cot(πz) + 4π Σ a_n sin(2πnz)
//! η1   = π²/3 − 8π² Σ n a_n
//! ```
//!
//! `η2` is taken from an independent evaluation `2ζ(τ/2)`, so the Legendre
//! relation `η1τ − η2 = 2πi` remains a genuine check.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{c, Error, Result, I};

/// A lattice `Z + τZ` together with its classical constants.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TorusLattice {
    pub tau: Complex64,
    /// `e^{2πiτ}`
    pub q: Complex64,
    pub eta1: Complex64,
    pub eta2: Complex64,
    pub g2: Complex64,
    pub g3: Complex64,
    /// `℘(½)`
    pub e1: Complex64,
    /// `℘(½(1+τ))`
    pub e2: Complex64,
    /// `℘(τ/2)`
    pub e3: Complex64,
    #[serde(skip)]
    coef: Vec<Complex64>,
    #[serde(skip)]
    theta_terms: usize,
}

const MAX_TERMS: usize = 4000;

/// Smallest admissible `Im τ`.
pub const MIN_IM_TAU: f64 = 0.05;

impl TorusLattice {
    /// Build the lattice and all derived constants.
    pub fn new(tau: Complex64) -> Result<Self> {
        lattice_constants(tau)
    }

    fn im_tau(&self) -> f64 {
        self.tau.im
    }

    /// Fold `z` to `w = z − m − nτ` with `|Re w| ≤ ½`, `|Im w| ≤ Im τ/2`.
    pub fn reduce(&self, z: Complex64) -> (Complex64, i64, i64) {
        let n = (z.im / self.tau.im).round();
        let w = z - self.tau * n;
        let m = w.re.round();
        (w - m, m as i64, n as i64)
    }

    /// Legendre residual `|η1τ − η2 − 2πi|`.
    pub fn legendre_residual(&self) -> f64 {
        (self.eta1 * self.tau - self.eta2 - 2.0 * PI * I).norm()
    }

    fn check_pole(&self, z: Complex64, w: Complex64) -> Result<()> {
        if w.norm() < 1e-12 {
            Err(Error::Pole { z })
        } else {
            Ok(())
        }
    }

    /// `℘` on an already reduced argument.
    fn wp_reduced(&self, w: Complex64) -> Complex64 {
        let s = (PI * w).sin();
        let mut acc = -self.eta1 + PI * PI / (s * s);
        let e = (2.0 * PI * I * w).exp();
        let ei = 1.0 / e;
        let (mut pe, mut pei) = (e, ei);
        let mut sum = c(0.0, 0.0);
        for (k, a) in self.coef.iter().enumerate() {
            let n = (k + 1) as f64;
            sum += a * n * 0.5 * (pe + pei);
            pe *= e;
            pei *= ei;
        }
        acc -= 8.0 * PI * PI * sum;
        acc
    }

    fn wp_prime_reduced(&self, w: Complex64) -> Complex64 {
        let s = (PI * w).sin();
        let co = (PI * w).cos();
        let mut acc = -2.0 * PI.powi(3) * co / (s * s * s);
        let e = (2.0 * PI * I * w).exp();
        let ei = 1.0 / e;
        let (mut pe, mut pei) = (e, ei);
        let mut sum = c(0.0, 0.0);
        for (k, a) in self.coef.iter().enumerate() {
            let n = (k + 1) as f64;
            sum += a * (n * n) * (pe - pei) / (2.0 * I);
            pe *= e;
            pei *= ei;
        }
        acc += 16.0 * PI.powi(3) * sum;
        acc
    }

    fn zeta_reduced(&self, w: Complex64) -> Complex64 {
        let mut acc = self.eta1 * w + PI * (PI * w).cos() / (PI * w).sin();
        let e = (2.0 * PI * I * w).exp();
        let ei = 1.0 / e;
        let (mut pe, mut pei) = (e, ei);
        let mut sum = c(0.0, 0.0);
        for a in &self.coef {
            sum += a * (pe - pei) / (2.0 * I);
            pe *= e;
            pei *= ei;
        }
        acc += 4.0 * PI * sum;
        acc
    }

    fn theta1_reduced(&self, w: Complex64) -> Complex64 {
        let mut acc = c(0.0, 0.0);
        for n in 0..self.theta_terms {
            let nh = n as f64 + 0.5;
            let qn = (I * PI * self.tau * nh * nh).exp();
            let term = qn * ((2.0 * n as f64 + 1.0) * PI * w).sin();
            acc += if n % 2 == 0 { term } else { -term };
        }
        2.0 * acc
    }

    /// `θ1′(0)`.
    pub fn theta1_prime0(&self) -> Complex64 {
        let mut acc = c(0.0, 0.0);
        for n in 0..self.theta_terms {
            let nh = n as f64 + 0.5;
            let term = (I * PI * self.tau * nh * nh).exp() * (2.0 * n as f64 + 1.0);
            acc += if n % 2 == 0 { term } else { -term };
        }
        2.0 * PI * acc
    }

    /// `log|θ1(z)|`, stable for arguments far from the fundamental cell.
    pub fn log_abs_theta1(&self, z: Complex64) -> Result<f64> {
        let (w, _, n) = self.reduce(z);
        self.check_pole(z, w)?;
        let nf = n as f64;
        Ok(self.theta1_reduced(w).norm().ln() + PI * nf * nf * self.im_tau() + 2.0 * PI * nf * w.im)
    }
}

/// Lattice constants for `τ` with `Im τ ≥ 0.05`.
pub fn lattice_constants(tau: Complex64) -> Result<TorusLattice> {
    if !(tau.re.is_finite() && tau.im.is_finite()) {
        return Err(Error::Parameter(format!("non-finite tau {tau}")));
    }
    if tau.im < MIN_IM_TAU {
        return Err(Error::Conditioning(format!(
            "Im tau = {} below {MIN_IM_TAU}; q-series convergence not guaranteed",
            tau.im
        )));
    }
    let t = tau.im;
    let q2 = (2.0 * PI * I * tau).exp();
    let mut coef = Vec::new();
    let mut qn = q2;
    for n in 1..=MAX_TERMS {
        let a = qn / (1.0 - qn);
        let nf = n as f64;
        // worst-case size of n²·a_n·cos(2πnw) for |Im w| ≤ t/2
        if nf * nf * a.norm() * (PI * nf * t).exp() < 1e-18 {
            break;
        }
        coef.push(a);
        qn *= q2;
    }
    let mut theta_terms = 1;
    while theta_terms < MAX_TERMS {
        let nh = theta_terms as f64 + 0.5;
        // |q^{(n+½)²}|·|sin((2n+1)πw)| ≤ e^{−πt(n+½)²}·e^{(2n+1)πt/2}
        if (-PI * t * nh * nh + (2.0 * theta_terms as f64 + 1.0) * PI * t / 2.0).exp() < 1e-18 {
            break;
        }
        theta_terms += 1;
    }
    let sum_n: Complex64 = coef.iter().enumerate().map(|(k, a)| a * (k + 1) as f64).sum();
    let eta1 = PI * PI / 3.0 - 8.0 * PI * PI * sum_n;
    let mut lat = TorusLattice {
        tau,
        q: q2,
        eta1,
        eta2: c(0.0, 0.0),
        g2: c(0.0, 0.0),
        g3: c(0.0, 0.0),
        e1: c(0.0, 0.0),
        e2: c(0.0, 0.0),
        e3: c(0.0, 0.0),
        coef,
        theta_terms,
    };
    // τ/2 is already inside the folding window; evaluating unreduced keeps η2 out of it
    lat.eta2 = 2.0 * lat.zeta_reduced(0.5 * tau);
    lat.e1 = wp(c(0.5, 0.0), &lat)?;
    lat.e2 = wp(0.5 * (1.0 + tau), &lat)?;
    lat.e3 = wp(0.5 * tau, &lat)?;
    let (e1, e2, e3) = (lat.e1, lat.e2, lat.e3);
    lat.g2 = -4.0 * (e1 * e2 + e1 * e3 + e2 * e3);
    lat.g3 = 4.0 * e1 * e2 * e3;
    Ok(lat)
}

/// Weierstrass `℘(z)`.
pub fn wp(z: Complex64, l: &TorusLattice) -> Result<Complex64> {
    let (w, _, _) = l.reduce(z);
    l.check_pole(z, w)?;
    Ok(l.wp_reduced(w))
}

/// Derivative `℘′(z)`.
pub fn wp_prime(z: Complex64, l: &TorusLattice) -> Result<Complex64> {
    let (w, _, _) = l.reduce(z);
    l.check_pole(z, w)?;
    Ok(l.wp_prime_reduced(w))
}

/// Weierstrass `ζ(z)`, quasi-periodic: `ζ(z+1) = ζ(z)+η1`, `ζ(z+τ) = ζ(z)+η2`.
pub fn zeta_w(z: Complex64, l: &TorusLattice) -> Result<Complex64> {
    let (w, m, n) = l.reduce(z);
    l.check_pole(z, w)?;
    Ok(l.zeta_reduced(w) + l.eta1 * m as f64 + l.eta2 * n as f64)
}

/// Jacobi `θ1(z) = 2 Σ (−1)^n e^{iπτ(n+½)²} sin((2n+1)πz)`.
pub fn theta1(z: Complex64, l: &TorusLattice) -> Complex64 {
    let (w, m, n) = l.reduce(z);
    let nf = n as f64;
    let sign = if (m + n).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    // θ1(w + m + nτ) = (−1)^{m+n} e^{−iπτn²} e^{−2πinw} θ1(w)
    let factor = (-I * PI * l.tau * nf * nf - 2.0 * PI * I * nf * w).exp();
    l.theta1_reduced(w) * factor * sign
}
