use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Sampled solution of an autonomous or time-dependent ODE in `Cⁿ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<Vec<Complex64>>,
    /// Named scalar series aligned with `times` (energy, moments, ...).
    pub monitors: BTreeMap<String, Vec<f64>>,
}

impl Trajectory {
    pub fn last_state(&self) -> &[Complex64] {
        self.states.last().map(Vec::as_slice).unwrap_or(&[])
    }

    /// Largest deviation of a monitor from its initial value.
    pub fn monitor_drift(&self, name: &str) -> Option<f64> {
        let s = self.monitors.get(name)?;
        let s0 = *s.first()?;
        Some(s.iter().map(|v| (v - s0).abs()).fold(0.0, f64::max))
    }
}

/// Step-control settings for [`rk_integrate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RkOptions {
    pub initial_step: Option<f64>,
    pub max_steps: usize,
}

impl Default for RkOptions {
    fn default() -> Self {
        Self { initial_step: None, max_steps: 10_000_000 }
    }
}

// Dormand–Prince 5(4) tableau.
const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] =
    [5179.0 / 57600.0, 0.0, 7571.0 / 16695.0, 393.0 / 640.0, -92097.0 / 339200.0, 187.0 / 2100.0, 1.0 / 40.0];

/// Adaptive Dormand–Prince 5(4) integration of `y' = field(t, y)` from
/// `t = 0` to `t_end > 0`.
///
/// Each accepted step satisfies `|err_i| ≤ tol·(1 + |y_i|)` componentwise;
/// the step size follows a PI controller. The last step is clipped so the
/// final sample sits exactly at `t_end`. Errors raised by `field` (e.g. a
/// vortex collision) abort the integration.
pub fn rk_integrate<F>(mut field: F, state0: &[Complex64], t_end: f64, tol: f64, opts: RkOptions) -> Result<Trajectory>
where
    F: FnMut(f64, &[Complex64]) -> Result<Vec<Complex64>>,
{
    if !(1e-12..=1e-3).contains(&tol) {
        return Err(Error::Parameter(format!("tol {tol} outside [1e-12, 1e-3]")));
    }
    if !(t_end > 0.0 && t_end.is_finite()) {
        return Err(Error::Parameter(format!("t_end must be positive, got {t_end}")));
    }
    let dim = state0.len();
    let mut y = state0.to_vec();
    let mut t = 0.0;
    let mut traj = Trajectory { times: vec![0.0], states: vec![y.clone()], monitors: BTreeMap::new() };
    let mut k: Vec<Vec<Complex64>> = vec![vec![Complex64::new(0.0, 0.0); dim]; 7];
    k[0] = field(t, &y)?;
    let mut h = opts.initial_step.unwrap_or_else(|| {
        let vmax = k[0].iter().map(|v| v.norm()).fold(0.0, f64::max);
        let ymax = y.iter().map(|v| v.norm()).fold(0.0, f64::max);
        (0.01 * (1.0 + ymax) / vmax.max(1e-12) * tol.powf(0.2)).min(t_end)
    });
    let mut err_prev: f64 = 1e-4;
    let mut ytmp = vec![Complex64::new(0.0, 0.0); dim];
    let mut steps = 0usize;
    while t < t_end {
        steps += 1;
        if steps > opts.max_steps {
            return Err(Error::Convergence(format!("more than {} steps", opts.max_steps)));
        }
        let last = t + h >= t_end;
        if last {
            h = t_end - t;
        }
        for s in 1..7 {
            for i in 0..dim {
                let mut acc = y[i];
                for (j, kj) in k.iter().enumerate().take(s) {
                    acc += kj[i] * (h * A[s][j]);
                }
                ytmp[i] = acc;
            }
            k[s] = field(t + C[s] * h, &ytmp)?;
        }
        // ytmp now holds the 5th-order solution (FSAL row)
        let mut err: f64 = 0.0;
        for i in 0..dim {
            let mut e = Complex64::new(0.0, 0.0);
            for s in 0..7 {
                e += k[s][i] * (h * (B5[s] - B4[s]));
            }
            let sc = tol * (1.0 + y[i].norm().max(ytmp[i].norm()));
            err = err.max(e.norm() / sc);
        }
        if !err.is_finite() {
            return Err(Error::Convergence(format!("non-finite error estimate at t = {t}")));
        }
        if err <= 1.0 {
            t = if last { t_end } else { t + h };
            y.copy_from_slice(&ytmp);
            k[0] = k[6].clone();
            traj.times.push(t);
            traj.states.push(y.clone());
            let fac = 0.9 * err.max(1e-10).powf(-0.7 / 5.0) * err_prev.powf(0.4 / 5.0);
            h *= fac.clamp(0.2, 5.0);
            err_prev = err.max(1e-4);
        } else {
            h *= (0.9 * err.powf(-0.2)).clamp(0.1, 0.9);
        }
        if h < 1e-14 * t_end.max(1.0) {
            return Err(Error::Convergence(format!("step size underflow at t = {t}")));
        }
    }
    Ok(traj)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{c, I};
    use std::f64::consts::PI;

    #[test]
    fn circular_orbit_returns() {
        let tol = 1e-10;
        let tr = rk_integrate(|_, y| Ok(vec![I * y[0]]), &[c(1.0, 0.0)], 2.0 * PI, tol, RkOptions::default()).unwrap();
        assert!((tr.last_state()[0] - 1.0).norm() < 10.0 * tol);
        assert_eq!(*tr.times.last().unwrap(), 2.0 * PI);
        assert!(tr.times.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn linear_field_matches_exponential() {
        let tol = 1e-9;
        let lam = c(-0.3, 1.7);
        let tr = rk_integrate(|_, y| Ok(vec![lam * y[0]]), &[c(0.5, 0.5)], 3.0, tol, RkOptions::default()).unwrap();
        for (t, s) in tr.times.iter().zip(&tr.states) {
            let exact = c(0.5, 0.5) * (lam * t).exp();
            assert!((s[0] - exact).norm() < 10.0 * tol);
        }
    }

    #[test]
    fn field_errors_abort() {
        let r = rk_integrate(
            |t, _| if t > 0.5 { Err(Error::Collision { time: t }) } else { Ok(vec![c(1.0, 0.0)]) },
            &[c(0.0, 0.0)],
            1.0,
            1e-8,
            RkOptions::default(),
        );
        assert!(matches!(r, Err(Error::Collision { .. })));
    }
}
