//! Point vortices in the plane and in a disk: forces, velocities, stream
//! function, Kirchhoff–Routh energy and trajectory integration.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::numkit::{rk_integrate, RkOptions, Trajectory};
use crate::planar_green::{green, green_dz, DomainDescriptor};
use crate::{Error, Result, I};

/// Positions closer than this count as a collision.
pub const COLLISION_DISTANCE: f64 = 1e-10;

/// A step-size underflow with two vortices closer than this fraction of
/// their smallest initial separation is reported as a collision.
pub const COLLAPSE_RATIO: f64 = 1e-4;

fn min_separation(zs: &[Complex64]) -> f64 {
    let mut d = f64::INFINITY;
    for (j, z) in zs.iter().enumerate() {
        for w in &zs[j + 1..] {
            d = d.min((z - w).norm());
        }
    }
    d
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum VortexDomain {
    Plane,
    Disk {
        #[serde(rename = "R")]
        r: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Vortex {
    pub z: Complex64,
    pub gamma: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VortexSystem {
    pub domain: VortexDomain,
    pub vortices: Vec<Vortex>,
}

impl VortexDomain {
    fn descriptor(&self) -> Option<DomainDescriptor> {
        match *self {
            Self::Plane => None,
            Self::Disk { r } => Some(DomainDescriptor::Disk { r }),
        }
    }

    fn contains(&self, z: Complex64) -> bool {
        match *self {
            Self::Plane => z.re.is_finite() && z.im.is_finite(),
            Self::Disk { r } => z.norm() < r,
        }
    }

    /// `2∂_z` of `2πG(z,a)`.
    fn kernel_dz(&self, z: Complex64, a: Complex64) -> Result<Complex64> {
        match self.descriptor() {
            None => Ok(-1.0 / (z - a)),
            Some(d) => Ok(4.0 * PI * green_dz(&d, z, a)?),
        }
    }

    fn green(&self, z: Complex64, a: Complex64) -> Result<f64> {
        match self.descriptor() {
            None => Ok(-(z - a).norm().ln() / (2.0 * PI)),
            Some(d) => green(&d, z, a),
        }
    }

    /// Robin data `(h0, h1)`; zero in the plane.
    fn robin(&self, a: Complex64) -> (f64, Complex64) {
        match *self {
            Self::Plane => (0.0, Complex64::new(0.0, 0.0)),
            Self::Disk { r } => {
                let d = r * r - a.norm_sqr();
                ((d / r).ln(), -a.conj() / d)
            }
        }
    }
}

impl VortexSystem {
    pub fn new(domain: VortexDomain, vortices: Vec<Vortex>) -> Result<Self> {
        let s = Self { domain, vortices };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if let VortexDomain::Disk { r } = self.domain {
            if !(r > 0.0 && r.is_finite()) {
                return Err(Error::Parameter(format!("disk radius {r}")));
            }
        }
        if self.vortices.iter().any(|v| !v.gamma.is_finite()) {
            return Err(Error::Parameter("non-finite circulation".into()));
        }
        let zs: Vec<Complex64> = self.vortices.iter().map(|v| v.z).collect();
        check_configuration(&self.domain, &zs, 0.0)
    }

    pub fn positions(&self) -> Vec<Complex64> {
        self.vortices.iter().map(|v| v.z).collect()
    }

    pub fn strengths(&self) -> Vec<f64> {
        self.vortices.iter().map(|v| v.gamma).collect()
    }

    fn with_positions(&self, zs: &[Complex64]) -> Self {
        let vortices = self.vortices.iter().zip(zs).map(|(v, &z)| Vortex { z, gamma: v.gamma }).collect();
        Self { domain: self.domain, vortices }
    }
}

fn check_configuration(domain: &VortexDomain, zs: &[Complex64], time: f64) -> Result<()> {
    for (j, &z) in zs.iter().enumerate() {
        if !domain.contains(z) {
            return Err(Error::Domain { z, reason: "vortex outside the domain".into() });
        }
        if zs[j + 1..].iter().any(|w| (z - w).norm() < COLLISION_DISTANCE) {
            return Err(Error::Collision { time });
        }
    }
    Ok(())
}

/// Force on the vortex at `a` exerted by the one at `b`:
/// `(Γa Γb/2π)(a−b)/|a−b|²`. Equal signs repel.
pub fn pair_force(a: Complex64, b: Complex64, gamma_a: f64, gamma_b: f64) -> Result<Complex64> {
    let d = a - b;
    if d.norm() < COLLISION_DISTANCE {
        return Err(Error::Collision { time: 0.0 });
    }
    Ok(gamma_a * gamma_b / (2.0 * PI) * d / d.norm_sqr())
}

/// Force `−(Γ²/2π) conj(h1)` needed to hold a vortex in place.
pub fn bound_vortex_force(h1: Complex64, gamma: f64) -> Complex64 {
    -(gamma * gamma / (2.0 * PI)) * h1.conj()
}

/// `da/dt = (Γ/2πi) conj(h1) − iF/Γ`.
pub fn forced_vortex_velocity(h1: Complex64, gamma: f64, force: Complex64) -> Result<Complex64> {
    if gamma == 0.0 {
        return Err(Error::Parameter("forced motion needs Γ ≠ 0".into()));
    }
    Ok(gamma / (2.0 * PI * I) * h1.conj() - I * force / gamma)
}

/// `Γ_k h1^{(k)}`: the domain Robin term plus the regular influence of the
/// other vortices, kept multiplied by `Γ_k` so that passive tracers work.
fn weighted_h1(domain: &VortexDomain, zs: &[Complex64], gs: &[f64], k: usize) -> Result<Complex64> {
    let mut acc = gs[k] * domain.robin(zs[k]).1;
    for (j, (&z, &g)) in zs.iter().zip(gs).enumerate() {
        if j != k {
            acc += g * domain.kernel_dz(zs[k], z)?;
        }
    }
    Ok(acc)
}

fn velocities(domain: &VortexDomain, zs: &[Complex64], gs: &[f64], time: f64) -> Result<Vec<Complex64>> {
    check_configuration(domain, zs, time)?;
    (0..zs.len()).map(|k| Ok(weighted_h1(domain, zs, gs, k)?.conj() / (2.0 * PI * I))).collect()
}

/// Velocity of vortex `k`, `(Γ_k/2πi) conj(h1^{(k)})`.
pub fn free_vortex_velocity(system: &VortexSystem, k: usize) -> Result<Complex64> {
    if k >= system.vortices.len() {
        return Err(Error::Parameter(format!("no vortex with index {k}")));
    }
    let (zs, gs) = (system.positions(), system.strengths());
    check_configuration(&system.domain, &zs, 0.0)?;
    Ok(weighted_h1(&system.domain, &zs, &gs, k)?.conj() / (2.0 * PI * I))
}

/// `ψ(z) = Σ Γ_k G(z, z_k)`.
pub fn stream_function(system: &VortexSystem, z: Complex64) -> Result<f64> {
    let mut psi = 0.0;
    for v in &system.vortices {
        if (z - v.z).norm() < COLLISION_DISTANCE {
            return Err(Error::Pole { z });
        }
        psi += v.gamma * system.domain.green(z, v.z)?;
    }
    Ok(psi)
}

/// Kirchhoff–Routh energy `Σ_{j<k} Γ_jΓ_k G(z_j,z_k) + Σ (Γ_k²/4π) h0(z_k)`.
/// In the plane this is the discrete vortex energy.
pub fn kirchhoff_routh(system: &VortexSystem) -> Result<f64> {
    let vs = &system.vortices;
    let mut w = 0.0;
    for j in 0..vs.len() {
        for k in j + 1..vs.len() {
            if (vs[j].z - vs[k].z).norm() < COLLISION_DISTANCE {
                return Err(Error::Collision { time: 0.0 });
            }
            w += vs[j].gamma * vs[k].gamma * system.domain.green(vs[j].z, vs[k].z)?;
        }
        w += vs[j].gamma * vs[j].gamma / (4.0 * PI) * system.domain.robin(vs[j].z).0;
    }
    Ok(w)
}

/// Integrate the vortex dynamics to `t_end` with [`rk_integrate`].
///
/// Monitors: `energy` (Kirchhoff–Routh), `moment_re`/`moment_im`
/// (`Σ Γ_k z_k`) and `angular` (`Σ Γ_k |z_k|²`).
pub fn simulate(system: &VortexSystem, t_end: f64, tol: f64) -> Result<Trajectory> {
    system.validate()?;
    let gs = system.strengths();
    let domain = system.domain;
    let z0 = system.positions();
    let gap0 = min_separation(&z0);
    // Latest stage time and separation, to classify a step-size collapse.
    let mut last = (0.0, gap0);
    let traj = rk_integrate(
        |t, y| {
            last = (t, min_separation(y));
            velocities(&domain, y, &gs, t)
        },
        &z0,
        t_end,
        tol,
        RkOptions::default(),
    );
    let mut traj = match traj {
        Err(Error::Convergence(_)) if last.1 < COLLAPSE_RATIO * gap0 => return Err(Error::Collision { time: last.0 }),
        r => r?,
    };
    let mut energy = Vec::with_capacity(traj.states.len());
    let (mut mre, mut mim, mut ang) = (Vec::new(), Vec::new(), Vec::new());
    for (s, &t) in traj.states.iter().zip(&traj.times) {
        energy.push(kirchhoff_routh(&system.with_positions(s)).map_err(|e| match e {
            Error::Collision { .. } => Error::Collision { time: t },
            e => e,
        })?);
        let m: Complex64 = s.iter().zip(&gs).map(|(z, g)| z * g).sum();
        mre.push(m.re);
        mim.push(m.im);
        ang.push(s.iter().zip(&gs).map(|(z, g)| g * z.norm_sqr()).sum());
    }
    traj.monitors.insert("energy".into(), energy);
    traj.monitors.insert("moment_re".into(), mre);
    traj.monitors.insert("moment_im".into(), mim);
    traj.monitors.insert("angular".into(), ang);
    Ok(traj)
}

#[cfg(test)]
mod tests;
