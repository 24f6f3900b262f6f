//! Residual table behind `potkit verify`.

use std::f64::consts::PI;

use clap::ValueEnum;
use potkit::elliptic::{wp, wp_prime, TorusLattice};
use potkit::equilibrium::{
    balayage_defect, equilibrium_measure, harmonic_measure, transfinite_diameter, CompactSet, Pole,
};
use potkit::hadamard::{hadamard_delta_green, hadamard_delta_h0, triple_green, BoundaryVariation, NormalSpeed};
use potkit::numkit::laplacian_richardson;
use potkit::planar_green::{bergman_disk, green, h1_contour, poisson_value, robin_data, DomainDescriptor};
use potkit::schottky::{
    capacity_functions, capacity_functions_disk, kernel_periods, kkl_combinations, reproducing_check,
    strip_area_integral, strip_bergman_kernels, StripDouble, StripKernel,
};
use potkit::surface::{
    sphere_expansion, sphere_green, sphere_green_mean, sphere_lambda_sq, sphere_mutual_energy, torus_green_mean,
    torus_harmonic_basis, torus_monopole_green, TorusSpec,
};
use potkit::vortex::{simulate, Vortex, VortexDomain, VortexSystem};
use potkit::{Complex64, Result, I};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Planar,
    Surface,
    Schottky,
    All,
}

#[derive(Debug, Clone, Serialize)]
pub struct Row {
    pub identity: String,
    /// The relation being checked, written out.
    pub relation: String,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

struct Table {
    rows: Vec<Row>,
    scale: f64,
}

impl Table {
    fn push(&mut self, identity: &str, relation: &str, check: Result<f64>, tolerance: f64) {
        let tolerance = tolerance * self.scale;
        let residual = check.unwrap_or(f64::INFINITY);
        self.rows.push(Row {
            identity: identity.into(),
            relation: relation.into(),
            residual,
            tolerance,
            pass: residual <= tolerance,
        });
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Deterministic interior points of the unit disk (golden-angle spiral).
fn disk_samples(n: usize, rmax: f64) -> impl Iterator<Item = Complex64> {
    let golden = PI * (3.0 - 5f64.sqrt());
    (0..n).map(move |k| Complex64::from_polar(rmax * ((k as f64 + 0.5) / n as f64).sqrt(), golden * k as f64))
}

fn max_over<I, F>(it: I, f: F) -> Result<f64>
where
    I: IntoIterator,
    F: Fn(I::Item) -> Result<f64>,
{
    it.into_iter().try_fold(0.0f64, |m, x| f(x).map(|v| m.max(v)))
}

pub fn run(suite: Suite, scale: f64) -> Vec<Row> {
    let mut t = Table { rows: Vec::new(), scale };
    if matches!(suite, Suite::Planar | Suite::All) {
        planar(&mut t);
    }
    if matches!(suite, Suite::Surface | Suite::All) {
        surface(&mut t);
    }
    if matches!(suite, Suite::Schottky | Suite::All) {
        schottky(&mut t);
    }
    t.rows
}

fn planar(t: &mut Table) {
    let disk = DomainDescriptor::Disk { r: 1.0 };

    t.push(
        "PoissonReZ3",
        "Poisson integral of Re z^3 on |z|=1 equals Re a^3",
        max_over(disk_samples(10, 0.9), |a| {
            Ok((poisson_value(|z| (z * z * z).re, a, 1.0, 512)? - (a * a * a).re).abs())
        }),
        1e-10,
    );
    t.push(
        "h1Contour",
        "contour integral of 2 d_z G(z,a) equals -conj(a)/(1-|a|^2) on the unit disk",
        max_over(disk_samples(20, 0.9), |a| {
            Ok((h1_contour(&disk, a, 512)?.value - (-a.conj() / (1.0 - a.norm_sqr()))).norm())
        }),
        1e-8,
    );
    t.push(
        "Deltah0K",
        "Laplacian of h0 plus 4 pi K(a,a) vanishes on the unit disk",
        max_over(disk_samples(8, 0.6), |a| {
            let lap = laplacian_richardson(|z| robin_data(&disk, z).map(|e| e.h0), a, 1e-3)?;
            Ok((lap + 4.0 * PI * bergman_disk(a, a).re).abs())
        }),
        1e-8,
    );
    t.push(
        "GreenSymmetry",
        "G(z,a) = G(a,z) on the unit disk and the half-plane",
        max_over(disk_samples(12, 0.9).zip(disk_samples(13, 0.8).skip(1)), |(z, a)| {
            let hp = DomainDescriptor::HalfPlane;
            let (zh, ah) = (z + c(0.0, 1.0), a + c(0.3, 1.0));
            Ok((green(&disk, z, a)? - green(&disk, a, z)?).abs().max((green(&hp, zh, ah)? - green(&hp, ah, zh)?).abs()))
        }),
        1e-12,
    );
    t.push(
        "RobinSandwich",
        "log d(a) <= h0(a) <= log 2d(a) (convex) or log 4d(a) (slit plane)",
        (|| {
            let kinds = [
                (DomainDescriptor::Disk { r: 1.0 }, c(0.0, 0.0)),
                (DomainDescriptor::HalfPlane, c(0.0, 1.0)),
                (DomainDescriptor::SlitPlane, c(-1.0, 0.5)),
            ];
            let mut worst = 0.0f64;
            for (d, shift) in &kinds {
                for a in disk_samples(50, 0.95) {
                    let a = a + shift;
                    let h0 = robin_data(d, a)?.h0;
                    let dist = d.boundary_distance(a);
                    let upper = if d.is_convex() { (2.0 * dist).ln() } else { (4.0 * dist).ln() };
                    worst = worst.max(dist.ln() - h0).max(h0 - upper);
                }
            }
            Ok(worst.max(0.0))
        })(),
        1e-12,
    );

    let circle = transfinite_diameter(&CompactSet::Circle { r: 1.0 }, Pole::Infinity, 32);
    let segment = transfinite_diameter(&CompactSet::Segment { length: 2.0 }, Pole::Infinity, 32);
    t.push(
        "LogcapCircle",
        "extrapolated transfinite diameter of |z|=1 equals 1",
        circle.as_ref().map(|r| (r.logcap - 1.0).abs()).map_err(Clone::clone),
        5e-3,
    );
    t.push(
        "LogcapSegment",
        "extrapolated transfinite diameter of [-1,1] equals 1/2",
        segment.as_ref().map(|r| (r.logcap - 0.5).abs()).map_err(Clone::clone),
        1e-2,
    );
    t.push(
        "CapacityEnergy",
        "logcap = delta = exp(-4 pi E) for the circle and the segment",
        (|| {
            let mut worst = 0.0f64;
            for r in [&circle, &segment] {
                let r = r.as_ref().map_err(Clone::clone)?;
                let e = (-4.0 * PI * r.energy).exp();
                worst = worst.max((r.logcap - r.delta).abs()).max((r.logcap - e).abs());
            }
            Ok(worst)
        })(),
        1e-2,
    );
    t.push(
        "EquilibriumSegment",
        "Robin constant of [-1,1] equals log 2",
        equilibrium_measure(&CompactSet::Segment { length: 2.0 }, 256).map(|s| (s.gamma - 2f64.ln()).abs()),
        1e-3,
    );
    t.push(
        "HarmonicMeasureMass",
        "harmonic measure of the unit disk at a is a probability measure",
        max_over(disk_samples(6, 0.8), |a| Ok((harmonic_measure(&disk, a, 512)?.total_mass() - 1.0).abs())),
        1e-10,
    );
    t.push(
        "Balayage",
        "swept measure has the log potential of the point mass outside the disk",
        (|| {
            let a = c(0.3, -0.2);
            let mu = harmonic_measure(&disk, a, 512)?;
            let probes: Vec<Complex64> =
                (0..16).map(|k| Complex64::from_polar(1.5 + 0.1 * k as f64, k as f64)).collect();
            Ok(balayage_defect(&mu, a, &probes))
        })(),
        1e-8,
    );
    t.push(
        "HadamardDilation",
        "dG(0,1/2) under R -> R + eps equals 1/(2 pi), both sides",
        (|| {
            let v = BoundaryVariation::new(disk.clone(), NormalSpeed::Dilation, 1e-4)?;
            let (lhs, rhs) = hadamard_delta_green(&v, c(0.0, 0.0), c(0.5, 0.0), 512)?;
            let exact = 1.0 / (2.0 * PI);
            Ok((lhs - exact).abs().max((rhs - exact).abs()))
        })(),
        1e-6,
    );
    t.push(
        "HadamardRobin",
        "finite-difference variation of h0 matches the boundary integral",
        (|| {
            let v = BoundaryVariation::new(disk.clone(), NormalSpeed::fourier(2, 0.3, -0.2), 1e-4)?;
            let (lhs, rhs) = hadamard_delta_h0(&v, c(0.2, 0.1), 512)?;
            Ok((lhs - rhs).abs())
        })(),
        1e-5,
    );
    t.push(
        "TripleSymmetry",
        "G(a,b,c) is invariant under permutations of its arguments",
        (|| {
            let (a, b, w) = (c(0.1, 0.2), c(-0.3, 0.4), c(0.5, -0.1));
            let g = triple_green(a, b, w, 512)?;
            Ok((g - triple_green(b, w, a, 512)?).abs().max((g - triple_green(w, a, b, 512)?).abs()))
        })(),
        1e-10,
    );

    let sys = |domain, vs: &[(Complex64, f64)]| {
        VortexSystem::new(domain, vs.iter().map(|&(z, gamma)| Vortex { z, gamma }).collect())
    };
    t.push(
        "VortexPairTranslation",
        "opposite pair at distance 1 moves 10/(2 pi) in time 10",
        (|| {
            let tr = simulate(&sys(VortexDomain::Plane, &[(c(0.0, 0.0), 1.0), (c(1.0, 0.0), -1.0)])?, 10.0, 1e-10)?;
            Ok(((tr.last_state()[0]).norm() - 10.0 / (2.0 * PI)).abs())
        })(),
        1e-6,
    );
    t.push(
        "VortexPairReturn",
        "equal pair at distance 1 returns after 2 pi^2",
        (|| {
            let tr =
                simulate(&sys(VortexDomain::Plane, &[(c(-0.5, 0.0), 1.0), (c(0.5, 0.0), 1.0)])?, 2.0 * PI * PI, 1e-11)?;
            let s = tr.last_state();
            Ok((s[0] - c(-0.5, 0.0)).norm().max((s[1] - c(0.5, 0.0)).norm()))
        })(),
        1e-6,
    );
    t.push(
        "VortexDiskRadius",
        "single vortex in the unit disk keeps |z| = 1/2",
        (|| {
            let tr = simulate(&sys(VortexDomain::Disk { r: 1.0 }, &[(c(0.5, 0.0), 1.0)])?, 3.0 * PI * PI, 1e-12)?;
            Ok(tr.states.iter().map(|s| (s[0].norm() - 0.5).abs()).fold(0.0, f64::max))
        })(),
        1e-9,
    );
}

fn surface(t: &mut Table) {
    t.push(
        "Legendre",
        "eta1 tau - eta2 = 2 pi i",
        max_over([c(0.0, 1.5), c(0.0, 2.0), c(0.0, 3.0), c(0.3, 2.0)], |tau| {
            Ok(TorusLattice::new(tau)?.legendre_residual())
        }),
        1e-12,
    );
    t.push(
        "WeierstrassODE",
        "wp'^2 = 4 wp^3 - g2 wp - g3",
        (|| {
            let l = TorusLattice::new(c(0.0, 2.0))?;
            max_over((0..40).map(|k| c(-0.45 + 0.0225 * k as f64, 0.25 + 0.03 * k as f64)), |z| {
                let (p, dp) = (wp(z, &l)?, wp_prime(z, &l)?);
                Ok((dp * dp - (4.0 * p * p * p - l.g2 * p - l.g3)).norm())
            })
        })(),
        1e-9,
    );
    let spec = TorusSpec::new(c(0.0, 2.0));
    t.push(
        "TorusLaplacian",
        "Laplacian of the monopole Green function equals 4/Im tau away from the pole",
        spec.as_ref().map_err(Clone::clone).and_then(|spec| {
            let a = c(0.1, 0.2);
            max_over([c(0.6, 1.1), c(-0.3, 0.9), c(0.4, -0.6)], |z| {
                let lap = laplacian_richardson(|u| torus_monopole_green(u, a, spec), z, 1e-3)?;
                Ok((lap / 4.0 - 1.0 / 8.0).abs())
            })
        }),
        1e-5,
    );
    t.push(
        "TorusMean",
        "monopole Green function has zero mean",
        spec.as_ref().map_err(Clone::clone).and_then(|s| Ok(torus_green_mean(c(0.1, 0.2), s, 32)?.value.norm())),
        1e-6,
    );
    t.push(
        "TorusSymmetry",
        "G(z,a) = G(a,z) on the torus",
        spec.as_ref().map_err(Clone::clone).and_then(|s| {
            max_over(disk_samples(20, 0.9).zip(disk_samples(21, 0.9)), |(z, a)| {
                let (z, a) = (z + c(0.0, 1.0), a * I + c(0.0, 1.0));
                Ok((torus_monopole_green(z, a, s)? - torus_monopole_green(a, z, s)?).abs())
            })
        }),
        1e-10,
    );
    t.push(
        "PeriodMatrices",
        "PQ - I - R^2 = 0 for tau = 0.3 + 2i",
        TorusSpec::new(c(0.3, 2.0)).and_then(|s| Ok(torus_harmonic_basis(&s)?.periods.pq_residual())),
        1e-10,
    );
    t.push(
        "HolomorphicBasis",
        "Q^-1 (R^T + i) omega_alpha + omega_beta = 0",
        TorusSpec::new(c(0.3, 2.0)).and_then(|s| Ok(torus_harmonic_basis(&s)?.uqru_residual())),
        1e-12,
    );
    t.push(
        "SphereDeltah0",
        "Laplacian of h0 equals the metric density on the sphere",
        max_over(disk_samples(10, 1.5), |a| {
            let l = laplacian_richardson(|z| sphere_expansion(z).map(|e| e.h0), a, 1e-3)?;
            Ok((l - sphere_lambda_sq(a)).abs())
        }),
        1e-6,
    );
    t.push(
        "SphereMean",
        "monopole Green function on the sphere has zero mean",
        sphere_green_mean(c(0.7, -0.4), 32).map(|q| q.value.norm()),
        1e-6,
    );
    t.push(
        "SphereMutualEnergy",
        "mutual energy of two point masses equals G(a,b)",
        (|| {
            let (a, b) = (c(0.3, 0.2), c(-0.5, 0.6));
            Ok((sphere_mutual_energy(a, b, 40)?.value.re - sphere_green(a, b)?).abs())
        })(),
        1e-3,
    );
}

fn schottky(t: &mut Table) {
    let dbl = StripDouble::new(c(0.0, 2.0), 0.0);
    let a = c(-0.25, 0.5);
    let with = |f: &dyn Fn(&StripDouble) -> Result<f64>| dbl.as_ref().map_err(Clone::clone).and_then(f);
    let strip_points =
        || (0..24).map(|k| c(-0.05 - 0.4 * ((k * 7 % 24) as f64 + 0.5) / 24.0, 2.0 * (k as f64 + 0.5) / 24.0));

    t.push(
        "KernelPeriods",
        "K_electro has periods (0, 2i) and K_hydro has periods (-1, 0)",
        with(&|d| {
            let p = kernel_periods(a, d, 256)?;
            Ok(p.electro_alpha
                .norm()
                .max((p.electro_beta - 2.0 * I).norm())
                .max((p.hydro_alpha + 1.0).norm())
                .max(p.hydro_beta.norm()))
        }),
        1e-8,
    );
    t.push(
        "KKH",
        "(K_electro - 2 K_double) - K_hydro = 0 exactly",
        with(&|d| {
            max_over(strip_points(), |z| {
                let (ke, kh, kd) = strip_bergman_kernels(z, a, d)?;
                Ok(((ke - 2.0 * kd) - kh).norm())
            })
        }),
        0.0,
    );
    t.push(
        "KKL",
        "K_electro = L + K_double and K_hydro = L - K_double, with L taken at the reflected point",
        with(&|d| {
            max_over(strip_points(), |z| {
                let r = kkl_combinations(z, a, d)?;
                Ok(r.electro.max(r.hydro).max(r.sum).max(r.difference))
            })
        }),
        1e-10,
    );
    t.push(
        "HydroReproducing",
        "K_hydro reproduces exp(2 pi i z / tau) dz",
        with(&|d| {
            let tau = d.tau();
            let f = move |z: Complex64| Ok(2.0 * PI * I / tau * (2.0 * PI * I * z / tau).exp());
            max_over([c(-0.25, 0.5), c(-0.1, 1.2), c(-0.4, 1.8)], |b| {
                Ok((reproducing_check(StripKernel::Hydro, f, b, d, 64)?.value - f(b)?).norm())
            })
        }),
        1e-6,
    );
    t.push(
        "ElectroReproducing",
        "K_electro reproduces dz",
        with(&|d| Ok((reproducing_check(StripKernel::Electro, |_| Ok(c(1.0, 0.0)), a, d, 64)?.value - 1.0).norm())),
        1e-6,
    );
    t.push(
        "Orthogonality",
        "K_double(.,b) is orthogonal to K_hydro(.,b) over the strip",
        with(&|d| {
            let b = c(-0.3, 1.4);
            Ok(strip_area_integral(
                |z| {
                    let (_, kh, kd) = strip_bergman_kernels(z, b, d)?;
                    Ok(kd * kh.conj())
                },
                d,
                64,
            )?
            .value
            .norm())
        }),
        1e-8,
    );
    t.push(
        "CapacityChain",
        "c1 < cD < cB < c_beta < sqrt(M) at interior strip points",
        with(&|d| {
            let mut failed = 0.0f64;
            for b in [c(-0.25, 0.5), c(-0.1, 1.0), c(-0.4, 1.5), c(-0.2, 1.9), c(-0.33, 0.1)] {
                let cf = capacity_functions(b, d)?;
                if !cf.is_strict() {
                    let worst = cf.margins().iter().copied().fold(f64::INFINITY, f64::min);
                    failed = failed.max(worst.abs().max(f64::MIN_POSITIVE));
                }
            }
            Ok(failed)
        }),
        0.0,
    );
    t.push(
        "DiskCapacities",
        "the five capacity functions coincide on the unit disk",
        capacity_functions_disk(c(0.3, -0.2)).map(|cf| cf.spread()),
        1e-8,
    );
}
