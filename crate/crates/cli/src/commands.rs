use std::path::Path;

use potkit::equilibrium::{fekete_ladder, fekete_points, CapacityReport, CompactSet, FeketeResult, Pole};
use potkit::planar_green::{robin_data, DomainDescriptor};
use potkit::schottky::{
    capacity_functions, kernel_periods, strip_bergman_kernels, CapacityFunctions, KernelPeriods, StripDouble,
};
use potkit::surface::{torus_bergman, torus_expansion, torus_harmonic_basis, SurfaceExpansion, TorusSpec};
use potkit::vortex::{simulate, VortexSystem};
use potkit::{Complex64, Error, TorusLattice, Trajectory};
use serde::{Deserialize, Serialize};

use crate::io::{csv_table, ensure_dir, exit, join, load_document, num, to_json, write_file, CliError, CliResult};
use crate::verify::{self, Row, Suite};
use crate::Format;

/// Text printed to stdout and the exit code.
pub struct Outcome {
    pub stdout: String,
    pub code: i32,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Self { stdout, code: exit::OK }
    }
}

// ---------------------------------------------------------------- verify

pub fn verify(suite: Suite, scale: f64, format: Format, out: Option<&Path>) -> CliResult<Outcome> {
    let rows = verify::run(suite, scale);
    let text = match format {
        Format::Json => to_json(&rows),
        Format::Csv => rows_csv(&rows),
    };
    if let Some(path) = out {
        write_file(path, &text)?;
    }
    let code = if rows.iter().all(|r| r.pass) { exit::OK } else { exit::VERIFY };
    Ok(Outcome { stdout: text, code })
}

fn rows_csv(rows: &[Row]) -> String {
    let header = ["identity", "relation", "residual", "tolerance", "pass"].map(String::from);
    let body: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![
                r.identity.clone(),
                format!("\"{}\"", r.relation),
                num(r.residual),
                num(r.tolerance),
                r.pass.to_string(),
            ]
        })
        .collect();
    csv_table(&header, &body)
}

// ---------------------------------------------------------------- fekete

#[derive(Serialize)]
struct SingleRun {
    n: usize,
    delta_n: f64,
    log_product: f64,
    gradient_norm: f64,
    converged: bool,
}

fn points_csv(runs: &[FeketeResult]) -> String {
    let header = ["n", "k", "re", "im"].map(String::from);
    let mut rows = Vec::new();
    for r in runs {
        for (k, z) in r.points.iter().enumerate() {
            rows.push(vec![r.points.len().to_string(), k.to_string(), num(z.re), num(z.im)]);
        }
    }
    csv_table(&header, &rows)
}

pub fn fekete(
    domain: &str,
    n: Option<usize>,
    n_max: usize,
    pole: Option<Complex64>,
    format: Format,
    out: Option<&Path>,
) -> CliResult<Outcome> {
    let set: CompactSet = load_document(domain, "compact set")?;
    let pole = pole.map_or(Pole::Infinity, Pole::Finite);
    let (report, runs) = match n {
        Some(n) => {
            let r = fekete_points(&set, n, pole)?;
            let single = SingleRun {
                n,
                delta_n: r.delta_n,
                log_product: r.log_product,
                gradient_norm: r.gradient_norm,
                converged: r.converged,
            };
            (to_json(&single), vec![r])
        }
        None => {
            let (report, runs): (CapacityReport, _) = fekete_ladder(&set, pole, n_max)?;
            (to_json(&report), runs)
        }
    };
    let points = points_csv(&runs);
    if let Some(dir) = out {
        ensure_dir(dir)?;
        write_file(&join(dir, "points.csv"), &points)?;
        write_file(&join(dir, "report.json"), &report)?;
    }
    Ok(Outcome::ok(match format {
        Format::Json => report,
        Format::Csv => points,
    }))
}

// ---------------------------------------------------------------- vortex

#[derive(Serialize)]
struct VortexSummary {
    status: &'static str,
    collision_time: Option<f64>,
    t_end: f64,
    tol: f64,
    steps: usize,
    /// Largest deviation of every monitor from its initial value.
    max_drift: std::collections::BTreeMap<String, f64>,
    /// `|z_1(T) − z_1(0)|`.
    displacement: Option<f64>,
    /// `max_k |z_k(T) − z_k(0)|`.
    return_error: Option<f64>,
    /// `max_{k,t} ||z_k(t)| − |z_k(0)||`.
    radius_drift: Option<f64>,
    final_positions: Vec<Complex64>,
}

fn trajectory_csv(tr: &Trajectory, count: usize) -> String {
    let mut header = vec!["t".to_string()];
    for k in 1..=count {
        header.push(format!("re_z{k}"));
        header.push(format!("im_z{k}"));
    }
    header.push("displacement".into());
    header.extend(tr.monitors.keys().cloned());
    let rows: Vec<Vec<String>> = tr
        .times
        .iter()
        .enumerate()
        .map(|(i, &t)| {
            let mut row = vec![num(t)];
            for z in &tr.states[i] {
                row.push(num(z.re));
                row.push(num(z.im));
            }
            row.push(num(tr.states[i].first().map_or(0.0, |z| (z - tr.states[0][0]).norm())));
            row.extend(tr.monitors.values().map(|m| num(m[i])));
            row
        })
        .collect();
    csv_table(&header, &rows)
}

pub fn vortex(domain: &str, t_end: f64, tol: f64, format: Format, out: Option<&Path>) -> CliResult<Outcome> {
    let system: VortexSystem = load_document(domain, "vortex system")?;
    let start = system.positions();
    let (summary, csv, code) = match simulate(&system, t_end, tol) {
        Ok(tr) => {
            let last = tr.last_state();
            let summary = VortexSummary {
                status: "ok",
                collision_time: None,
                t_end,
                tol,
                steps: tr.times.len().saturating_sub(1),
                max_drift: tr.monitors.keys().map(|k| (k.clone(), tr.monitor_drift(k).unwrap_or(0.0))).collect(),
                displacement: start.first().map(|z0| (last[0] - z0).norm()),
                return_error: Some(start.iter().zip(last).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)),
                radius_drift: Some(
                    tr.states
                        .iter()
                        .flat_map(|s| s.iter().zip(&start).map(|(z, z0)| (z.norm() - z0.norm()).abs()))
                        .fold(0.0, f64::max),
                ),
                final_positions: last.to_vec(),
            };
            (summary, Some(trajectory_csv(&tr, start.len())), exit::OK)
        }
        Err(Error::Collision { time }) => {
            let summary = VortexSummary {
                status: "collision",
                collision_time: Some(time),
                t_end,
                tol,
                steps: 0,
                max_drift: Default::default(),
                displacement: None,
                return_error: None,
                radius_drift: None,
                final_positions: Vec::new(),
            };
            (summary, None, exit::ABORT)
        }
        Err(e) => return Err(e.into()),
    };
    let summary = to_json(&summary);
    if let Some(dir) = out {
        ensure_dir(dir)?;
        if let Some(csv) = &csv {
            write_file(&join(dir, "trajectory.csv"), csv)?;
        }
        write_file(&join(dir, "summary.json"), &summary)?;
    }
    let stdout = match (format, csv) {
        (Format::Csv, Some(csv)) => csv,
        _ => summary,
    };
    Ok(Outcome { stdout, code })
}

// ---------------------------------------------------------------- torus

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TorusDocument {
    tau: Complex64,
    p: Option<f64>,
}

#[derive(Serialize)]
struct Matrices {
    p: Vec<Vec<f64>>,
    q: Vec<Vec<f64>>,
    r: Vec<Vec<f64>>,
    pq_residual: f64,
    symmetry_residual: f64,
    positive_definite: bool,
}

#[derive(Serialize)]
struct StripReport {
    p: f64,
    base_point: Complex64,
    kernel_periods: KernelPeriods,
    kkh_residual: f64,
    capacity_functions: CapacityFunctions,
}

#[derive(Serialize)]
struct TorusReport {
    lattice: TorusLattice,
    legendre_residual: f64,
    green_constant: f64,
    expansion: SurfaceExpansion,
    bergman: f64,
    period_matrices: Matrices,
    holomorphic_basis_residual: f64,
    strip: Option<StripReport>,
}

fn rows_of(m: &potkit::surface::PeriodMatrices, which: char) -> Vec<Vec<f64>> {
    let mat = match which {
        'p' => &m.p,
        'q' => &m.q,
        _ => &m.r,
    };
    mat.row_iter().map(|r| r.iter().copied().collect()).collect()
}

pub fn torus(tau: Option<Complex64>, domain: Option<&str>, format: Format, out: Option<&Path>) -> CliResult<Outcome> {
    let (tau, p) = match (tau, domain) {
        (Some(t), None) => (t, None),
        (None, Some(d)) => {
            let doc: TorusDocument = load_document(d, "torus document")?;
            (doc.tau, doc.p)
        }
        _ => return Err(CliError::usage("give exactly one of --tau and --domain")),
    };
    let spec = TorusSpec::new(tau)?;
    let basis = torus_harmonic_basis(&spec)?;
    let m = &basis.periods;
    let strip = if tau.re == 0.0 {
        let dbl = StripDouble::new(tau, p.unwrap_or(0.0))?;
        let a = Complex64::new(-0.25, 0.25 * tau.im);
        let (ke, kh, kd) = strip_bergman_kernels(Complex64::new(-0.1, 0.6 * tau.im), a, &dbl)?;
        Some(StripReport {
            p: dbl.p,
            base_point: a,
            kernel_periods: kernel_periods(a, &dbl, 256)?,
            kkh_residual: ((ke - 2.0 * kd) - kh).norm(),
            capacity_functions: capacity_functions(a, &dbl)?,
        })
    } else if p.is_some() {
        return Err(CliError::schema("circulation p needs a purely imaginary tau"));
    } else {
        None
    };
    let report = TorusReport {
        legendre_residual: spec.lattice.legendre_residual(),
        green_constant: spec.green_constant,
        expansion: torus_expansion(&spec),
        bergman: torus_bergman(&spec).re,
        period_matrices: Matrices {
            p: rows_of(m, 'p'),
            q: rows_of(m, 'q'),
            r: rows_of(m, 'r'),
            pq_residual: m.pq_residual(),
            symmetry_residual: m.symmetry_residual(),
            positive_definite: m.positive_definite(),
        },
        holomorphic_basis_residual: basis.uqru_residual(),
        lattice: spec.lattice.clone(),
        strip,
    };
    let text = match format {
        Format::Json => to_json(&report),
        Format::Csv => {
            let header = ["quantity", "value"].map(String::from);
            let mut rows = vec![
                vec!["legendre_residual".into(), num(report.legendre_residual)],
                vec!["green_constant".into(), num(report.green_constant)],
                vec!["h0".into(), num(report.expansion.h0)],
                vec!["bergman".into(), num(report.bergman)],
                vec!["P".into(), num(m.p[(0, 0)])],
                vec!["Q".into(), num(m.q[(0, 0)])],
                vec!["R".into(), num(m.r[(0, 0)])],
                vec!["pq_residual".into(), num(m.pq_residual())],
            ];
            if let Some(s) = &report.strip {
                rows.push(vec!["kkh_residual".into(), num(s.kkh_residual)]);
            }
            csv_table(&header, &rows)
        }
    };
    if let Some(path) = out {
        write_file(path, &text)?;
    }
    Ok(Outcome::ok(text))
}

// ---------------------------------------------------------------- green

#[derive(Serialize)]
struct RobinRow {
    a: Complex64,
    h0: f64,
    h1: Complex64,
    curvature: f64,
}

pub fn green(domain: &str, at: &[Complex64], format: Format, out: Option<&Path>) -> CliResult<Outcome> {
    let d: DomainDescriptor = load_document(domain, "domain")?;
    d.validate()?;
    let rows = at
        .iter()
        .map(|&a| robin_data(&d, a).map(|e| RobinRow { a, h0: e.h0, h1: e.h1, curvature: e.curvature }))
        .collect::<potkit::Result<Vec<_>>>()?;
    let text = match format {
        Format::Json => to_json(&rows),
        Format::Csv => {
            let header = ["re_a", "im_a", "h0", "re_h1", "im_h1", "curvature"].map(String::from);
            let body: Vec<Vec<String>> = rows
                .iter()
                .map(|r| vec![num(r.a.re), num(r.a.im), num(r.h0), num(r.h1.re), num(r.h1.im), num(r.curvature)])
                .collect();
            csv_table(&header, &body)
        }
    };
    if let Some(path) = out {
        write_file(path, &text)?;
    }
    Ok(Outcome::ok(text))
}
