//! Five-point finite-difference Dirichlet Green function on a rectangle.

use num_complex::Complex64;

use crate::{Error, Result};

/// Euler–Mascheroni constant.
const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Offset between the regularized lattice Green function of the 5-point
/// Laplacian and the continuum logarithm: `γ + (3/2)·log 2`.
pub(crate) fn lattice_log_offset() -> f64 {
    EULER_GAMMA + 1.5 * std::f64::consts::LN_2
}

/// Uniform grid on `[0,w]×[0,h]` with `nx × ny` cells of side `step`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RectGrid {
    pub w: f64,
    pub h: f64,
    pub nx: usize,
    pub ny: usize,
    pub step: f64,
}

impl RectGrid {
    /// Grid with `grid` cells across the width; the height must be an
    /// integer number of cells.
    pub fn new(w: f64, h: f64, grid: usize) -> Result<Self> {
        if !(w > 0.0 && h > 0.0) {
            return Err(Error::Parameter("rectangle sides must be positive".into()));
        }
        let step = w / grid as f64;
        let nyf = h / step;
        let ny = nyf.round() as usize;
        if (nyf - ny as f64).abs() > 1e-9 * nyf.max(1.0) {
            return Err(Error::Parameter(format!("height {h} is not a multiple of the step {step}")));
        }
        if step > w.min(h) / 32.0 + 1e-15 {
            return Err(Error::Parameter(format!("grid step {step} exceeds min(w,h)/32")));
        }
        if grid > 512 || ny > 512 {
            return Err(Error::Parameter("grids are capped at 512 cells per side".into()));
        }
        Ok(Self { w, h, nx: grid, ny, step })
    }

    /// Grid indices of `z` if it is a node (within 1e-9 of the step).
    pub fn node_of(&self, z: Complex64) -> Option<(usize, usize)> {
        let fi = z.re / self.step;
        let fj = z.im / self.step;
        let (i, j) = (fi.round(), fj.round());
        if (fi - i).abs() < 1e-9 && (fj - j).abs() < 1e-9 && i >= 0.0 && j >= 0.0 {
            let (i, j) = (i as usize, j as usize);
            (i <= self.nx && j <= self.ny).then_some((i, j))
        } else {
            None
        }
    }

    pub fn point(&self, i: usize, j: usize) -> Complex64 {
        Complex64::new(i as f64 * self.step, j as f64 * self.step)
    }

    fn interior(&self, i: usize, j: usize) -> bool {
        i > 0 && j > 0 && i < self.nx && j < self.ny
    }

    fn unknown(&self, i: usize, j: usize) -> usize {
        (j - 1) * (self.nx - 1) + (i - 1)
    }
}

/// Cholesky factor of a symmetric positive definite band matrix.
#[derive(Debug, Clone)]
struct BandCholesky {
    n: usize,
    b: usize,
    l: Vec<f64>,
}

impl BandCholesky {
    /// `entry(k, d)` returns `A[k][k−d]` for `0 ≤ d ≤ b`.
    fn factor(n: usize, b: usize, entry: impl Fn(usize, usize) -> f64) -> Result<Self> {
        let w = b + 1;
        let mut l = vec![0.0; n * w];
        for k in 0..n {
            for d in (0..=b.min(k)).rev() {
                let j = k - d;
                let mut s = entry(k, d);
                let m0 = k.saturating_sub(b);
                for m in m0..j {
                    s -= l[k * w + (k - m)] * l[j * w + (j - m)];
                }
                if d == 0 {
                    if !(s > 0.0) {
                        return Err(Error::Solver(format!("matrix not positive definite at row {k}")));
                    }
                    l[k * w] = s.sqrt();
                } else {
                    l[k * w + d] = s / l[j * w];
                }
            }
        }
        Ok(Self { n, b, l })
    }

    #[allow(clippy::needless_range_loop)]
    fn solve(&self, rhs: &mut [f64]) {
        let (n, b, w) = (self.n, self.b, self.b + 1);
        for k in 0..n {
            let mut s = rhs[k];
            for m in k.saturating_sub(b)..k {
                s -= self.l[k * w + (k - m)] * rhs[m];
            }
            rhs[k] = s / self.l[k * w];
        }
        for k in (0..n).rev() {
            let mut s = rhs[k];
            for m in k + 1..(k + b + 1).min(n) {
                s -= self.l[m * w + (m - k)] * rhs[m];
            }
            rhs[k] = s / self.l[k * w];
        }
    }
}

/// Factorized 5-point operator for one rectangle grid; reusable across sources.
#[derive(Debug, Clone)]
pub struct RectangleSolver {
    pub grid: RectGrid,
    chol: BandCholesky,
}

/// Discrete Green function on all grid nodes (boundary included), row-major in `j`.
#[derive(Debug, Clone)]
pub struct GriddedGreen {
    pub grid: RectGrid,
    pub source: (usize, usize),
    pub values: Vec<f64>,
}

impl GriddedGreen {
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.values[j * (self.grid.nx + 1) + i]
    }

    /// Bilinear interpolation at an arbitrary point of the closed rectangle.
    pub fn interpolate(&self, z: Complex64) -> f64 {
        let g = &self.grid;
        let x = (z.re / g.step).clamp(0.0, g.nx as f64);
        let y = (z.im / g.step).clamp(0.0, g.ny as f64);
        let i = (x.floor() as usize).min(g.nx - 1);
        let j = (y.floor() as usize).min(g.ny - 1);
        let (tx, ty) = (x - i as f64, y - j as f64);
        (1.0 - tx) * (1.0 - ty) * self.at(i, j)
            + tx * (1.0 - ty) * self.at(i + 1, j)
            + (1.0 - tx) * ty * self.at(i, j + 1)
            + tx * ty * self.at(i + 1, j + 1)
    }
}

impl RectangleSolver {
    pub fn new(grid: RectGrid) -> Result<Self> {
        if grid.nx < 2 || grid.ny < 2 {
            return Err(Error::Solver("degenerate grid".into()));
        }
        let m = grid.nx - 1;
        let n = m * (grid.ny - 1);
        let chol = BandCholesky::factor(n, m, |k, d| match d {
            0 => 4.0,
            1 if k % m != 0 => -1.0,
            d if d == m => -1.0,
            _ => 0.0,
        })?;
        Ok(Self { grid, chol })
    }

    /// Solve `4G − ΣG_nbr = δ_{source}` with `G = 0` on the boundary, i.e.
    /// `−Δ_h G = δ/h²`.
    pub fn green(&self, source: (usize, usize)) -> Result<GriddedGreen> {
        let g = self.grid;
        if !g.interior(source.0, source.1) {
            return Err(Error::Domain {
                z: g.point(source.0, source.1),
                reason: "source must be an interior grid node".into(),
            });
        }
        let mut rhs = vec![0.0; self.chol.n];
        rhs[g.unknown(source.0, source.1)] = 1.0;
        self.chol.solve(&mut rhs);
        let mut values = vec![0.0; (g.nx + 1) * (g.ny + 1)];
        for j in 1..g.ny {
            for i in 1..g.nx {
                values[j * (g.nx + 1) + i] = rhs[g.unknown(i, j)];
            }
        }
        Ok(GriddedGreen { grid: g, source, values })
    }

    /// Discrete Robin value `2πG_h(a,a) + log h − (γ + 1.5 log 2)`.
    pub(crate) fn robin_raw(&self, node: (usize, usize)) -> Result<f64> {
        let gg = self.green(node)?;
        Ok(2.0 * std::f64::consts::PI * gg.at(node.0, node.1) + self.grid.step.ln() - lattice_log_offset())
    }
}

/// Gridded Dirichlet Green function of `[0,w]×[0,h]` with source at node `a`.
pub fn fd_dirichlet_green(w: f64, h: f64, grid: usize, a: Complex64) -> Result<GriddedGreen> {
    let g = RectGrid::new(w, h, grid)?;
    let node = g.node_of(a).ok_or_else(|| Error::Domain { z: a, reason: "source is not a grid node".into() })?;
    RectangleSolver::new(g)?.green(node)
}
