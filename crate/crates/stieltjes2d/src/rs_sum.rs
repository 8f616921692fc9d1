//! Riemann-Stieltjes double sums, the dyadic refinement oracle and integration by parts.

use rayon::prelude::*;

use crate::core::{delta11, uniform_nodes, GridPartition, Rect, Surface};
use crate::error::{Error, Result};

/// Hard cap on oracle cells per side.
pub const ORACLE_MAX_SIDE: usize = 2048;
/// Environment variable that lowers the per-side cap.
pub const MAX_CELLS_ENV: &str = "STIELTJES2D_MAX_CELLS";
/// The oracle never declares convergence on grids coarser than this.
pub const ORACLE_MIN_SIDE: usize = 8;

/// `sum f(tag) * delta11 u(cell)` over the cells of `p`.
pub fn rs_double_sum(f: &Surface, u: &Surface, p: &GridPartition) -> f64 {
    let mut total = 0.0;
    for j in 0..p.ny() {
        let mut row = 0.0;
        for i in 0..p.nx() {
            let (t, s) = p.tag(i, j);
            row += f.eval(t, s) * delta11(u, &p.cell(i, j));
        }
        total += row;
    }
    total
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleOptions {
    pub tol: f64,
    /// Cells per side on the finest admissible level.
    pub max_side: usize,
}

impl OracleOptions {
    /// `tol` with the default cap, lowered by `STIELTJES2D_MAX_CELLS` when set.
    pub fn new(tol: f64) -> Self {
        OracleOptions { tol, max_side: env_max_side() }
    }

    pub fn with_max_side(mut self, n: usize) -> Self {
        self.max_side = n.clamp(1, ORACLE_MAX_SIDE);
        self
    }
}

/// Per-side cap from the environment, never above [`ORACLE_MAX_SIDE`].
pub fn env_max_side() -> usize {
    std::env::var(MAX_CELLS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
        .map_or(ORACLE_MAX_SIDE, |n| n.min(ORACLE_MAX_SIDE))
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleReport {
    pub value: f64,
    pub levels: Vec<f64>,
    pub deltas: Vec<f64>,
    pub converged: bool,
    /// `2 * |last delta|`.
    pub error_estimate: f64,
    /// Cells per side on the last level.
    pub resolution: usize,
}

/// Midpoint tags, with the column (row) that carries a declared jump of the
/// integrator tagged on the jump line itself.
fn tags_for(nodes: &[f64], jumps: &[f64]) -> Vec<f64> {
    let mut tags: Vec<f64> = nodes.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
    let n = tags.len();
    let (lo, hi) = (nodes[0], nodes[n]);
    for &t0 in jumps {
        if !(t0 > lo && t0 <= hi) {
            continue;
        }
        let i = nodes.partition_point(|&x| x < t0) - 1;
        tags[i] = t0;
        if nodes[i + 1] == t0 && i + 1 < n {
            tags[i + 1] = t0;
        }
    }
    tags
}

fn level_sum(f: &Surface, u: &Surface, q: &Rect, n: usize) -> f64 {
    let xs = uniform_nodes(q.a, q.b, n);
    let ys = uniform_nodes(q.c, q.d, n);
    let zeta = tags_for(&xs, u.jumps_x());
    let eta = tags_for(&ys, u.jumps_y());
    let rows: Vec<Vec<f64>> = ys.par_iter().map(|&y| xs.iter().map(|&x| u.eval(x, y)).collect()).collect();
    let row_sums: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|j| {
            let (r0, r1) = (&rows[j], &rows[j + 1]);
            let e = eta[j];
            let mut acc = 0.0;
            for i in 0..n {
                let d = r0[i] - r1[i] - r0[i + 1] + r1[i + 1];
                if d != 0.0 {
                    acc += f.eval(zeta[i], e) * d;
                }
            }
            acc
        })
        .collect();
    row_sums.iter().sum()
}

/// Dyadic refinement with midpoint tags until successive levels agree to `tol * max(1, |level|)`.
pub fn rs_oracle(f: &Surface, u: &Surface, q: &Rect, tol: f64) -> Result<OracleReport> {
    rs_oracle_with(f, u, q, &OracleOptions::new(tol))
}

pub fn rs_oracle_with(f: &Surface, u: &Surface, q: &Rect, opts: &OracleOptions) -> Result<OracleReport> {
    if !(opts.tol > 0.0) {
        return Err(Error::Domain("oracle tolerance must be positive".into()));
    }
    f.check_covers(q)?;
    u.check_covers(q)?;
    let max_side = opts.max_side.clamp(1, ORACLE_MAX_SIDE);
    let mut levels = Vec::new();
    let mut deltas = Vec::new();
    let mut converged = false;
    let mut n = 1;
    loop {
        let v = level_sum(f, u, q, n);
        if !v.is_finite() {
            return Err(Error::Data(format!("non-finite RS sum for {} against {}", f.name(), u.name())));
        }
        if let Some(&prev) = levels.last() {
            let d: f64 = v - prev;
            deltas.push(d);
            if n >= ORACLE_MIN_SIDE.min(max_side) && d.abs() < opts.tol * v.abs().max(1.0) {
                converged = true;
            }
        }
        levels.push(v);
        if converged || n * 2 > max_side {
            break;
        }
        n *= 2;
    }
    let error_estimate = deltas.last().map_or(0.0, |d| 2.0 * d.abs());
    Ok(OracleReport { value: *levels.last().unwrap(), levels, deltas, converged, error_estimate, resolution: n })
}

/// One-variable oracle for `int_a^b f d u`, same refinement rule.
pub fn rs_line_oracle<F, U>(f: F, u: U, a: f64, b: f64, jumps: &[f64], opts: &OracleOptions) -> Result<OracleReport>
where
    F: Fn(f64) -> f64,
    U: Fn(f64) -> f64,
{
    if !(opts.tol > 0.0) {
        return Err(Error::Domain("oracle tolerance must be positive".into()));
    }
    if a == b {
        return Ok(OracleReport { value: 0.0, levels: vec![0.0], deltas: vec![], converged: true, error_estimate: 0.0, resolution: 1 });
    }
    let max_side = (opts.max_side.clamp(1, ORACLE_MAX_SIDE)) * 64;
    let mut levels: Vec<f64> = Vec::new();
    let mut deltas = Vec::new();
    let mut converged = false;
    let mut n = 1;
    loop {
        let xs = uniform_nodes(a, b, n);
        let tags = tags_for(&xs, jumps);
        let mut uprev = u(xs[0]);
        let mut v = 0.0;
        for i in 0..n {
            let unext = u(xs[i + 1]);
            v += f(tags[i]) * (unext - uprev);
            uprev = unext;
        }
        if !v.is_finite() {
            return Err(Error::Data("non-finite one-variable RS sum".into()));
        }
        if let Some(&prev) = levels.last() {
            let d: f64 = v - prev;
            deltas.push(d);
            if n >= ORACLE_MIN_SIDE && d.abs() < opts.tol * v.abs().max(1.0) {
                converged = true;
            }
        }
        levels.push(v);
        if converged || n * 2 > max_side {
            break;
        }
        n *= 2;
    }
    let error_estimate = deltas.last().map_or(0.0, |d| 2.0 * d.abs());
    Ok(OracleReport { value: *levels.last().unwrap(), levels, deltas, converged, error_estimate, resolution: n })
}

#[derive(Debug, Clone, PartialEq)]
pub struct IbpReport {
    /// `int int f du + int int u df`
    pub lhs: f64,
    /// `f(b,d)u(b,d) - f(b,c)u(b,c) - f(a,d)u(a,d) + f(a,c)u(a,c)`
    pub rhs: f64,
    pub residual: f64,
    /// `int int f du - int int u df`
    pub corrected_lhs: f64,
    /// Corner combination minus the four one-variable edge integrals.
    pub corrected_rhs: f64,
    pub corrected_residual: f64,
    pub converged: bool,
    /// Sum of the oracle error estimates entering either side.
    pub error_estimate: f64,
}

/// Integration by parts.
///
/// `lhs`, `rhs`, `residual` follow the sum form with the four-corner product on
/// the right. That form does not hold in general (take `f = t`, `u = s`), so the
/// report also carries the exact two-variable identity
///
/// `int int f du - int int u df = corners(f u) - int u(b,s) d_s f(b,s) + int u(a,s) d_s f(a,s)
///                                 - int u(t,d) d_t f(t,d) + int u(t,c) d_t f(t,c)`.
pub fn integration_by_parts(f: &Surface, u: &Surface, q: &Rect, tol: f64) -> Result<IbpReport> {
    integration_by_parts_with(f, u, q, &OracleOptions::new(tol))
}

pub fn integration_by_parts_with(f: &Surface, u: &Surface, q: &Rect, opts: &OracleOptions) -> Result<IbpReport> {
    let i1 = rs_oracle_with(f, u, q, opts)?;
    let i2 = rs_oracle_with(u, f, q, opts)?;
    let fu = |x: f64, y: f64| f.eval(x, y) * u.eval(x, y);
    let corners = fu(q.b, q.d) - fu(q.b, q.c) - fu(q.a, q.d) + fu(q.a, q.c);
    let lhs = i1.value + i2.value;
    let edge_s = |x: f64| {
        rs_line_oracle(|s| u.eval(x, s), |s| f.eval(x, s), q.c, q.d, f.jumps_y(), opts)
    };
    let edge_t = |y: f64| {
        rs_line_oracle(|t| u.eval(t, y), |t| f.eval(t, y), q.a, q.b, f.jumps_x(), opts)
    };
    let (eb, ea, ed, ec) = (edge_s(q.b)?, edge_s(q.a)?, edge_t(q.d)?, edge_t(q.c)?);
    let corrected_lhs = i1.value - i2.value;
    let corrected_rhs = corners - eb.value + ea.value - ed.value + ec.value;
    let reports = [&i1, &i2, &eb, &ea, &ed, &ec];
    Ok(IbpReport {
        lhs,
        rhs: corners,
        residual: (lhs - corners).abs(),
        corrected_lhs,
        corrected_rhs,
        corrected_residual: (corrected_lhs - corrected_rhs).abs(),
        converged: reports.iter().all(|r| r.converged),
        error_estimate: reports.iter().map(|r| r.error_estimate).sum(),
    })
}
