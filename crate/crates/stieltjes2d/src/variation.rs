//! Regularity estimation: Vitali bivariation, Arzela variation, bimonotonicity,
//! sampled Holder/Lipschitz/range constants and the sub-rectangle extremes `S(u)`, `s(u)`.

use crate::core::{
    sample_nodes, uniform_nodes, Direction, GridPartition, Rect, Regularity, RegularityCertificate, Surface,
};
use crate::error::{Error, Result};

/// Safety factor applied to sampled Lipschitz and Holder constants.
pub const ESTIMATE_INFLATION: f64 = 1.25;

#[derive(Debug, Clone, PartialEq)]
pub struct VariationEstimate {
    pub value: f64,
    /// One sum per dyadic level, coarse to fine.
    pub levels: Vec<f64>,
    pub converged: bool,
    /// Cells per side on the finest level used.
    pub resolution: usize,
}

/// `sum |delta11 f|` over the cells of `p`.
pub fn vitali_sum(f: &Surface, p: &GridPartition) -> f64 {
    vitali_from_nodes(&sample_nodes(f, p.xs(), p.ys()), p.nx(), p.ny())
}

fn vitali_from_nodes(v: &[f64], nx: usize, ny: usize) -> f64 {
    let w = nx + 1;
    let mut total = 0.0;
    for j in 0..ny {
        let (r0, r1) = (&v[j * w..(j + 1) * w], &v[(j + 1) * w..(j + 2) * w]);
        for i in 0..nx {
            total += (r0[i] - r1[i] - r0[i + 1] + r1[i + 1]).abs();
        }
    }
    total
}

const MAX_LEVELS: u32 = 10;

fn refine<F>(tol: f64, mut level_sum: F) -> Result<VariationEstimate>
where
    F: FnMut(usize) -> f64,
{
    if !(tol > 0.0) {
        return Err(Error::Domain("tol must be positive".into()));
    }
    let mut levels = Vec::new();
    let mut converged = false;
    let mut n = 1;
    for k in 0..=MAX_LEVELS {
        n = 1usize << k;
        let v = level_sum(n);
        if !v.is_finite() {
            return Err(Error::Data("non-finite variation sum".into()));
        }
        levels.push(v);
        if levels.len() >= 2 {
            let prev = levels[levels.len() - 2];
            if v - prev <= tol * v.abs().max(f64::MIN_POSITIVE) {
                converged = true;
                break;
            }
        }
    }
    Ok(VariationEstimate { value: *levels.last().unwrap(), levels, converged, resolution: n })
}

/// Dyadic lower estimate of the total bivariation.
pub fn vitali_bivariation(f: &Surface, q: &Rect, tol: f64) -> Result<VariationEstimate> {
    refine(tol, |n| {
        let xs = uniform_nodes(q.a, q.b, n);
        let ys = uniform_nodes(q.c, q.d, n);
        vitali_from_nodes(&sample_nodes(f, &xs, &ys), n, n)
    })
}

/// Best increasing staircase chain through the node grid.
fn arzela_level(f: &Surface, q: &Rect, n: usize) -> f64 {
    let xs = uniform_nodes(q.a, q.b, n);
    let ys = uniform_nodes(q.c, q.d, n);
    let v = sample_nodes(f, &xs, &ys);
    let w = n + 1;
    let mut best = vec![0.0f64; w * w];
    let mut top = 0.0f64;
    for j in 0..w {
        for i in 0..w {
            let k = j * w + i;
            let mut b = 0.0f64;
            if i > 0 {
                b = b.max(best[k - 1] + (v[k] - v[k - 1]).abs());
            }
            if j > 0 {
                b = b.max(best[k - w] + (v[k] - v[k - w]).abs());
            }
            best[k] = b;
            top = top.max(b);
        }
    }
    top
}

/// Arzela variation: supremum over increasing chains, estimated by a per-level path DP.
pub fn arzela_variation(f: &Surface, q: &Rect, tol: f64) -> Result<VariationEstimate> {
    refine(tol, |n| arzela_level(f, q, n.max(2)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BimonotoneClass {
    Increasing,
    Decreasing,
    Neither,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BimonotoneCheck {
    pub class: BimonotoneClass,
    /// Every cell increment vanished: the function is both increasing and decreasing.
    pub flat: bool,
}

impl BimonotoneCheck {
    pub fn direction(&self) -> Option<Direction> {
        match self.class {
            BimonotoneClass::Increasing => Some(Direction::Increasing),
            BimonotoneClass::Decreasing => Some(Direction::Decreasing),
            BimonotoneClass::Neither => None,
        }
    }
}

/// Classify by the sign of `delta11` on the cells of an `n x n` grid.
pub fn bimonotone_check(f: &Surface, q: &Rect, n: usize) -> Result<BimonotoneCheck> {
    if n < 2 {
        return Err(Error::Domain("bimonotone_check needs n >= 2".into()));
    }
    let xs = uniform_nodes(q.a, q.b, n);
    let ys = uniform_nodes(q.c, q.d, n);
    let v = sample_nodes(f, &xs, &ys);
    let scale = v.iter().fold(1.0f64, |m, x| m.max(x.abs()));
    let eps = 1e-12 * scale;
    let w = n + 1;
    let (mut pos, mut neg) = (false, false);
    for j in 0..n {
        for i in 0..n {
            let k = j * w + i;
            let d = v[k] - v[k + w] - v[k + 1] + v[k + w + 1];
            if d > eps {
                pos = true;
            } else if d < -eps {
                neg = true;
            }
        }
    }
    let class = match (pos, neg) {
        (true, true) => BimonotoneClass::Neither,
        (false, true) => BimonotoneClass::Decreasing,
        _ => BimonotoneClass::Increasing,
    };
    Ok(BimonotoneCheck { class, flat: !pos && !neg })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EstimateKind {
    Range,
    Lipschitz,
    Holder { beta1: f64, beta2: f64 },
}

fn radical_inverse(mut i: u64, base: u64) -> f64 {
    let inv = 1.0 / base as f64;
    let mut f = inv;
    let mut r = 0.0;
    while i > 0 {
        r += (i % base) as f64 * f;
        i /= base;
        f *= inv;
    }
    r
}

/// Deterministic Halton points (bases 2, 3) plus the corners, mapped into `q`.
pub fn halton_points(q: &Rect, n: usize) -> Vec<(f64, f64)> {
    let mut pts = vec![(q.a, q.c), (q.a, q.d), (q.b, q.c), (q.b, q.d)];
    pts.extend((1..=n as u64).map(|i| q.lerp(radical_inverse(i, 2), radical_inverse(i, 3))));
    pts
}

/// Sampled regularity constants, marked `Estimated`.
///
/// Lipschitz and Holder ratios compare each sample with points on the same row or
/// column (the rectangle edges and the next sample), then get inflated by
/// [`ESTIMATE_INFLATION`]. Ranges are reported as sampled.
pub fn estimate_constants(f: &Surface, q: &Rect, kind: EstimateKind, samples: usize) -> Result<RegularityCertificate> {
    if samples < 64 {
        return Err(Error::Domain("estimate_constants needs at least 64 samples".into()));
    }
    let pts = halton_points(q, samples);
    let mut vals = Vec::with_capacity(pts.len());
    for &(x, y) in &pts {
        let v = f.eval(x, y);
        if !v.is_finite() {
            return Err(Error::Data(format!("{} is not finite at ({x}, {y})", f.name())));
        }
        vals.push(v);
    }
    match kind {
        EstimateKind::Range => {
            let (m, mm) = vals.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
            RegularityCertificate::estimated(Regularity::Range { min: m, max: mm }, samples, 1.0)
        }
        EstimateKind::Lipschitz | EstimateKind::Holder { .. } => {
            let (b1, b2) = match kind {
                EstimateKind::Holder { beta1, beta2 } => (beta1, beta2),
                _ => (1.0, 1.0),
            };
            let mut h1 = 0.0f64;
            let mut h2 = 0.0f64;
            let dx = q.width() / (samples as f64).sqrt();
            let dy = q.height() / (samples as f64).sqrt();
            for (k, &(x, y)) in pts.iter().enumerate() {
                let fv = vals[k];
                let (nx, ny) = pts[(k + 1) % pts.len()];
                let near_x = if x + dx <= q.b { x + dx } else { x - dx };
                let near_y = if y + dy <= q.d { y + dy } else { y - dy };
                for t in [q.a, q.b, nx, near_x] {
                    if t != x {
                        let r = (f.eval(t, y) - fv).abs() / (t - x).abs().powf(b1);
                        h1 = h1.max(r);
                    }
                }
                for s in [q.c, q.d, ny, near_y] {
                    if s != y {
                        let r = (f.eval(x, s) - fv).abs() / (s - y).abs().powf(b2);
                        h2 = h2.max(r);
                    }
                }
            }
            if !(h1.is_finite() && h2.is_finite()) {
                return Err(Error::Data("non-finite ratio while estimating constants".into()));
            }
            let (h1, h2) = (h1 * ESTIMATE_INFLATION, h2 * ESTIMATE_INFLATION);
            let reg = match kind {
                EstimateKind::Lipschitz => Regularity::Lipschitz { l1: h1, l2: h2 },
                _ => Regularity::Holder { h1, h2, beta1: b1, beta2: b2 },
            };
            RegularityCertificate::estimated(reg, samples, ESTIMATE_INFLATION)
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BdpReport {
    /// `S(u;Q)`: supremum of `delta11 u` over sub-rectangles, degenerate ones counting 0.
    pub sup: f64,
    /// `s(u;Q)`: infimum, degenerate ones counting 0.
    pub inf: f64,
    /// Largest value over non-degenerate grid rectangles and where it occurs.
    pub sup_rect: (f64, Rect),
    /// Smallest value over non-degenerate grid rectangles and where it occurs.
    pub inf_rect: (f64, Rect),
    /// Grid resolution actually used (capped at 64).
    pub n: usize,
    /// The extremes at `n/2` agree with those at `n` to `1e-9` relative.
    pub stable: bool,
}

fn bdp_scan(u: &Surface, q: &Rect, n: usize) -> ((f64, Rect), (f64, Rect)) {
    let xs = uniform_nodes(q.a, q.b, n);
    let ys = uniform_nodes(q.c, q.d, n);
    let v = sample_nodes(u, &xs, &ys);
    let w = n + 1;
    let mut hi = (f64::NEG_INFINITY, (0, 0, 0, 0));
    let mut lo = (f64::INFINITY, (0, 0, 0, 0));
    for j1 in 0..n {
        for j2 in j1 + 1..=n {
            // column differences g(i) = u(x_i, y_j2) - u(x_i, y_j1)
            let g: Vec<f64> = (0..w).map(|i| v[j2 * w + i] - v[j1 * w + i]).collect();
            for i1 in 0..n {
                for i2 in i1 + 1..=n {
                    let d = g[i2] - g[i1];
                    if d > hi.0 {
                        hi = (d, (i1, i2, j1, j2));
                    }
                    if d < lo.0 {
                        lo = (d, (i1, i2, j1, j2));
                    }
                }
            }
        }
    }
    let r = |(i1, i2, j1, j2): (usize, usize, usize, usize)| Rect::span(xs[i1], xs[i2], ys[j1], ys[j2]);
    ((hi.0, r(hi.1)), (lo.0, r(lo.1)))
}

/// Exhaustive scan of `delta11 u` over every grid sub-rectangle.
pub fn bdp_sup_inf(u: &Surface, q: &Rect, n: usize) -> Result<BdpReport> {
    if n < 2 {
        return Err(Error::Domain("bdp_sup_inf needs n >= 2".into()));
    }
    let n = n.min(64);
    let (hi, lo) = bdp_scan(u, q, n);
    let (hi2, lo2) = bdp_scan(u, q, (n / 2).max(1));
    let (sup, inf) = (hi.0.max(0.0), lo.0.min(0.0));
    let scale = sup.max(-inf).max(1.0);
    let stable = (sup - hi2.0.max(0.0)).abs() <= 1e-9 * scale && (inf - lo2.0.min(0.0)).abs() <= 1e-9 * scale;
    Ok(BdpReport { sup, inf, sup_rect: hi, inf_rect: lo, n, stable })
}
