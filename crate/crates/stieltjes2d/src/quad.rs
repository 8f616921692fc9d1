//! Ordinary (Lebesgue-measure) quadrature used where closed-form metadata is missing.
//!
//! Composite 10-point Gauss-Legendre with panel doubling. Panel breaks always include the
//! declared jump lines of the integrand, so piecewise-smooth fixtures integrate exactly per piece.

use crate::core::{Rect, Surface};
use crate::error::{Error, Result};

const GL_X: [f64; 5] = [
    0.148_874_338_981_631_2,
    0.433_395_394_129_247_2,
    0.679_409_568_299_024_4,
    0.865_063_366_688_984_5,
    0.973_906_528_517_171_7,
];
const GL_W: [f64; 5] = [
    0.295_524_224_714_752_9,
    0.269_266_719_309_996_4,
    0.219_086_362_515_982_04,
    0.149_451_349_150_580_6,
    0.066_671_344_308_688_14,
];

const MAX_PANELS: usize = 512;
/// The four-fold rule costs `(10 p)^4` kernel calls per level.
const MAX_PANELS_4: usize = 8;

/// Nodes and weights of the composite rule on `[a, b]` with `panels` panels per piece.
pub fn gl_nodes(a: f64, b: f64, breaks: &[f64], panels: usize) -> Vec<(f64, f64)> {
    let mut cuts = vec![a];
    cuts.extend(breaks.iter().copied().filter(|&t| t > a && t < b));
    cuts.push(b);
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let mut out = Vec::with_capacity((cuts.len() - 1) * panels * 10);
    for w in cuts.windows(2) {
        let h = (w[1] - w[0]) / panels as f64;
        for p in 0..panels {
            let lo = w[0] + p as f64 * h;
            let (m, r) = (lo + 0.5 * h, 0.5 * h);
            for k in 0..5 {
                out.push((m - r * GL_X[k], r * GL_W[k]));
                out.push((m + r * GL_X[k], r * GL_W[k]));
            }
        }
    }
    out
}

fn doubling<F>(tol: f64, what: &str, mut at: F) -> Result<f64>
where
    F: FnMut(usize) -> f64,
{
    let mut prev = at(1);
    let mut p = 2;
    while p <= MAX_PANELS {
        let v = at(p);
        if !v.is_finite() {
            return Err(Error::Data(format!("non-finite value in {what}")));
        }
        if (v - prev).abs() <= tol * v.abs().max(1.0) {
            return Ok(v);
        }
        prev = v;
        p *= 2;
    }
    Err(Error::Unconverged(format!("{what} did not reach tolerance {tol:e}")))
}

/// `int_a^b f` by panel doubling.
pub fn integrate1<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, breaks: &[f64], tol: f64) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    doubling(tol, "line quadrature", |p| gl_nodes(a, b, breaks, p).iter().map(|&(x, w)| w * f(x)).sum())
}

/// `int int_r f`, closed form when the surface carries a primitive.
pub fn integral2(f: &Surface, r: &Rect, tol: f64) -> Result<f64> {
    if r.is_degenerate() {
        return Ok(0.0);
    }
    if let Some(v) = f.exact_cell_integral(r) {
        return Ok(v);
    }
    integral2_numeric(|x, y| f.eval(x, y), r, f.jumps_x(), f.jumps_y(), tol)
}

/// Tensor Gauss-Legendre for a plain closure.
pub fn integral2_numeric<F: Fn(f64, f64) -> f64>(f: F, r: &Rect, jx: &[f64], jy: &[f64], tol: f64) -> Result<f64> {
    if r.is_degenerate() {
        return Ok(0.0);
    }
    doubling(tol, "double quadrature", |p| {
        let xs = gl_nodes(r.a, r.b, jx, p);
        let ys = gl_nodes(r.c, r.d, jy, p);
        ys.iter()
            .map(|&(y, wy)| wy * xs.iter().map(|&(x, wx)| wx * f(x, y)).sum::<f64>())
            .sum()
    })
}

/// `int_{x0}^{x1} f(t, y) dt`.
pub fn line_x(f: &Surface, x0: f64, x1: f64, y: f64, tol: f64) -> Result<f64> {
    if let Some(v) = f.exact_x_integral(x0, x1, y) {
        return Ok(v);
    }
    integrate1(|t| f.eval(t, y), x0, x1, f.jumps_x(), tol)
}

/// `int_{y0}^{y1} f(x, s) ds`.
pub fn line_y(f: &Surface, x: f64, y0: f64, y1: f64, tol: f64) -> Result<f64> {
    if let Some(v) = f.exact_y_integral(x, y0, y1) {
        return Ok(v);
    }
    integrate1(|s| f.eval(x, s), y0, y1, f.jumps_y(), tol)
}

/// Integral mean over `r`.
pub fn mean(f: &Surface, r: &Rect, tol: f64) -> Result<f64> {
    Ok(integral2(f, r, tol)? / r.area())
}

/// `int int_r int int_r k(x1, y1, x2, y2)` on the tensor grid (Q x Q).
pub fn integral4<K>(k: K, r: &Rect, jx: &[f64], jy: &[f64], tol: f64) -> Result<f64>
where
    K: Fn((f64, f64), (f64, f64)) -> f64,
{
    let mut prev: Option<f64> = None;
    let mut p = 1;
    while p <= MAX_PANELS_4 {
        let xs = gl_nodes(r.a, r.b, jx, p);
        let ys = gl_nodes(r.c, r.d, jy, p);
        let pts: Vec<((f64, f64), f64)> = ys
            .iter()
            .flat_map(|&(y, wy)| xs.iter().map(move |&(x, wx)| ((x, y), wx * wy)))
            .collect();
        let v: f64 = pts
            .iter()
            .map(|&(p1, w1)| w1 * pts.iter().map(|&(p2, w2)| w2 * k(p1, p2)).sum::<f64>())
            .sum();
        if let Some(pv) = prev {
            if (v - pv).abs() <= tol * v.abs().max(1.0) {
                return Ok(v);
            }
        }
        prev = Some(v);
        p *= 2;
    }
    Err(Error::Unconverged(format!("four-fold quadrature did not reach tolerance {tol:e}")))
}
