//! Two-variable Taylor blend `A_n` with the Riemann-Stieltjes remainder `B_n`, the midpoint
//! variant and the remainder bounds.

use crate::core::{rect_split, Rect, Surface};
use crate::error::{Error, Result};
use crate::quad;
use crate::rs_sum::{rs_oracle_with, OracleOptions};
use crate::variation::{halton_points, ESTIMATE_INFLATION};

pub const MAX_ORDER: u32 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PartialSource {
    Metadata,
    FiniteDifference,
}

/// The order-`n` partials of `f`, one per split `(n - j, j)`, plus the mixed density of the
/// integrator used by the remainder.
#[derive(Clone)]
pub struct DnField {
    n: u32,
    partials: Vec<Surface>,
    density: Surface,
    source: PartialSource,
}

fn binomial(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * f64::from(n - i) / f64::from(i + 1))
}

fn factorial(n: u32) -> f64 {
    (1..=n).fold(1.0, |acc, i| acc * f64::from(i))
}

fn fd_step(q: &Rect, order: u32) -> f64 {
    q.width().min(q.height()) * 1e-3f64.max(f64::EPSILON.powf(1.0 / f64::from(order + 2)))
}

/// Nested central differences for `d^(i+j) f / dt^i ds^j`, stencil kept inside `q`.
pub fn fd_partial(f: &Surface, q: &Rect, i: u32, j: u32) -> Surface {
    let h = fd_step(q, i + j);
    let (f, q) = (f.clone(), *q);
    let weights: Vec<(f64, f64, f64)> = (0..=i)
        .flat_map(|k| {
            (0..=j).map(move |l| {
                let sign = if (k + l) % 2 == 0 { 1.0 } else { -1.0 };
                (sign * binomial(i, k) * binomial(j, l), (f64::from(i) / 2.0 - f64::from(k)) * h, (f64::from(j) / 2.0 - f64::from(l)) * h)
            })
        })
        .collect();
    let norm = h.powi((i + j) as i32);
    let (hx, hy) = (f64::from(i) * h / 2.0, f64::from(j) * h / 2.0);
    Surface::new(format!("d{i},{j}[{}]", f.name()), move |x, y| {
        let x = x.clamp(q.a + hx, q.b - hx);
        let y = y.clamp(q.c + hy, q.d - hy);
        weights.iter().map(|&(w, dx, dy)| w * f.eval(x + dx, y + dy)).sum::<f64>() / norm
    })
}

impl DnField {
    /// Partials from metadata when `f` carries them, finite differences otherwise.
    pub fn new(f: &Surface, n: u32, q: &Rect) -> Result<Self> {
        if n > MAX_ORDER {
            return Err(Error::Domain(format!("order {n} exceeds {MAX_ORDER}")));
        }
        let (ti, si) = Self::split_of(n);
        let meta: Option<Vec<Surface>> = (0..=n).map(|j| f.partial(n - j, j)).collect();
        let meta_density = f.partial(ti + 1, si + 1);
        match (meta, meta_density) {
            (Some(partials), Some(density)) => {
                let dn = DnField { n, partials, density, source: PartialSource::Metadata };
                dn.validate(f, q)?;
                Ok(dn)
            }
            _ => Ok(Self::finite_difference(f, n, q)),
        }
    }

    pub fn finite_difference(f: &Surface, n: u32, q: &Rect) -> Self {
        let (ti, si) = Self::split_of(n);
        DnField {
            n,
            partials: (0..=n).map(|j| fd_partial(f, q, n - j, j)).collect(),
            density: fd_partial(f, q, ti + 1, si + 1),
            source: PartialSource::FiniteDifference,
        }
    }

    /// Explicit partials (`partials[j]` is the `(n - j, j)` split) and integrator density.
    pub fn from_parts(n: u32, partials: Vec<Surface>, density: Surface) -> Result<Self> {
        if partials.len() != n as usize + 1 {
            return Err(Error::Domain(format!("order {n} needs {} partials", n + 1)));
        }
        Ok(DnField { n, partials, density, source: PartialSource::Metadata })
    }

    /// The split `(n - floor(n/2), floor(n/2))` used as the remainder integrator.
    pub fn split_of(n: u32) -> (u32, u32) {
        (n - n / 2, n / 2)
    }

    /// Compare metadata partials with finite differences at interior sample points.
    pub fn validate(&self, f: &Surface, q: &Rect) -> Result<()> {
        let inner = Rect::span(
            q.a + 0.1 * q.width(),
            q.b - 0.1 * q.width(),
            q.c + 0.1 * q.height(),
            q.d - 0.1 * q.height(),
        );
        let (ti, si) = Self::split_of(self.n);
        let mut checks: Vec<(u32, u32, &Surface)> =
            (0..=self.n).map(|j| (self.n - j, j, &self.partials[j as usize])).collect();
        checks.push((ti + 1, si + 1, &self.density));
        for (i, j, s) in checks {
            let fd = fd_partial(f, q, i, j);
            let h = fd_step(q, i + j);
            for &(x, y) in halton_points(&inner, 6).iter().skip(4) {
                let (m, d) = (s.eval(x, y), fd.eval(x, y));
                let noise = 2f64.powi((i + j) as i32) * 1e-15 * (f.eval(x, y).abs() + 1.0) / h.powi((i + j) as i32);
                if (m - d).abs() > 1e-4 * m.abs().max(d.abs()).max(1.0) + noise {
                    return Err(Error::Data(format!(
                        "partial ({i},{j}) of {} disagrees with finite differences at ({x}, {y}): {m} vs {d}",
                        f.name()
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn order(&self) -> u32 {
        self.n
    }

    pub fn source(&self) -> PartialSource {
        self.source
    }

    /// `d^n f / dt^(n-j) ds^j`.
    pub fn partial(&self, j: u32) -> &Surface {
        &self.partials[j as usize]
    }

    pub fn integrator(&self) -> &Surface {
        &self.partials[(self.n / 2) as usize]
    }

    /// Mixed partial of the integrator; its absolute integral is the integrator's bivariation.
    pub fn density(&self) -> &Surface {
        &self.density
    }
}

fn check_point(q: &Rect, x: f64, y: f64) -> Result<()> {
    if q.contains(x, y) {
        Ok(())
    } else {
        Err(Error::Domain(format!("({x}, {y}) outside {q}")))
    }
}

fn sgn(j: u32) -> f64 {
    if j % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Bilinear corner blend plus the corner-derivative correction sum.
pub fn taylor_blend_an(f: &Surface, dn: &DnField, q: &Rect, x: f64, y: f64) -> Result<f64> {
    check_point(q, x, y)?;
    let (a, b, c, d) = (q.a, q.b, q.c, q.d);
    let area = q.area();
    let blend = ((b - x) * (d - y) * f.eval(a, c)
        + (b - x) * (y - c) * f.eval(a, d)
        + (x - a) * (d - y) * f.eval(b, c)
        + (x - a) * (y - c) * f.eval(b, d))
        / area;
    let n = dn.order();
    let mut sum = 0.0;
    for j in 1..=n {
        let dj = dn.partial(j);
        let e = (n - j) as i32;
        let w = binomial(n, j) / factorial(j);
        let left = (b - x) * (x - a).powi(e) * ((y - c).powi(j as i32 - 1) * dj.eval(a, c) + sgn(j) * (d - y).powi(j as i32 - 1) * dj.eval(a, d));
        let right = (x - a) * (b - x).powi(e) * (sgn(j) * (y - c).powi(j as i32 - 1) * dj.eval(b, c) + (d - y).powi(j as i32 - 1) * dj.eval(b, d));
        sum += w * (left + right);
    }
    Ok(blend + (y - c) * (d - y) / area * sum)
}

/// The kernel `S_n(x, t; y, s)` restricted to one quadrant at `(x, y)`; index in SW, SE, NW, NE order.
pub fn remainder_kernel(n: u32, q: &Rect, x: f64, y: f64, quadrant: usize) -> Surface {
    let (a, b, c, d) = (q.a, q.b, q.c, q.d);
    let ni = n as i32;
    let mixed = sgn(n + 1);
    let nf = factorial(n);
    let k: Box<dyn Fn(f64, f64) -> f64 + Send + Sync> = match quadrant {
        0 => Box::new(move |t, s| (x - t).powi(ni) * (b - x) * (y - s).powi(ni) * (d - y) / nf),
        1 => Box::new(move |t, s| mixed * (t - x).powi(ni) * (x - a) * (y - s).powi(ni) * (d - y) / nf),
        2 => Box::new(move |t, s| mixed * (x - t).powi(ni) * (b - x) * (s - y).powi(ni) * (y - c) / nf),
        _ => Box::new(move |t, s| (t - x).powi(ni) * (x - a) * (s - y).powi(ni) * (y - c) / nf),
    };
    Surface::new(format!("S{n}[{quadrant}]"), move |t, s| k(t, s))
}

#[derive(Debug, Clone, PartialEq)]
pub struct RemainderReport {
    /// `B_n`.
    pub value: f64,
    /// Per-quadrant contributions (already divided by the area), SW, SE, NW, NE.
    pub quadrants: [f64; 4],
    pub error_estimate: f64,
    pub converged: bool,
    pub blend: f64,
    /// `f(x, y) - A_n - B_n`.
    pub representation_residual: f64,
}

pub fn taylor_remainder_bn(f: &Surface, dn: &DnField, q: &Rect, x: f64, y: f64, opts: &OracleOptions) -> Result<RemainderReport> {
    let blend = taylor_blend_an(f, dn, q, x, y)?;
    let parts = rect_split(q, x, y)?;
    let area = q.area();
    let mut quadrants = [0.0; 4];
    let mut error_estimate = 0.0;
    let mut converged = true;
    for (k, r) in parts.iter().enumerate() {
        if r.is_degenerate() {
            continue;
        }
        let rep = rs_oracle_with(&remainder_kernel(dn.order(), q, x, y, k), dn.integrator(), r, opts)?;
        quadrants[k] = rep.value / area;
        error_estimate += rep.error_estimate / area;
        converged &= rep.converged;
    }
    let value = quadrants.iter().sum::<f64>();
    Ok(RemainderReport {
        value,
        quadrants,
        error_estimate,
        converged,
        blend,
        representation_residual: f.eval(x, y) - blend - value,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct MidpointReport {
    pub e_m: f64,
    pub f_m: f64,
    pub error_estimate: f64,
    /// `f(mid) - E_M - F_M`.
    pub residual: f64,
}

/// Corner average plus the corner-derivative sum, for the centre of `q`.
pub fn midpoint_estimate(f: &Surface, dn: &DnField, q: &Rect) -> f64 {
    let (a, b, c, d) = (q.a, q.b, q.c, q.d);
    let n = dn.order();
    let avg = (f.eval(a, c) + f.eval(a, d) + f.eval(b, c) + f.eval(b, d)) / 4.0;
    let mut sum = 0.0;
    for j in 1..=n {
        let dj = dn.partial(j);
        sum += binomial(n, j) / factorial(j)
            * q.width().powi((n - j) as i32)
            * q.height().powi(j as i32)
            * (dj.eval(a, c) + sgn(j) * dj.eval(a, d) + sgn(j) * dj.eval(b, c) + dj.eval(b, d));
    }
    avg + sum / 2f64.powi(n as i32 + 2)
}

/// The midpoint kernel equals `S_n` at the centre, so `F_M` is the remainder there.
pub fn taylor_midpoint(f: &Surface, dn: &DnField, q: &Rect, opts: &OracleOptions) -> Result<MidpointReport> {
    let (mx, my) = q.center();
    let e_m = midpoint_estimate(f, dn, q);
    let r = taylor_remainder_bn(f, dn, q, mx, my, opts)?;
    Ok(MidpointReport { e_m, f_m: r.value, error_estimate: r.error_estimate, residual: f.eval(mx, my) - e_m - r.value })
}

/// Remainder bound families. Quadrant data is always in SW, SE, NW, NE order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TaylorFamily {
    /// Quadrant variations weighted by the kernel maxima.
    BvQuadrants,
    /// Total variation with the half-range maxima.
    BvGlobal,
    /// Discrete Holder split of the quadrant sum with exponent `p`.
    BvHolder { p: f64 },
    /// Largest quadrant variation.
    BvMax,
    /// The last three with the `(b-a)(d-c)/16` prefactor.
    BvGlobalSixteenth,
    BvHolderSixteenth { p: f64 },
    BvMaxSixteenth,
    /// Quadrant constants bounding the density of the integrator.
    Lipschitz,
    LipschitzSixteenth,
    /// Bound on `|F_M|` at the centre.
    Midpoint,
    AbsContInf,
    AbsContP { p: f64 },
    AbsContOne,
}

impl TaylorFamily {
    pub const ALL_DEFAULT: [TaylorFamily; 13] = [
        TaylorFamily::BvQuadrants,
        TaylorFamily::BvGlobal,
        TaylorFamily::BvHolder { p: 2.0 },
        TaylorFamily::BvMax,
        TaylorFamily::BvGlobalSixteenth,
        TaylorFamily::BvHolderSixteenth { p: 2.0 },
        TaylorFamily::BvMaxSixteenth,
        TaylorFamily::Lipschitz,
        TaylorFamily::LipschitzSixteenth,
        TaylorFamily::Midpoint,
        TaylorFamily::AbsContInf,
        TaylorFamily::AbsContP { p: 2.0 },
        TaylorFamily::AbsContOne,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            TaylorFamily::BvQuadrants => "bv-quadrants",
            TaylorFamily::BvGlobal => "bv-global",
            TaylorFamily::BvHolder { .. } => "bv-holder",
            TaylorFamily::BvMax => "bv-max",
            TaylorFamily::BvGlobalSixteenth => "bv-global-16",
            TaylorFamily::BvHolderSixteenth { .. } => "bv-holder-16",
            TaylorFamily::BvMaxSixteenth => "bv-max-16",
            TaylorFamily::Lipschitz => "lipschitz",
            TaylorFamily::LipschitzSixteenth => "lipschitz-16",
            TaylorFamily::Midpoint => "midpoint",
            TaylorFamily::AbsContInf => "abscont-inf",
            TaylorFamily::AbsContP { .. } => "abscont-p",
            TaylorFamily::AbsContOne => "abscont-1",
        }
    }
}

/// Constants of the integrator `D^n f`, per quadrant at the evaluation point.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct TaylorCertificates {
    pub quadrant_v: Option<[f64; 4]>,
    pub total_v: Option<f64>,
    /// Bounds on the density `|d2 D^n f / dt ds|`.
    pub lipschitz: Option<[f64; 4]>,
    pub norm_inf: Option<[f64; 4]>,
    pub norm_p: Option<(f64, [f64; 4])>,
    pub norm_1: Option<[f64; 4]>,
}

const SUP_GRID: usize = 33;

impl TaylorCertificates {
    /// Estimates from the density of `dn`: variations and `L1` norms by quadrature, suprema by
    /// an inflated grid maximum.
    pub fn estimate(dn: &DnField, q: &Rect, x: f64, y: f64, p: f64, tol: f64) -> Result<Self> {
        let parts = rect_split(q, x, y)?;
        let dens = dn.density().clone();
        let abs = {
            let d = dens.clone();
            Surface::new("|D|", move |t, s| d.eval(t, s).abs())
        };
        let pow = {
            let d = dens.clone();
            Surface::new("|D|^p", move |t, s| d.eval(t, s).abs().powf(p))
        };
        // |D| has kinks where D changes sign; Gauss-Legendre stalls well above 1e-9 there.
        let norm_tol = tol.max(1e-6);
        let mut l1 = [0.0; 4];
        let mut lp = [0.0; 4];
        let mut sup = [0.0; 4];
        for (k, r) in parts.iter().enumerate() {
            if r.is_degenerate() {
                continue;
            }
            l1[k] = quad::integral2(&abs, r, norm_tol)?;
            lp[k] = quad::integral2(&pow, r, norm_tol)?.powf(1.0 / p);
            let mut m = 0.0f64;
            for i in 0..SUP_GRID {
                for j in 0..SUP_GRID {
                    let (t, s) = r.lerp(i as f64 / (SUP_GRID - 1) as f64, j as f64 / (SUP_GRID - 1) as f64);
                    m = m.max(dens.eval(t, s).abs());
                }
            }
            sup[k] = m * ESTIMATE_INFLATION;
        }
        Ok(TaylorCertificates {
            quadrant_v: Some(l1),
            total_v: Some(l1.iter().sum()),
            lipschitz: Some(sup),
            norm_inf: Some(sup),
            norm_p: Some((p, lp)),
            norm_1: Some(l1),
        })
    }
}

fn need<T: Copy>(v: Option<T>, what: &str) -> Result<T> {
    v.ok_or_else(|| Error::Certificate(format!("taylor bound needs {what}")))
}

fn conjugate(p: f64) -> Result<f64> {
    if p > 1.0 {
        Ok(p / (p - 1.0))
    } else {
        Err(Error::Domain(format!("holder exponent {p} must exceed 1")))
    }
}

/// The displayed bound for `family`, order `n`, at `(x, y)`.
pub fn taylor_bounds(family: TaylorFamily, certs: &TaylorCertificates, q: &Rect, n: u32, x: f64, y: f64) -> Result<f64> {
    check_point(q, x, y)?;
    let (a, b, c, d) = (q.a, q.b, q.c, q.d);
    let area = q.area();
    let nf = factorial(n);
    let (xa, bx, yc, dy) = (x - a, b - x, y - c, d - y);
    let ni = n as i32;
    let m1 = ni - 1;
    let pre = xa * bx * yc * dy / (nf * area);
    let sixteenth = area / (16.0 * nf);
    let global = |v: f64| (0.5 * q.width() + (x - 0.5 * (a + b)).abs()).powi(m1) * (0.5 * q.height() + (y - 0.5 * (c + d)).abs()).powi(m1) * v;
    let holder = |p: f64, v: [f64; 4]| -> Result<f64> {
        let qq = conjugate(p)?;
        let e = p * f64::from(m1);
        Ok((xa.powf(e) + bx.powf(e)).powf(1.0 / p)
            * (yc.powf(e) + dy.powf(e)).powf(1.0 / p)
            * v.iter().map(|t| t.powf(qq)).sum::<f64>().powf(1.0 / qq))
    };
    let maxed = |v: [f64; 4]| v.iter().copied().fold(0.0, f64::max) * (xa.powi(m1) + bx.powi(m1)) * (yc.powi(m1) + dy.powi(m1));
    // quadrant weights of the kernel maxima, written without negative powers so n = 0 works
    let corner = [bx * dy, xa * dy, bx * yc, xa * yc];
    let lens = [(xa, yc), (bx, yc), (xa, dy), (bx, dy)];
    let value = match family {
        TaylorFamily::BvQuadrants => {
            let v = need(certs.quadrant_v, "quadrant variations")?;
            (0..4).map(|k| corner[k] * lens[k].0.powi(ni) * lens[k].1.powi(ni) * v[k]).sum::<f64>() / (nf * area)
        }
        TaylorFamily::BvGlobal => pre * global(need(certs.total_v, "the total variation")?),
        TaylorFamily::BvHolder { p } => pre * holder(p, need(certs.quadrant_v, "quadrant variations")?)?,
        TaylorFamily::BvMax => pre * maxed(need(certs.quadrant_v, "quadrant variations")?),
        TaylorFamily::BvGlobalSixteenth => sixteenth * global(need(certs.total_v, "the total variation")?),
        TaylorFamily::BvHolderSixteenth { p } => sixteenth * holder(p, need(certs.quadrant_v, "quadrant variations")?)?,
        TaylorFamily::BvMaxSixteenth => sixteenth * maxed(need(certs.quadrant_v, "quadrant variations")?),
        TaylorFamily::Lipschitz | TaylorFamily::LipschitzSixteenth => {
            let l = need(certs.lipschitz, "quadrant Lipschitz constants")?;
            let brace = xa.powi(ni) * (l[0] * yc.powi(ni) + l[2] * dy.powi(ni)) + bx.powi(ni) * (l[1] * yc.powi(ni) + l[3] * dy.powi(ni));
            let n1 = f64::from(n + 1).powi(2);
            if family == TaylorFamily::Lipschitz {
                xa * bx * yc * dy / (nf * n1 * area) * brace
            } else {
                area / (16.0 * nf * n1) * brace
            }
        }
        TaylorFamily::Midpoint => {
            let v = need(certs.total_v, "the total variation")?;
            q.width().powi(ni) * q.height().powi(ni) / (2f64.powi(2 * ni + 2) * nf) * v
        }
        TaylorFamily::AbsContInf => {
            let m = need(certs.norm_inf, "quadrant sup norms")?;
            let n1 = f64::from(n + 1).powi(2);
            (0..4).map(|k| corner[k] * (lens[k].0 * lens[k].1).powi(ni + 1) / n1 * m[k]).sum::<f64>() / (nf * area)
        }
        TaylorFamily::AbsContP { p } => {
            let (pc, m) = need(certs.norm_p, "quadrant Lp norms")?;
            if (pc - p).abs() > 1e-12 {
                return Err(Error::Certificate(format!("norms are for p = {pc}, bound asks p = {p}")));
            }
            let qq = conjugate(p)?;
            let e = f64::from(n) + 1.0 / qq;
            let den = (f64::from(n) * qq + 1.0).powf(1.0 / qq);
            (0..4).map(|k| corner[k] * (lens[k].0 * lens[k].1).powf(e) / den * m[k]).sum::<f64>() / (nf * area)
        }
        TaylorFamily::AbsContOne => {
            let m = need(certs.norm_1, "quadrant L1 norms")?;
            (0..4).map(|k| corner[k] * (lens[k].0 * lens[k].1).powi(ni) * m[k]).sum::<f64>() / (nf * area)
        }
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::Certificate(format!("{} bound is not finite at ({x}, {y}) for n = {n}", family.name())))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::univariate::{SepSum, Univariate};

    fn poly(terms: &[(f64, usize, usize)], name: &str) -> Surface {
        let mut s = SepSum::new(Vec::new());
        for &(c, i, j) in terms {
            s.push(c, Univariate::monomial(i), Univariate::monomial(j));
        }
        s.to_surface(name)
    }

    fn opts() -> OracleOptions {
        OracleOptions::new(1e-10).with_max_side(256)
    }

    #[test]
    fn order_zero_blend_examples() {
        let q = Rect::unit();
        let f = poly(&[(1.0, 1, 0), (1.0, 0, 1)], "t+s");
        let dn = DnField::new(&f, 0, &q).unwrap();
        assert!((taylor_blend_an(&f, &dn, &q, 0.5, 0.5).unwrap() - 1.0).abs() < 1e-15);
        let g = poly(&[(1.0, 1, 1)], "ts");
        let dn = DnField::new(&g, 0, &q).unwrap();
        assert!((taylor_blend_an(&g, &dn, &q, 0.25, 0.25).unwrap() - 1.0 / 16.0).abs() < 1e-15);
        let r = taylor_remainder_bn(&g, &dn, &q, 0.25, 0.25, &opts()).unwrap();
        assert!(r.representation_residual.abs() < 1e-12, "{r:?}");
    }

    #[test]
    fn constant_integrator_has_no_remainder() {
        let q = Rect::unit();
        let f = poly(&[(1.0, 1, 1), (2.0, 1, 0)], "ts+2t");
        let dn = DnField::new(&f, 1, &q).unwrap();
        let r = taylor_remainder_bn(&f, &dn, &q, 0.3, 0.6, &opts()).unwrap();
        assert!(r.value.abs() < 1e-14);
    }

    #[test]
    fn midpoint_sum_is_the_blend_at_the_centre() {
        let q = Rect::new(-0.5, 1.5, 0.0, 2.0).unwrap();
        let f = poly(&[(1.0, 3, 1), (0.5, 2, 2), (-1.0, 0, 3)], "p");
        for n in 0..=3 {
            let dn = DnField::new(&f, n, &q).unwrap();
            let (mx, my) = q.center();
            let a = taylor_blend_an(&f, &dn, &q, mx, my).unwrap();
            assert!((a - midpoint_estimate(&f, &dn, &q)).abs() < 1e-12, "n = {n}");
        }
    }

    #[test]
    fn finite_differences_match_metadata() {
        let q = Rect::unit();
        let f = poly(&[(1.0, 3, 2), (1.0, 1, 1)], "p");
        let fd = DnField::finite_difference(&f, 2, &q);
        let m = DnField::new(&f, 2, &q).unwrap();
        for j in 0..=2 {
            let (a, b) = (m.partial(j).eval(0.4, 0.7), fd.partial(j).eval(0.4, 0.7));
            assert!((a - b).abs() < 1e-5, "{j}: {a} {b}");
        }
        assert_eq!(m.source(), PartialSource::Metadata);
    }

    #[test]
    fn midpoint_bound_value() {
        let certs = TaylorCertificates { total_v: Some(1.0), ..Default::default() };
        let v = taylor_bounds(TaylorFamily::Midpoint, &certs, &Rect::unit(), 1, 0.5, 0.5).unwrap();
        assert!((v - 1.0 / 16.0).abs() < 1e-15);
    }

    #[test]
    fn bv_branches_vanish_with_zero_variation() {
        let certs = TaylorCertificates { quadrant_v: Some([0.0; 4]), total_v: Some(0.0), ..Default::default() };
        for fam in [TaylorFamily::BvQuadrants, TaylorFamily::BvGlobal, TaylorFamily::BvHolder { p: 2.0 }, TaylorFamily::BvMax] {
            assert_eq!(taylor_bounds(fam, &certs, &Rect::unit(), 1, 0.3, 0.4).unwrap(), 0.0);
        }
    }

    #[test]
    fn remainder_bounds_dominate_on_a_polynomial() {
        let q = Rect::unit();
        let f = poly(&[(1.0, 2, 2)], "t2s2");
        let dn = DnField::new(&f, 1, &q).unwrap();
        let (x, y) = (0.3, 0.7);
        let r = taylor_remainder_bn(&f, &dn, &q, x, y, &opts()).unwrap();
        let certs = TaylorCertificates::estimate(&dn, &q, x, y, 2.0, 1e-12).unwrap();
        for fam in [TaylorFamily::BvQuadrants, TaylorFamily::Lipschitz, TaylorFamily::AbsContInf, TaylorFamily::AbsContP { p: 2.0 }, TaylorFamily::AbsContOne] {
            let b = taylor_bounds(fam, &certs, &q, 1, x, y).unwrap();
            assert!(r.value.abs() <= b + r.error_estimate + 1e-12, "{}: {} > {b}", fam.name(), r.value);
        }
    }
}
