//! Cebysev functionals, the Korkine identity and Gruss-type bounds.

use crate::bounds::aleph_functional;
use crate::core::{Rect, Regularity, RegularityCertificate, Surface};
use crate::error::{Error, Result};
use crate::quad;
use crate::rs_sum::{rs_oracle_with, OracleOptions, OracleReport};
use crate::variation::{estimate_constants, EstimateKind};

/// How `t_value` of a [`ChebyshevReport`] was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChebyshevMethod {
    Direct,
    Kernel,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChebyshevReport {
    /// `M(fg) - M(f) M(g)`.
    pub t_value: f64,
    pub mean_f: f64,
    pub mean_g: f64,
    /// Gruss bound from ranges sampled on the rectangle (not a certificate).
    pub bound: f64,
    pub method: ChebyshevMethod,
    /// The same functional through the four-fold Korkine integral; `None` when that
    /// quadrature does not converge (non-smooth integrands).
    pub korkine_value: Option<f64>,
    /// `M(S(f) g)`, with `S(f) = f - M(f)`.
    pub shifted_value: f64,
}

/// `int int f g` over `q`.
fn product_integral(f: &Surface, g: &Surface, q: &Rect, tol: f64) -> Result<f64> {
    quad::integral2(&f.times(g), q, tol)
}

fn jump_union(f: &Surface, g: &Surface) -> (Vec<f64>, Vec<f64>) {
    let mut jx: Vec<f64> = f.jumps_x().iter().chain(g.jumps_x()).copied().collect();
    let mut jy: Vec<f64> = f.jumps_y().iter().chain(g.jumps_y()).copied().collect();
    for v in [&mut jx, &mut jy] {
        v.sort_by(|a, b| a.total_cmp(b));
        v.dedup();
    }
    (jx, jy)
}

/// Both sides of the Korkine identity over `q`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KorkineReport {
    /// `Delta int int f g - int int f int int g`.
    pub lhs: f64,
    /// `1/2 int int int int (f1 - f2)(g1 - g2)` over `q x q`.
    pub rhs: f64,
    pub residual: f64,
    /// `max(|Delta int int f g|, |int int f int int g|, 1)`, the size residuals are judged against.
    pub scale: f64,
}

pub fn korkine(f: &Surface, g: &Surface, q: &Rect, tol: f64) -> Result<KorkineReport> {
    let area = q.area();
    let fg = area * product_integral(f, g, q, tol)?;
    let ff = quad::integral2(f, q, tol)? * quad::integral2(g, q, tol)?;
    let (jx, jy) = jump_union(f, g);
    let rhs = 0.5
        * quad::integral4(
            |(x1, y1), (x2, y2)| (f.eval(x1, y1) - f.eval(x2, y2)) * (g.eval(x1, y1) - g.eval(x2, y2)),
            q,
            &jx,
            &jy,
            tol,
        )?;
    let lhs = fg - ff;
    Ok(KorkineReport { lhs, rhs, residual: (lhs - rhs).abs(), scale: fg.abs().max(ff.abs()).max(1.0) })
}

pub fn korkine_residual(f: &Surface, g: &Surface, q: &Rect, tol: f64) -> Result<f64> {
    Ok(korkine(f, g, q, tol)?.residual)
}

pub fn chebyshev(f: &Surface, g: &Surface, q: &Rect, tol: f64) -> Result<ChebyshevReport> {
    let mean_f = quad::mean(f, q, tol)?;
    let mean_g = quad::mean(g, q, tol)?;
    let mean_fg = product_integral(f, g, q, tol)? / q.area();
    let t_value = mean_fg - mean_f * mean_g;
    let shifted = f.plus(&Surface::constant(-mean_f));
    let shifted_value = product_integral(&shifted, g, q, tol)? / q.area();
    let k = match korkine(f, g, q, tol) {
        Ok(k) => Some(k),
        Err(Error::Unconverged(_)) => None,
        Err(e) => return Err(e),
    };
    let range = |s: &Surface| -> Result<(f64, f64)> {
        match estimate_constants(s, q, EstimateKind::Range, 4096)?.regularity {
            Regularity::Range { min, max } => Ok((min, max)),
            _ => unreachable!("range estimate"),
        }
    };
    let (fm, fmax) = range(f)?;
    let (gm, gmax) = range(g)?;
    Ok(ChebyshevReport {
        t_value,
        mean_f,
        mean_g,
        bound: gruss_bound(fm, fmax, gm, gmax),
        method: ChebyshevMethod::Direct,
        korkine_value: k.map(|k| k.rhs / (q.area() * q.area())),
        shifted_value,
    })
}

/// `|T(f, g)| <= (Phi - phi)(Gamma - gamma) / 4`.
pub fn gruss_bound(phi: f64, big_phi: f64, gamma: f64, big_gamma: f64) -> f64 {
    0.25 * (big_phi - phi) * (big_gamma - gamma)
}

/// [`gruss_bound`] from two range certificates.
pub fn gruss_bound_certs(f: &RegularityCertificate, g: &RegularityCertificate) -> Result<f64> {
    match (f.regularity, g.regularity) {
        (Regularity::Range { min: a, max: b }, Regularity::Range { min: c, max: d }) => Ok(gruss_bound(a, b, c, d)),
        _ => Err(Error::Certificate("gruss bound needs two range certificates".into())),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LipschitzVariant {
    /// `|f(p1) - f(p2)| <= L |p1 - p2|` in the Euclidean norm.
    Euclidean,
    /// `|f(p1) - f(p2)| <= L |x1 - x2| |y1 - y2|`.
    ProductIncrement,
}

pub fn gruss_lipschitz_bound(l1: f64, l2: f64, q: &Rect, variant: LipschitzVariant) -> f64 {
    let (w, h) = (q.width(), q.height());
    match variant {
        LipschitzVariant::Euclidean => l1 * l2 / 12.0 * (w * w + h * h),
        LipschitzVariant::ProductIncrement => l1 * l2 / 36.0 * h.powi(4) * w.powi(4),
    }
}

/// What the product-increment hypothesis actually yields when integrated through Korkine:
/// `L1 L2 (b-a)^2 (d-c)^2 / 72`. Reported next to the printed constant.
pub fn gruss_product_increment_korkine(l1: f64, l2: f64, q: &Rect) -> f64 {
    l1 * l2 * (q.width() * q.height()).powi(2) / 72.0
}

/// `A(t0, t1; s0, s1)` for all sub-rectangles, through the cumulative integral `G(t, s)`
/// of `g` from the lower-left corner.
struct Cumulative<'a> {
    g: &'a Surface,
    q: Rect,
    tol: f64,
}

impl Cumulative<'_> {
    fn at(&self, t: f64, s: f64) -> f64 {
        let r = Rect::span(self.q.a, t, self.q.c, s);
        quad::integral2(self.g, &r, self.tol).unwrap_or(f64::NAN)
    }
}

/// `psi(t, s)` of the Peano kernel representation of `T`.
pub fn cheby_psi_surface(g: &Surface, q: &Rect, tol: f64) -> Surface {
    let (q, g) = (*q, g.clone());
    Surface::new(format!("psi[{}]", g.name()), move |t, s| {
        let cum = Cumulative { g: &g, q, tol };
        let (gts, gtd, gbs, gbd) = (cum.at(t, s), cum.at(t, q.d), cum.at(q.b, s), cum.at(q.b, q.d));
        // A over the four quadrants cut at (t, s)
        let sw = gts;
        let nw = gtd - gts;
        let se = gbs - gts;
        let ne = gbd - gtd - gbs + gts;
        (s - q.c) * (t - q.a) * ne - (s - q.c) * (q.b - t) * nw - (q.d - s) * (t - q.a) * se
            + (q.d - s) * (q.b - t) * sw
    })
    .with_domain(q)
}

#[derive(Debug, Clone, PartialEq)]
pub struct KernelReport {
    /// `(1/Delta^2) int int psi df`.
    pub t_via_kernel: f64,
    pub t_direct: f64,
    pub residual_vs_direct: f64,
    pub oracle: OracleReport,
}

pub fn cheby_kernel_psi(f: &Surface, g: &Surface, q: &Rect, opts: &OracleOptions) -> Result<KernelReport> {
    let psi = cheby_psi_surface(g, q, opts.tol * 1e-3);
    let oracle = rs_oracle_with(&psi, f, q, opts)?;
    let area = q.area();
    let t_via_kernel = oracle.value / (area * area);
    let mf = quad::mean(f, q, opts.tol * 1e-3)?;
    let mg = quad::mean(g, q, opts.tol * 1e-3)?;
    let t_direct = product_integral(f, g, q, opts.tol * 1e-3)? / area - mf * mg;
    Ok(KernelReport { t_via_kernel, t_direct, residual_vs_direct: (t_via_kernel - t_direct).abs(), oracle })
}

/// The three bounds on `Delta^2 |T|` through a kernel `k`: `sup k * V(f)`, `L int int |k|`
/// and `int int |k| df`. Absent certificates leave the branch `None`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelBounds {
    pub sup_kernel: f64,
    pub bv: Option<f64>,
    pub lipschitz: Option<f64>,
    pub bimonotone: Option<f64>,
}

/// Grid size for the kernel supremum.
const SUP_GRID: usize = 33;

pub fn kernel_bounds(
    kernel: &Surface,
    f: &Surface,
    q: &Rect,
    v: Option<f64>,
    l: Option<f64>,
    bimonotone: bool,
    opts: &OracleOptions,
) -> Result<KernelBounds> {
    let mut sup = f64::NEG_INFINITY;
    for i in 0..SUP_GRID {
        for j in 0..SUP_GRID {
            let (x, y) = q.lerp(i as f64 / (SUP_GRID - 1) as f64, j as f64 / (SUP_GRID - 1) as f64);
            sup = sup.max(kernel.eval(x, y));
        }
    }
    let abs_k = {
        let k = kernel.clone();
        Surface::new(format!("|{}|", kernel.name()), move |x, y| k.eval(x, y).abs()).with_domain(*q)
    };
    let lipschitz = match l {
        Some(l) => Some(l * quad::integral2(&abs_k, q, opts.tol)?),
        None => None,
    };
    let bimonotone = if bimonotone { Some(rs_oracle_with(&abs_k, f, q, opts)?.value) } else { None };
    Ok(KernelBounds { sup_kernel: sup, bv: v.map(|v| sup * v), lipschitz, bimonotone })
}

/// `Psi = P G* - P* G` for the weighted functional, with `P`, `G` the cumulative integrals of
/// `p` and `p g`, and `P*`, `G*` their upper-right complements.
pub fn weighted_psi_surface(g: &Surface, p: &Surface, q: &Rect, tol: f64) -> Surface {
    let (q, pg, p) = (*q, p.times(g), p.clone());
    Surface::new(format!("Psi[{},{}]", g.name(), p.name()), move |t, s| {
        let cp = Cumulative { g: &p, q, tol };
        let cg = Cumulative { g: &pg, q, tol };
        let star = |c: &Cumulative| c.at(q.b, q.d) - c.at(q.b, s) - c.at(t, q.d) + c.at(t, s);
        cp.at(t, s) * star(&cg) - star(&cp) * cg.at(t, s)
    })
    .with_domain(q)
}

/// `R(f; p)`, the `p`-weighted mean.
pub fn weighted_mean(f: &Surface, p: &Surface, q: &Rect, tol: f64) -> Result<f64> {
    let total = quad::integral2(p, q, tol)?;
    if !(total > 0.0) {
        return Err(Error::Domain("weight must have positive integral".into()));
    }
    Ok(quad::integral2(&p.times(f), q, tol)? / total)
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeightedReport {
    /// `R(fg; p) - R(f; p) R(g; p)`.
    pub direct: f64,
    /// `(1 / P(b,d)^2) int int Psi df`.
    pub via_kernel: f64,
    pub residual: f64,
    pub total_weight: f64,
    pub oracle: OracleReport,
}

pub fn weighted_chebyshev(f: &Surface, g: &Surface, p: &Surface, q: &Rect, opts: &OracleOptions) -> Result<WeightedReport> {
    let tol = opts.tol * 1e-3;
    let total_weight = quad::integral2(p, q, tol)?;
    let direct = weighted_mean(&f.times(g), p, q, tol)? - weighted_mean(f, p, q, tol)? * weighted_mean(g, p, q, tol)?;
    let psi = weighted_psi_surface(g, p, q, tol);
    let oracle = rs_oracle_with(&psi, f, q, opts)?;
    let via_kernel = oracle.value / (total_weight * total_weight);
    Ok(WeightedReport { direct, via_kernel, residual: (direct - via_kernel).abs(), total_weight, oracle })
}

/// `|aleph(f, g)| <= (M - m)(b - a)(d - c) / 2`; the Lipschitz constant of `g` does not enter.
pub fn aleph_gruss_bound(m: f64, big_m: f64, q: &Rect) -> f64 {
    0.5 * (big_m - m) * q.area()
}

/// The intermediate `L int int |f - M(f)|` the printed constant is derived from.
pub fn aleph_gruss_bound_l(f: &Surface, l: f64, q: &Rect, tol: f64) -> Result<f64> {
    let mf = quad::mean(f, q, tol)?;
    let dev = {
        let (jx, jy) = (f.jumps_x().to_vec(), f.jumps_y().to_vec());
        let f = f.clone();
        Surface::new("|f - M(f)|", move |x, y| (f.eval(x, y) - mf).abs()).with_jumps(jx, jy)
    };
    Ok(l * quad::integral2(&dev, q, tol)?)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlephGrussReport {
    pub value: f64,
    pub oracle_error: f64,
    pub printed: f64,
    pub with_l: f64,
}

impl AlephGrussReport {
    /// The `L`-dependent display is the tighter of the two.
    pub fn l_tighter(&self) -> bool {
        self.with_l < self.printed
    }
}

pub fn aleph_gruss(f: &Surface, g: &Surface, q: &Rect, m: f64, big_m: f64, l: f64, opts: &OracleOptions) -> Result<AlephGrussReport> {
    let r = aleph_functional(f, g, q, opts)?;
    Ok(AlephGrussReport {
        value: r.value,
        oracle_error: r.oracle.error_estimate,
        printed: aleph_gruss_bound(m, big_m, q),
        with_l: aleph_gruss_bound_l(f, l, q, opts.tol.max(1e-6))?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::univariate::{SepSum, Univariate};

    fn x() -> Surface {
        SepSum::product(1.0, Univariate::identity(), Univariate::constant(1.0)).to_surface("x")
    }
    fn y() -> Surface {
        SepSum::product(1.0, Univariate::constant(1.0), Univariate::identity()).to_surface("y")
    }
    fn sign_product() -> Surface {
        let sgn = Univariate::Step { t0: 0.5, lo: -1.0, hi: 1.0 };
        SepSum::product(1.0, sgn.clone(), sgn).to_surface("sgn")
    }

    #[test]
    fn chebyshev_of_x_with_itself() {
        let r = chebyshev(&x(), &x(), &Rect::unit(), 1e-12).unwrap();
        assert!((r.t_value - 1.0 / 12.0).abs() < 1e-12);
        assert!((r.korkine_value.unwrap() - 1.0 / 12.0).abs() < 1e-10);
        assert!((r.shifted_value - 1.0 / 12.0).abs() < 1e-12);
    }

    #[test]
    fn independent_factors_give_zero() {
        let r = chebyshev(&x(), &y(), &Rect::unit(), 1e-12).unwrap();
        assert!(r.t_value.abs() < 1e-12);
        assert!(korkine_residual(&x(), &y(), &Rect::unit(), 1e-12).unwrap() < 1e-9);
    }

    #[test]
    fn sign_product_attains_the_gruss_constant() {
        let s = sign_product();
        let r = chebyshev(&s, &s, &Rect::unit(), 1e-12).unwrap();
        assert!((r.t_value - 1.0).abs() < 1e-12);
        assert!((gruss_bound(-1.0, 1.0, -1.0, 1.0) - r.t_value).abs() < 1e-9);
    }

    #[test]
    fn lipschitz_constants() {
        let q = Rect::unit();
        assert!((gruss_lipschitz_bound(1.0, 1.0, &q, LipschitzVariant::Euclidean) - 1.0 / 6.0).abs() < 1e-15);
        assert!((gruss_lipschitz_bound(1.0, 1.0, &q, LipschitzVariant::ProductIncrement) - 1.0 / 36.0).abs() < 1e-15);
    }

    #[test]
    fn psi_vanishes_on_the_boundary() {
        let psi = cheby_psi_surface(&x().times(&y()), &Rect::unit(), 1e-12);
        for t in [0.0, 0.3, 1.0] {
            assert!(psi.eval(t, 0.0).abs() < 1e-14 && psi.eval(t, 1.0).abs() < 1e-14);
            assert!(psi.eval(0.0, t).abs() < 1e-14 && psi.eval(1.0, t).abs() < 1e-14);
        }
    }

    #[test]
    fn kernel_form_sees_only_the_mixed_variation_of_f() {
        // x has no mixed increments, so the kernel integral vanishes while T(x, x) = 1/12
        let opts = OracleOptions::new(1e-8).with_max_side(64);
        let r = cheby_kernel_psi(&x(), &x(), &Rect::unit(), &opts).unwrap();
        assert!(r.t_via_kernel.abs() < 1e-14);
        assert!((r.t_direct - 1.0 / 12.0).abs() < 1e-12);
    }

    #[test]
    fn psi_vanishes_for_constant_g() {
        let psi = cheby_psi_surface(&Surface::constant(3.0), &Rect::unit(), 1e-12);
        assert!(psi.eval(0.3, 0.7).abs() < 1e-12);
    }

    #[test]
    fn aleph_bound_arithmetic() {
        assert_eq!(aleph_gruss_bound(0.0, 1.0, &Rect::new(0.0, 2.0, 0.0, 3.0).unwrap()), 3.0);
        assert_eq!(aleph_gruss_bound(2.0, 2.0, &Rect::unit()), 0.0);
    }
}
