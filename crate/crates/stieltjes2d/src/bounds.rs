//! A-priori error bounds and the functionals they control.
//!
//! Every bound is a plain formula over certificate constants. [`evaluate`] pairs a
//! [`BoundKind`] with its functional, evaluates that functional with the oracle and
//! returns the inequality checks ([`Trial`]s) that decide whether the bound held.

use std::fmt;
use std::str::FromStr;

use crate::core::{corners, delta11, rect_split, Direction, GridPartition, Provenance, Rect, Regularity,
    RegularityCertificate, Surface, Trial, ErrorCertificate, CERT_SLACK};
use crate::cubature::{companion_rule, ostrowski_point_rule, simpson_rule, trapezoid_rule};
use crate::error::{Error, Result};
use crate::quad;
use crate::rs_sum::{rs_oracle_with, OracleOptions, OracleReport};
use crate::variation::{bdp_sup_inf, ESTIMATE_INFLATION};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BoundKind {
    OstrowskiBV,
    OstrowskiHolderU,
    CompanionBV,
    TrapezoidBV,
    SimpsonBV,
    OmegaRange,
    ThetaQuadrant,
    BdpUpper,
    BdpLower,
    FunctionalHolderBV,
    FunctionalHolderBimono,
    FunctionalBVBV,
    PsiCorners,
    PsiHolder,
    RangeE,
    CornerGrowthBV,
    CornerGrowthBimono,
    EfBV,
    EfBimono,
    TrapFuncHolderBV,
    TrapFuncLipschitzBV,
    TrapFuncHolderBimono,
}

impl BoundKind {
    pub const ALL: [BoundKind; 22] = [
        BoundKind::OstrowskiBV,
        BoundKind::OstrowskiHolderU,
        BoundKind::CompanionBV,
        BoundKind::TrapezoidBV,
        BoundKind::SimpsonBV,
        BoundKind::OmegaRange,
        BoundKind::ThetaQuadrant,
        BoundKind::BdpUpper,
        BoundKind::BdpLower,
        BoundKind::FunctionalHolderBV,
        BoundKind::FunctionalHolderBimono,
        BoundKind::FunctionalBVBV,
        BoundKind::PsiCorners,
        BoundKind::PsiHolder,
        BoundKind::RangeE,
        BoundKind::CornerGrowthBV,
        BoundKind::CornerGrowthBimono,
        BoundKind::EfBV,
        BoundKind::EfBimono,
        BoundKind::TrapFuncHolderBV,
        BoundKind::TrapFuncLipschitzBV,
        BoundKind::TrapFuncHolderBimono,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            BoundKind::OstrowskiBV => "ostrowski-bv",
            BoundKind::OstrowskiHolderU => "ostrowski-holder-u",
            BoundKind::CompanionBV => "companion-bv",
            BoundKind::TrapezoidBV => "trapezoid-bv",
            BoundKind::SimpsonBV => "simpson-bv",
            BoundKind::OmegaRange => "omega-range",
            BoundKind::ThetaQuadrant => "theta-quadrant",
            BoundKind::BdpUpper => "bdp-upper",
            BoundKind::BdpLower => "bdp-lower",
            BoundKind::FunctionalHolderBV => "functional-holder-bv",
            BoundKind::FunctionalHolderBimono => "functional-holder-bimono",
            BoundKind::FunctionalBVBV => "functional-bv-bv",
            BoundKind::PsiCorners => "psi-corners",
            BoundKind::PsiHolder => "psi-holder",
            BoundKind::RangeE => "range-e",
            BoundKind::CornerGrowthBV => "corner-growth-bv",
            BoundKind::CornerGrowthBimono => "corner-growth-bimono",
            BoundKind::EfBV => "ef-bv",
            BoundKind::EfBimono => "ef-bimono",
            BoundKind::TrapFuncHolderBV => "trapfunc-holder-bv",
            BoundKind::TrapFuncLipschitzBV => "trapfunc-lipschitz-bv",
            BoundKind::TrapFuncHolderBimono => "trapfunc-holder-bimono",
        }
    }

    /// Certificates read from `(f, u)`.
    pub fn consumes(&self) -> (&'static [&'static str], &'static [&'static str]) {
        use BoundKind::*;
        match self {
            OstrowskiBV | CompanionBV | TrapezoidBV | SimpsonBV => (&["bivariation"], &[]),
            OstrowskiHolderU | FunctionalHolderBV | PsiHolder | TrapFuncHolderBV => (&["holder"], &["bivariation"]),
            OmegaRange => (&["range"], &["bivariation"]),
            ThetaQuadrant => (&["bivariation"], &["holder"]),
            BdpUpper | BdpLower => (&["bivariation", "range"], &[]),
            FunctionalHolderBimono | TrapFuncHolderBimono => (&["holder"], &["bimonotone"]),
            FunctionalBVBV | EfBV => (&["bivariation"], &["bivariation"]),
            PsiCorners => (&[], &["bivariation"]),
            RangeE => (&["partial-range"], &["bimonotone"]),
            CornerGrowthBV => (&["corner-growth"], &["bivariation"]),
            CornerGrowthBimono => (&["corner-growth"], &["bimonotone"]),
            EfBimono => (&["bivariation"], &["bimonotone"]),
            TrapFuncLipschitzBV => (&["lipschitz"], &["bivariation"]),
        }
    }

    /// Kinds whose functional is a plain double integral (the integrator is ignored).
    pub fn is_riemann(&self) -> bool {
        matches!(self, BoundKind::OstrowskiBV | BoundKind::CompanionBV | BoundKind::TrapezoidBV | BoundKind::SimpsonBV)
    }

    /// Kinds checked as an ordering (`lower <= value <= upper`) rather than `|value| <= bound`.
    pub fn is_one_sided(&self) -> bool {
        matches!(self, BoundKind::BdpUpper | BoundKind::BdpLower | BoundKind::RangeE)
    }

    /// Kinds that evaluate `f` at a point of `Q`.
    pub fn uses_point(&self) -> bool {
        matches!(
            self,
            BoundKind::OstrowskiBV | BoundKind::OstrowskiHolderU | BoundKind::CompanionBV | BoundKind::ThetaQuadrant
        )
    }
}

impl fmt::Display for BoundKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BoundKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        BoundKind::ALL
            .iter()
            .copied()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Usage(format!("unknown bound kind '{s}'")))
    }
}

// ---------------------------------------------------------------------------
// Formulas

fn check_point(q: &Rect, x: f64, y: f64) -> Result<()> {
    if q.contains(x, y) {
        Ok(())
    } else {
        Err(Error::Domain(format!("point ({x}, {y}) outside {q}")))
    }
}

/// `[(b-a)/2 + |x - (a+b)/2|] [(d-c)/2 + |y - (c+d)/2|] V`.
pub fn bound_ostrowski(q: &Rect, x: f64, y: f64, v: f64) -> Result<f64> {
    check_point(q, x, y)?;
    let (mx, my) = q.center();
    Ok((0.5 * q.width() + (x - mx).abs()) * (0.5 * q.height() + (y - my).abs()) * v)
}

/// Point rule against an integrator, `f` Holder and `u` of bounded bivariation.
pub fn bound_ostrowski_holder_u(q: &Rect, x: f64, y: f64, holder: (f64, f64, f64, f64), vu: f64) -> Result<f64> {
    check_point(q, x, y)?;
    let (h1, h2, b1, b2) = holder;
    let (mx, my) = q.center();
    let ex = 0.5 * q.width() + (x - mx).abs();
    let ey = 0.5 * q.height() + (y - my).abs();
    Ok((h1 * ex.powf(b1) + h2 * ey.powf(b2)) * vu)
}

/// `(b-a)(d-c)/4 * V`.
pub fn bound_trapezoid(q: &Rect, v: f64) -> f64 {
    q.area() / 4.0 * v
}

/// `(b-a)(d-c)/9 * V`.
pub fn bound_simpson(q: &Rect, v: f64) -> f64 {
    q.area() / 9.0 * v
}

/// `[(b-a)/4 + |x - (3a+b)/4|] [(d-c)/4 + |y - (3c+d)/4|] V`, `x`, `y` in the lower half-ranges.
pub fn bound_companion(q: &Rect, x: f64, y: f64, v: f64) -> Result<f64> {
    let (mx, my) = q.center();
    if !(x >= q.a && x <= mx && y >= q.c && y <= my) {
        return Err(Error::Domain(format!("companion point ({x}, {y}) outside the lower half-ranges of {q}")));
    }
    let px = 0.25 * q.width() + (x - (3.0 * q.a + q.b) / 4.0).abs();
    let py = 0.25 * q.height() + (y - (3.0 * q.c + q.d) / 4.0).abs();
    Ok(px * py * v)
}

/// `(M - m)/2 * V(u)`.
pub fn bound_omega(vu: f64, m: f64, big_m: f64) -> Result<f64> {
    if m > big_m {
        return Err(Error::Certificate(format!("range with m = {m} > M = {big_m}")));
    }
    Ok(0.5 * (big_m - m) * vu)
}

/// Sum over the four quadrants at `(x, y)` of `[H1 len_x^b1 + H2 len_y^b2] * V(f, quadrant)`.
/// `quad_v` is ordered SW, SE, NW, NE.
pub fn bound_theta(q: &Rect, x: f64, y: f64, holder_u: (f64, f64, f64, f64), quad_v: [f64; 4]) -> Result<f64> {
    let pieces = rect_split(q, x, y)?;
    let (h1, h2, b1, b2) = holder_u;
    Ok(pieces
        .iter()
        .zip(quad_v)
        .map(|(r, v)| (h1 * r.width().powf(b1) + h2 * r.height().powf(b2)) * v)
        .sum())
}

/// `(upper, lower) = (delta11 u * inf f + S V(f), delta11 u * inf f + s V(f))`.
pub fn bound_bdp(delta_u: f64, inf_f: f64, vf: f64, sup_s: f64, inf_s: f64) -> (f64, f64) {
    (delta_u * inf_f + sup_s * vf, delta_u * inf_f + inf_s * vf)
}

fn holder_avg(q: &Rect, holder: (f64, f64, f64, f64), halved: bool) -> f64 {
    let (h1, h2, b1, b2) = holder;
    let k = |b: f64| if halved { 2f64.powf(b + 1.0) * (b + 1.0) } else { b + 1.0 };
    h1 * q.width().powf(b1) / k(b1) + h2 * q.height().powf(b2) / k(b2)
}

/// Holder `f`, bounded bivariation `g`.
pub fn bound_aleph_holder_bv(q: &Rect, holder: (f64, f64, f64, f64), vg: f64) -> f64 {
    holder_avg(q, holder, true) * vg
}

/// Holder `f`, bimonotone nondecreasing `g`.
pub fn bound_aleph_holder_bimono(q: &Rect, holder: (f64, f64, f64, f64), delta_g: f64) -> f64 {
    holder_avg(q, holder, false) * delta_g
}

pub fn bound_aleph_bv_bv(vf: f64, vg: f64) -> f64 {
    vf * vg
}

/// Largest of the four corner differences of `f` times `V(u)`.
pub fn bound_psi_corners(fc: [f64; 4], vu: f64) -> f64 {
    let [ac, ad, bc, bd] = fc;
    let spread = [(bd - ac).abs(), (bc - ad).abs(), (ad - bd).abs(), (ac - bc).abs()]
        .into_iter()
        .fold(0.0, f64::max);
    spread * vu
}

pub fn bound_psi_holder(q: &Rect, holder: (f64, f64, f64, f64), vu: f64) -> f64 {
    holder_avg(q, holder, false) * vu
}

/// Two-sided range bound `(lower, upper)` for `E(f, u)` with `u` bimonotone nondecreasing.
/// `fc` and `uc` are corner values in the order of [`corners`].
pub fn bound_range_e(fc: [f64; 4], partial: (f64, f64, f64, f64), uc: [f64; 4]) -> (f64, f64) {
    let [fac, fad, fbc, fbd] = fc;
    let [uac, uad, ubc, ubd] = uc;
    let (m1, big_m1, m2, big_m2) = partial;
    let big_m = big_m1.max(big_m2);
    let m = m1.min(m2);
    let lower = -(fbd - fac) * (ubd - uac) - (big_m1 - fad + big_m2 - m) * (ubd - ubc) - (big_m2 - fbc + big_m1 - m) * (ubd - uad);
    let upper = (fbd - fac) * (ubd - uac) + (m1 - fad + m2 - big_m) * (ubc - uac) + (m2 - fbc + m1 - big_m) * (uad - uac);
    (lower, upper)
}

/// Endpoint growth constants: `|f - f(corner)|` controlled by powers of the distances to it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CornerGrowth {
    pub la: f64,
    pub lb: f64,
    pub lc: f64,
    pub ld: f64,
    pub alpha1: f64,
    pub alpha2: f64,
    pub beta1: f64,
    pub beta2: f64,
}

impl CornerGrowth {
    /// The constants implied by a Holder condition on the coordinates.
    pub fn from_holder(h1: f64, h2: f64, beta1: f64, beta2: f64) -> Self {
        CornerGrowth { la: h1, lb: h1, lc: h2, ld: h2, alpha1: beta1, alpha2: beta2, beta1, beta2 }
    }
}

pub fn bound_corner_growth_bv(q: &Rect, cg: &CornerGrowth, vu: f64) -> f64 {
    let (w, h) = (q.width(), q.height());
    let x = cg.la * w.powf(cg.alpha1) + cg.lb * w.powf(cg.beta1);
    let y = cg.lc * h.powf(cg.alpha2) + cg.ld * h.powf(cg.beta2);
    4.0 * x.max(y) * vu
}

/// Bimonotone variant; may come out negative, in which case no function meets it.
pub fn bound_corner_growth_bimono(q: &Rect, cg: &CornerGrowth, uc: [f64; 4]) -> f64 {
    let [uac, uad, ubc, ubd] = uc;
    let (w, h) = (q.width(), q.height());
    let first = 2.0 * cg.la * w.powf(cg.alpha1) * (ubd - uad) - 2.0 * cg.lb * w.powf(cg.beta1) * (ubc - uac);
    let second = 2.0 * cg.lc * h.powf(cg.alpha2) * (ubd - uad) - 2.0 * cg.ld * h.powf(cg.beta2) * (ubc - uac);
    first.max(second)
}

pub fn bound_ef_bv(vf: f64, vu: f64) -> f64 {
    vf * vu
}

/// `delta11 u * V(f)` for bimonotone nondecreasing `u`.
pub fn bound_ef_bimono(delta_u: f64, vf: f64) -> f64 {
    delta_u * vf
}

/// Corner-weighted form for `f` and `u` both bimonotone nondecreasing.
pub fn bound_e_bimono_bimono(fc: [f64; 4], uc: [f64; 4], mean_u: f64) -> f64 {
    let [fac, fad, fbc, fbd] = fc;
    let [uac, uad, ubc, ubd] = uc;
    (ubd - mean_u) * fbd - (ubc - mean_u) * fbc - (uad - mean_u) * fad + (uac - mean_u) * fac
}

/// `[H1 ((b-a)/2)^a1 + H2 ((d-c)/2)^a2] V(u)`.
pub fn bound_trapfunc_holder_bv(q: &Rect, holder: (f64, f64, f64, f64), vu: f64) -> f64 {
    let (h1, h2, a1, a2) = holder;
    (h1 * (0.5 * q.width()).powf(a1) + h2 * (0.5 * q.height()).powf(a2)) * vu
}

/// `(L1 (b-a) + L2 (d-c)) / 2 * V(u)`.
pub fn bound_trapfunc_lipschitz_bv(q: &Rect, l1: f64, l2: f64, vu: f64) -> f64 {
    0.5 * (l1 * q.width() + l2 * q.height()) * vu
}

pub fn bound_trapfunc_holder_bimono(q: &Rect, holder: (f64, f64, f64, f64), uc: [f64; 4]) -> f64 {
    let (h1, h2, a1, a2) = holder;
    let [uac, uad, ubc, ubd] = uc;
    let (w, h) = (q.width(), q.height());
    let first = (0.5 * h1 * w.powf(a1) + 0.5 * h2 * h.powf(a2)) * (ubd - ubc - uad + uac);
    let second = (0.5 * h1 * w.powf(a1) * h + 0.5 * h2 * w * h.powf(a2)) * (ubd - uac);
    first + second
}

/// Sum of per-cell point-rule bounds for a tagged Riemann sum; `cell_v` gives the
/// bivariation of `f` over each cell.
pub fn composite_riemann_bound<V: Fn(&Rect) -> f64>(p: &GridPartition, cell_v: V) -> Result<f64> {
    let mut total = 0.0;
    for j in 0..p.ny() {
        for i in 0..p.nx() {
            let cell = p.cell(i, j);
            let (x, y) = p.tag(i, j);
            total += bound_ostrowski(&cell, x, y, cell_v(&cell))?;
        }
    }
    Ok(total)
}

/// Sum of per-cell Holder-by-bivariation bounds for the composite RS rule.
pub fn composite_rs_bound<V: Fn(&Rect) -> f64>(p: &GridPartition, holder: (f64, f64, f64, f64), cell_vg: V) -> f64 {
    let mut total = 0.0;
    for j in 0..p.ny() {
        for i in 0..p.nx() {
            let cell = p.cell(i, j);
            total += bound_aleph_holder_bv(&cell, holder, cell_vg(&cell));
        }
    }
    total
}

// ---------------------------------------------------------------------------
// Functionals

/// `phi_f(t, s) / ((b-a)(d-c))` interpolates the corner values of `f` (crosswise).
pub fn phi_surface(f: &Surface, q: &Rect) -> Surface {
    let [ac, ad, bc, bd] = corners(f, q);
    let q = *q;
    let area = q.area();
    Surface::new(format!("phi[{}]", f.name()), move |t, s| {
        ((t - q.a) * ((s - q.c) * ac + (q.d - s) * ad) + (q.b - t) * ((q.d - s) * bd + (s - q.c) * bc)) / area
    })
}

/// `psi_f = f - phi_f / ((b-a)(d-c))`.
pub fn psi_surface(f: &Surface, q: &Rect) -> Surface {
    let phi = phi_surface(f, q);
    let g = f.clone();
    Surface::new(format!("psi[{}]", f.name()), move |t, s| g.eval(t, s) - phi.eval(t, s))
        .with_jumps(f.jumps_x().to_vec(), f.jumps_y().to_vec())
}

/// The kernel `K_f(t, s) / ((b-a)(d-c))` whose integral against `u` is `E(f, u)`.
pub fn e_kernel(f: &Surface, q: &Rect) -> Surface {
    let g = f.clone();
    let q = *q;
    let area = q.area();
    Surface::new(format!("K[{}]", f.name()), move |t, s| {
        let (a, b, c, d) = (q.a, q.b, q.c, q.d);
        let fts = g.eval(t, s);
        let (ftc, fas, fac) = (g.eval(t, c), g.eval(a, s), g.eval(a, c));
        let (ftd, fad) = (g.eval(t, d), g.eval(a, d));
        let (fbs, fbc, fbd) = (g.eval(b, s), g.eval(b, c), g.eval(b, d));
        let sw = fts - ftc - fas + fac;
        let nw = ftd - fts - fad + fas;
        let se = fbs - fbc - fts + ftc;
        let ne = fbd - fbs - ftd + fts;
        ((t - a) * (s - c) * sw + (t - a) * (s - d) * nw + (t - b) * (s - c) * se + (t - b) * (s - d) * ne) / area
    })
}

/// A functional together with the oracle run behind it.
#[derive(Debug, Clone, PartialEq)]
pub struct FunctionalReport {
    pub value: f64,
    pub oracle: OracleReport,
}

/// `E(f, u) = (1/((b-a)(d-c))) int int K_f du`.
pub fn e_functional(f: &Surface, u: &Surface, q: &Rect, opts: &OracleOptions) -> Result<FunctionalReport> {
    let oracle = rs_oracle_with(&e_kernel(f, q), u, q, opts)?;
    Ok(FunctionalReport { value: oracle.value, oracle })
}

/// The dual `F(f, u) = E(u, f)`.
pub fn f_functional(f: &Surface, u: &Surface, q: &Rect, opts: &OracleOptions) -> Result<FunctionalReport> {
    e_functional(u, f, q, opts)
}

/// `int int psi_f du`.
pub fn psi_functional(f: &Surface, u: &Surface, q: &Rect, opts: &OracleOptions) -> Result<FunctionalReport> {
    let oracle = rs_oracle_with(&psi_surface(f, q), u, q, opts)?;
    Ok(FunctionalReport { value: oracle.value, oracle })
}

/// `omega = int int f du - (m + M)/2 * delta11 u`.
pub fn omega_functional(f: &Surface, u: &Surface, q: &Rect, m: f64, big_m: f64, opts: &OracleOptions) -> Result<FunctionalReport> {
    let oracle = rs_oracle_with(f, u, q, opts)?;
    Ok(FunctionalReport { value: oracle.value - 0.5 * (m + big_m) * delta11(u, q), oracle })
}

/// `Theta = delta11 u * f(x, y) - int int f du`.
pub fn theta_functional(f: &Surface, u: &Surface, q: &Rect, x: f64, y: f64, opts: &OracleOptions) -> Result<FunctionalReport> {
    check_point(q, x, y)?;
    let oracle = rs_oracle_with(f, u, q, opts)?;
    Ok(FunctionalReport { value: delta11(u, q) * f.eval(x, y) - oracle.value, oracle })
}

/// `aleph = int int f dg - delta11 g / ((b-a)(d-c)) * int int f`.
pub fn aleph_functional(f: &Surface, g: &Surface, q: &Rect, opts: &OracleOptions) -> Result<FunctionalReport> {
    let oracle = rs_oracle_with(f, g, q, opts)?;
    let (integral, _) = riemann_reference(f, q, opts)?;
    Ok(FunctionalReport { value: oracle.value - delta11(g, q) / q.area() * integral, oracle })
}

/// `int int_Q f` with an error estimate: Gauss-Legendre first, RS oracle against `ts` as fallback.
pub fn riemann_reference(f: &Surface, q: &Rect, opts: &OracleOptions) -> Result<(f64, f64)> {
    let tol = 1e-11;
    match quad::integral2(f, q, tol) {
        Ok(v) => Ok((v, if f.has_primitive() { 0.0 } else { 10.0 * tol * v.abs().max(1.0) })),
        Err(Error::Unconverged(_)) => {
            let r = rs_oracle_with(f, &area_integrator(), q, opts)?;
            Ok((r.value, r.error_estimate))
        }
        Err(e) => Err(e),
    }
}

fn area_integrator() -> Surface {
    Surface::new("ts", |t, s| t * s)
}

// ---------------------------------------------------------------------------
// Dispatch

/// Everything a bound check may need. Certificates are matched by kind.
#[derive(Debug, Clone)]
pub struct BoundInput {
    pub f: Surface,
    pub u: Surface,
    pub q: Rect,
    /// Evaluation point; the center of `q` when absent.
    pub point: Option<(f64, f64)>,
    pub f_certs: Vec<RegularityCertificate>,
    pub u_certs: Vec<RegularityCertificate>,
    /// Bivariation of `f` on the quadrants at the point (SW, SE, NW, NE).
    pub quadrant_v: Option<[f64; 4]>,
    /// `(S, s)` sup and inf of `delta11 u` over sub-rectangles; scanned when absent.
    pub bdp: Option<(f64, f64)>,
    pub oracle: OracleOptions,
}

impl BoundInput {
    pub fn new(f: Surface, u: Surface, q: Rect) -> Self {
        BoundInput {
            f,
            u,
            q,
            point: None,
            f_certs: Vec::new(),
            u_certs: Vec::new(),
            quadrant_v: None,
            bdp: None,
            oracle: OracleOptions::new(1e-8),
        }
    }

    pub fn at(mut self, x: f64, y: f64) -> Self {
        self.point = Some((x, y));
        self
    }

    pub fn f_cert(mut self, c: RegularityCertificate) -> Self {
        self.f_certs.push(c);
        self
    }

    pub fn u_cert(mut self, c: RegularityCertificate) -> Self {
        self.u_certs.push(c);
        self
    }

    pub fn quadrants(mut self, v: [f64; 4]) -> Self {
        self.quadrant_v = Some(v);
        self
    }

    pub fn bdp_extremes(mut self, sup_s: f64, inf_s: f64) -> Self {
        self.bdp = Some((sup_s, inf_s));
        self
    }

    pub fn oracle(mut self, opts: OracleOptions) -> Self {
        self.oracle = opts;
        self
    }

    fn point_or_center(&self) -> (f64, f64) {
        self.point.unwrap_or_else(|| self.q.center())
    }
}

/// Result of one bound check.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundOutcome {
    pub kind: BoundKind,
    /// The rule side of the functional (zero for pure kernel functionals).
    pub estimate: f64,
    /// The integral side, from the oracle.
    pub reference: f64,
    pub oracle_error: f64,
    /// For absolute kinds the bound; for one-sided kinds the side that was checked.
    pub bound: f64,
    pub lower: Option<f64>,
    pub upper: Option<f64>,
    pub trials: Vec<Trial>,
}

impl BoundOutcome {
    pub fn satisfied(&self) -> bool {
        self.trials.iter().all(Trial::holds)
    }

    /// The check with the largest excess.
    pub fn worst(&self) -> Trial {
        *self
            .trials
            .iter()
            .max_by(|a, b| a.excess().total_cmp(&b.excess()))
            .expect("at least one trial")
    }

    /// `|estimate - reference|`.
    pub fn residual(&self) -> f64 {
        (self.estimate - self.reference).abs()
    }

    /// Worst `lhs / rhs` over the checks.
    pub fn ratio(&self) -> f64 {
        // the denominator never drops below the check's own tolerance
        let t = self.worst();
        if t.lhs <= 0.0 {
            0.0
        } else {
            t.lhs / t.rhs.max(t.slack + CERT_SLACK)
        }
    }

    /// The outcome as an [`ErrorCertificate`]; fails for negative bounds.
    pub fn certificate(&self, rule_id: &str) -> Result<ErrorCertificate> {
        Ok(ErrorCertificate::new(rule_id, self.estimate, self.bound)?.with_oracle(self.reference, self.oracle_error))
    }
}

struct Certs<'a> {
    kind: BoundKind,
    role: &'static str,
    list: &'a [RegularityCertificate],
}

impl<'a> Certs<'a> {
    fn usable(&self) -> Result<Vec<Regularity>> {
        let mut out = Vec::new();
        for c in self.list {
            if let Provenance::Estimated { inflation, .. } = c.provenance {
                if inflation < ESTIMATE_INFLATION {
                    return Err(Error::Certificate(format!(
                        "estimated {} certificate on {} has inflation {inflation} < {ESTIMATE_INFLATION}",
                        c.regularity.kind_name(),
                        self.role
                    )));
                }
            }
            c.regularity.validate()?;
            out.push(c.regularity);
        }
        Ok(out)
    }

    fn missing(&self, what: &str) -> Error {
        Error::Certificate(format!("{} needs a {what} certificate on {}", self.kind, self.role))
    }

    fn bv(&self) -> Result<f64> {
        self.usable()?
            .into_iter()
            .find_map(|r| match r {
                Regularity::BoundedBivariation { v } => Some(v),
                _ => None,
            })
            .ok_or_else(|| self.missing("bivariation"))
    }

    fn holder(&self) -> Result<(f64, f64, f64, f64)> {
        self.usable()?
            .into_iter()
            .find_map(|r| match r {
                Regularity::Holder { h1, h2, beta1, beta2 } => Some((h1, h2, beta1, beta2)),
                _ => None,
            })
            .ok_or_else(|| self.missing("holder"))
    }

    fn lipschitz(&self) -> Result<(f64, f64)> {
        self.usable()?
            .into_iter()
            .find_map(|r| match r {
                Regularity::Lipschitz { l1, l2 } => Some((l1, l2)),
                _ => None,
            })
            .ok_or_else(|| self.missing("lipschitz"))
    }

    fn range(&self) -> Result<(f64, f64)> {
        self.usable()?
            .into_iter()
            .find_map(|r| match r {
                Regularity::Range { min, max } => Some((min, max)),
                _ => None,
            })
            .ok_or_else(|| self.missing("range"))
    }

    fn partial_range(&self) -> Result<(f64, f64, f64, f64)> {
        let regs = self.usable()?;
        let direct = regs.iter().find_map(|r| match *r {
            Regularity::PartialRange { min1, max1, min2, max2 } => Some((min1, max1, min2, max2)),
            _ => None,
        });
        let from_range = || {
            regs.iter().find_map(|r| match *r {
                Regularity::Range { min, max } => Some((min, max, min, max)),
                _ => None,
            })
        };
        direct.or_else(from_range).ok_or_else(|| self.missing("partial-range"))
    }

    fn bimonotone_increasing(&self) -> Result<()> {
        let found = self.usable()?.into_iter().find_map(|r| match r {
            Regularity::Bimonotone { direction } => Some(direction),
            _ => None,
        });
        match found {
            Some(Direction::Increasing) => Ok(()),
            Some(Direction::Decreasing) => {
                Err(Error::Certificate(format!("{} needs {} bimonotone nondecreasing", self.kind, self.role)))
            }
            None => Err(self.missing("bimonotone")),
        }
    }

    fn corner_growth(&self) -> Result<CornerGrowth> {
        let regs = self.usable()?;
        let direct = regs.iter().find_map(|r| match *r {
            Regularity::CornerGrowth { la, lb, lc, ld, alpha1, alpha2, beta1, beta2 } => {
                Some(CornerGrowth { la, lb, lc, ld, alpha1, alpha2, beta1, beta2 })
            }
            _ => None,
        });
        let from_holder = || {
            regs.iter().find_map(|r| match *r {
                Regularity::Holder { h1, h2, beta1, beta2 } => Some(CornerGrowth::from_holder(h1, h2, beta1, beta2)),
                _ => None,
            })
        };
        direct.or_else(from_holder).ok_or_else(|| self.missing("corner-growth"))
    }
}

fn abs_outcome(kind: BoundKind, estimate: f64, reference: f64, err: f64, bound: f64) -> BoundOutcome {
    BoundOutcome {
        kind,
        estimate,
        reference,
        oracle_error: err,
        bound,
        lower: None,
        upper: None,
        trials: vec![Trial::new((estimate - reference).abs(), bound, err)],
    }
}

/// Evaluate the functional behind `kind` and check it against the bound built from the certificates.
pub fn evaluate(kind: BoundKind, input: &BoundInput) -> Result<BoundOutcome> {
    use BoundKind::*;
    let fc = Certs { kind, role: "f", list: &input.f_certs };
    let uc = Certs { kind, role: "u", list: &input.u_certs };
    let (f, u, q) = (&input.f, &input.u, &input.q);
    let opts = &input.oracle;
    let (x, y) = input.point_or_center();
    match kind {
        OstrowskiBV | CompanionBV | TrapezoidBV | SimpsonBV => {
            let v = fc.bv()?;
            let (estimate, bound) = match kind {
                OstrowskiBV => (ostrowski_point_rule(f, q, x, y)?, bound_ostrowski(q, x, y, v)?),
                CompanionBV => {
                    let (x, y) = input.point.unwrap_or((q.a, q.c));
                    (companion_rule(f, q, x, y)?, bound_companion(q, x, y, v)?)
                }
                TrapezoidBV => (trapezoid_rule(f, q), bound_trapezoid(q, v)),
                _ => (simpson_rule(f, q), bound_simpson(q, v)),
            };
            let (reference, err) = riemann_reference(f, q, opts)?;
            Ok(abs_outcome(kind, estimate, reference, err, bound))
        }
        OstrowskiHolderU => {
            let bound = bound_ostrowski_holder_u(q, x, y, fc.holder()?, uc.bv()?)?;
            let th = theta_functional(f, u, q, x, y, opts)?;
            Ok(abs_outcome(kind, th.value + th.oracle.value, th.oracle.value, th.oracle.error_estimate, bound))
        }
        ThetaQuadrant => {
            let holder_u = uc.holder()?;
            let quad_v = match input.quadrant_v {
                Some(v) => v,
                None => [fc.bv()?; 4],
            };
            let bound = bound_theta(q, x, y, holder_u, quad_v)?;
            let th = theta_functional(f, u, q, x, y, opts)?;
            Ok(abs_outcome(kind, th.value + th.oracle.value, th.oracle.value, th.oracle.error_estimate, bound))
        }
        OmegaRange => {
            let (m, big_m) = fc.range()?;
            let bound = bound_omega(uc.bv()?, m, big_m)?;
            let om = omega_functional(f, u, q, m, big_m, opts)?;
            let estimate = 0.5 * (m + big_m) * delta11(u, q);
            Ok(abs_outcome(kind, estimate, om.oracle.value, om.oracle.error_estimate, bound))
        }
        BdpUpper | BdpLower => {
            let vf = fc.bv()?;
            let (m, _) = fc.range()?;
            let (sup_s, inf_s) = match input.bdp {
                Some(p) => p,
                None => {
                    let r = bdp_sup_inf(u, q, 32)?;
                    (r.sup, r.inf)
                }
            };
            let (upper, lower) = bound_bdp(delta11(u, q), m, vf, sup_s, inf_s);
            let o = rs_oracle_with(f, u, q, opts)?;
            let err = o.error_estimate;
            let (trial, bound) = if kind == BdpUpper {
                (Trial::new(o.value, upper, err), upper)
            } else {
                (Trial::new(lower, o.value, err), lower)
            };
            Ok(BoundOutcome {
                kind,
                estimate: bound,
                reference: o.value,
                oracle_error: err,
                bound,
                lower: Some(lower),
                upper: Some(upper),
                trials: vec![trial],
            })
        }
        FunctionalHolderBV | FunctionalHolderBimono | FunctionalBVBV => {
            let bound = match kind {
                FunctionalHolderBV => bound_aleph_holder_bv(q, fc.holder()?, uc.bv()?),
                FunctionalHolderBimono => {
                    uc.bimonotone_increasing()?;
                    bound_aleph_holder_bimono(q, fc.holder()?, delta11(u, q))
                }
                _ => bound_aleph_bv_bv(fc.bv()?, uc.bv()?),
            };
            let al = aleph_functional(f, u, q, opts)?;
            let estimate = al.oracle.value - al.value;
            Ok(abs_outcome(kind, estimate, al.oracle.value, al.oracle.error_estimate, bound))
        }
        PsiCorners | PsiHolder => {
            let vu = uc.bv()?;
            let bound = if kind == PsiCorners {
                bound_psi_corners(corners(f, q), vu)
            } else {
                bound_psi_holder(q, fc.holder()?, vu)
            };
            let p = psi_functional(f, u, q, opts)?;
            Ok(abs_outcome(kind, 0.0, p.value, p.oracle.error_estimate, bound))
        }
        RangeE => {
            let partial = fc.partial_range()?;
            uc.bimonotone_increasing()?;
            let (lower, upper) = bound_range_e(corners(f, q), partial, corners(u, q));
            let e = e_functional(f, u, q, opts)?;
            let err = e.oracle.error_estimate;
            Ok(BoundOutcome {
                kind,
                estimate: 0.0,
                reference: e.value,
                oracle_error: err,
                bound: 0.5 * (upper - lower),
                lower: Some(lower),
                upper: Some(upper),
                trials: vec![Trial::new(lower, e.value, err), Trial::new(e.value, upper, err)],
            })
        }
        CornerGrowthBV | CornerGrowthBimono => {
            let cg = fc.corner_growth()?;
            let bound = if kind == CornerGrowthBV {
                bound_corner_growth_bv(q, &cg, uc.bv()?)
            } else {
                uc.bimonotone_increasing()?;
                bound_corner_growth_bimono(q, &cg, corners(u, q))
            };
            let e = e_functional(f, u, q, opts)?;
            Ok(abs_outcome(kind, 0.0, e.value, e.oracle.error_estimate, bound))
        }
        EfBV => {
            let bound = bound_ef_bv(fc.bv()?, uc.bv()?);
            let e = e_functional(f, u, q, opts)?;
            let dual = f_functional(f, u, q, opts)?;
            let mut out = abs_outcome(kind, 0.0, e.value, e.oracle.error_estimate, bound);
            out.trials.push(Trial::new(dual.value.abs(), bound, dual.oracle.error_estimate));
            Ok(out)
        }
        EfBimono => {
            uc.bimonotone_increasing()?;
            let bound = bound_ef_bimono(delta11(u, q), fc.bv()?);
            let e = e_functional(f, u, q, opts)?;
            Ok(abs_outcome(kind, 0.0, e.value, e.oracle.error_estimate, bound))
        }
        TrapFuncHolderBV | TrapFuncLipschitzBV | TrapFuncHolderBimono => {
            let bound = match kind {
                TrapFuncHolderBV => bound_trapfunc_holder_bv(q, fc.holder()?, uc.bv()?),
                TrapFuncLipschitzBV => {
                    let (l1, l2) = fc.lipschitz()?;
                    bound_trapfunc_lipschitz_bv(q, l1, l2, uc.bv()?)
                }
                _ => {
                    uc.bimonotone_increasing()?;
                    bound_trapfunc_holder_bimono(q, fc.holder()?, corners(u, q))
                }
            };
            let o = rs_oracle_with(f, u, q, opts)?;
            let estimate = corners(f, q).iter().sum::<f64>() / 4.0 * delta11(u, q);
            Ok(abs_outcome(kind, estimate, o.value, o.error_estimate, bound))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ts() -> Surface {
        Surface::new("ts", |t, s| t * s)
    }

    fn declared(r: Regularity) -> RegularityCertificate {
        RegularityCertificate::declared(r).unwrap()
    }

    fn opts() -> OracleOptions {
        OracleOptions::new(1e-9).with_max_side(512)
    }

    #[test]
    fn names_round_trip() {
        for k in BoundKind::ALL {
            assert_eq!(k.name().parse::<BoundKind>().unwrap(), k);
        }
        assert!("nope".parse::<BoundKind>().is_err());
    }

    #[test]
    fn closed_form_examples() {
        let q = Rect::unit();
        assert!((bound_ostrowski(&q, 0.5, 0.5, 1.0).unwrap() - 0.25).abs() < 1e-15);
        assert!((bound_ostrowski(&q, 0.0, 0.0, 1.0).unwrap() - 1.0).abs() < 1e-15);
        assert!((bound_trapezoid(&q, 1.0) - 0.25).abs() < 1e-15);
        assert!((bound_simpson(&q, 1.0) - 1.0 / 9.0).abs() < 1e-15);
        assert!((bound_companion(&q, 0.25, 0.25, 1.0).unwrap() - 1.0 / 16.0).abs() < 1e-15);
        assert!((bound_companion(&q, 0.0, 0.0, 1.0).unwrap() - 0.25).abs() < 1e-15);
        assert!(bound_companion(&q, 0.75, 0.25, 1.0).is_err());
        assert!((bound_omega(1.0, -1.0, 1.0).unwrap() - 1.0).abs() < 1e-15);
        assert!((bound_aleph_holder_bv(&q, (1.0, 1.0, 1.0, 1.0), 1.0) - 0.25).abs() < 1e-15);
        assert!((bound_trapfunc_lipschitz_bv(&q, 1.0, 1.0, 1.0) - 1.0).abs() < 1e-15);
        assert!((bound_trapfunc_holder_bv(&q, (1.0, 1.0, 1.0, 1.0), 1.0) - 1.0).abs() < 1e-15);
        assert_eq!(bound_bdp(1.0, 0.0, 1.0, 1.0, 0.0), (1.0, 0.0));
        assert!((bound_psi_corners([0.0, 0.0, 0.0, 1.0], 1.0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn theta_degenerate_and_symmetric_splits() {
        let q = Rect::unit();
        let h = (1.0, 2.0, 1.0, 0.5);
        let corner = bound_theta(&q, 0.0, 0.0, h, [0.0, 0.0, 0.0, 3.0]).unwrap();
        assert!((corner - 3.0 * (1.0 + 2.0)).abs() < 1e-12);
        let center = bound_theta(&q, 0.5, 0.5, h, [1.0; 4]).unwrap();
        assert!((center - 4.0 * (0.5 + 2.0 * 0.5f64.sqrt())).abs() < 1e-12);
    }

    #[test]
    fn range_e_vanishes_for_constants() {
        let (lo, hi) = bound_range_e([2.0; 4], (2.0, 2.0, 2.0, 2.0), [0.0, 0.3, 0.4, 1.0]);
        assert!(lo.abs() < 1e-15 && hi.abs() < 1e-15);
    }

    #[test]
    fn bounds_grow_with_constants() {
        let q = Rect::new(0.0, 2.0, -1.0, 1.0).unwrap();
        let h = (1.0, 0.5, 0.7, 0.3);
        let hb = (1.1, 0.6, 0.7, 0.3);
        assert!(bound_ostrowski_holder_u(&q, 0.3, 0.2, hb, 1.0).unwrap() > bound_ostrowski_holder_u(&q, 0.3, 0.2, h, 1.0).unwrap());
        assert!(bound_psi_holder(&q, hb, 1.0) > bound_psi_holder(&q, h, 1.0));
        assert!(bound_omega(1.0, 0.0, 2.0).unwrap() > bound_omega(1.0, 0.0, 1.0).unwrap());
        assert!(bound_ostrowski(&q, 1.0, 0.0, 2.0).unwrap() > bound_ostrowski(&q, 1.0, 0.0, 1.0).unwrap());
    }

    #[test]
    fn ostrowski_scales_with_dilation() {
        let q = Rect::new(0.0, 1.0, 0.0, 2.0).unwrap();
        let big = Rect::new(0.0, 3.0, 0.0, 6.0).unwrap();
        let b1 = bound_ostrowski(&q, 0.2, 0.5, 1.0).unwrap();
        let b3 = bound_ostrowski(&big, 0.6, 1.5, 1.0).unwrap();
        assert!((b3 - 9.0 * b1).abs() < 1e-12);
        let c1 = bound_companion(&q, 0.1, 0.3, 1.0).unwrap();
        let c3 = bound_companion(&big, 0.3, 0.9, 1.0).unwrap();
        assert!((c3 - 9.0 * c1).abs() < 1e-12);
    }

    #[test]
    fn e_functional_vanishes_for_constant_f() {
        let e = e_functional(&Surface::constant(3.0), &ts(), &Rect::unit(), &opts()).unwrap();
        assert!(e.value.abs() < 1e-12);
    }

    #[test]
    fn psi_surface_matches_its_definition() {
        let q = Rect::unit();
        let f = ts();
        let psi = psi_surface(&f, &q);
        // phi_f(0,0) = (b-a)(d-c) f(b,d)
        assert!((psi.eval(0.0, 0.0) - (0.0 - 1.0)).abs() < 1e-15);
        assert!((psi.eval(1.0, 1.0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn trapezoid_bv_on_ts() {
        let input = BoundInput::new(ts(), ts(), Rect::unit())
            .f_cert(declared(Regularity::BoundedBivariation { v: 1.0 }))
            .oracle(opts());
        let out = evaluate(BoundKind::TrapezoidBV, &input).unwrap();
        assert!((out.bound - 0.25).abs() < 1e-15);
        assert!(out.residual() < 1e-12);
        assert!(out.satisfied());
    }

    #[test]
    fn omega_example() {
        let input = BoundInput::new(ts(), ts(), Rect::unit())
            .f_cert(declared(Regularity::Range { min: 0.0, max: 1.0 }))
            .u_cert(declared(Regularity::BoundedBivariation { v: 1.0 }))
            .oracle(opts());
        let out = evaluate(BoundKind::OmegaRange, &input).unwrap();
        assert!((out.bound - 0.5).abs() < 1e-15);
        assert!((out.reference - out.estimate + 0.25).abs() < 1e-5);
        assert!(out.satisfied());
    }

    #[test]
    fn bdp_examples() {
        let input = BoundInput::new(ts(), ts(), Rect::unit())
            .f_cert(declared(Regularity::BoundedBivariation { v: 1.0 }))
            .f_cert(declared(Regularity::Range { min: 0.0, max: 1.0 }))
            .oracle(opts());
        let up = evaluate(BoundKind::BdpUpper, &input).unwrap();
        assert!((up.upper.unwrap() - 1.0).abs() < 1e-12);
        assert!(up.satisfied());
        let neg = Surface::new("-ts", |t, s| -t * s);
        let input = BoundInput { u: neg, ..input };
        let lo = evaluate(BoundKind::BdpLower, &input).unwrap();
        assert!((lo.lower.unwrap() + 1.0).abs() < 1e-12);
        assert!(lo.satisfied());
    }

    #[test]
    fn missing_certificates_are_reported() {
        let input = BoundInput::new(ts(), ts(), Rect::unit());
        assert!(matches!(evaluate(BoundKind::OstrowskiBV, &input), Err(Error::Certificate(_))));
        let weak = RegularityCertificate::estimated(Regularity::BoundedBivariation { v: 1.0 }, 64, 1.0).unwrap();
        let input = input.f_cert(weak);
        assert!(matches!(evaluate(BoundKind::OstrowskiBV, &input), Err(Error::Certificate(_))));
    }

    #[test]
    fn single_variable_f_breaks_printed_trapezoid_bound() {
        // f = t + s has zero bivariation, so the bound is zero, but the residual is not.
        let f = Surface::new("t+s", |t, s| t + s);
        let input = BoundInput::new(f, ts(), Rect::unit())
            .f_cert(declared(Regularity::BoundedBivariation { v: 0.0 }))
            .oracle(opts());
        let out = evaluate(BoundKind::TrapezoidBV, &input).unwrap();
        assert_eq!(out.bound, 0.0);
        assert!((out.residual() - 1.0).abs() < 1e-12);
        assert!(!out.satisfied());
    }

    #[test]
    fn aleph_and_trapfunc_on_linear_f() {
        let f = Surface::new("t+s", |t, s| t + s);
        let input = BoundInput::new(f, ts(), Rect::unit())
            .f_cert(declared(Regularity::Holder { h1: 1.0, h2: 1.0, beta1: 1.0, beta2: 1.0 }))
            .f_cert(declared(Regularity::Lipschitz { l1: 1.0, l2: 1.0 }))
            .u_cert(declared(Regularity::BoundedBivariation { v: 1.0 }))
            .oracle(opts());
        for k in [BoundKind::TrapFuncHolderBV, BoundKind::TrapFuncLipschitzBV, BoundKind::FunctionalHolderBV] {
            let out = evaluate(k, &input).unwrap();
            assert!(out.residual() < 1e-6, "{k}: {}", out.residual());
            assert!(out.satisfied());
        }
    }
}
