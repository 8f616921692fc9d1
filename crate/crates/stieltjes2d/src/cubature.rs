//! Single-panel cubature rules and their composite versions.

use std::fmt;
use std::str::FromStr;

use crate::core::{corners, delta11, GridPartition, Rect, Surface};
use crate::error::{Error, Result};
use crate::quad;
use crate::rs_sum::{rs_oracle, OracleReport};
use crate::variation::{bimonotone_check, BimonotoneClass};

/// Default tolerance for edge means and cell integrals.
pub const QUADRATURE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RuleId {
    OstrowskiPoint { x: f64, y: f64 },
    /// `(Delta/4) * [f(b,d) - f(b,c) - f(a,d) + f(a,c)]` for the plain double integral.
    Trapezoid4,
    /// Four-point rule for the RS integral, exact on `1, x, y, xy`.
    RsTrapezoid,
    MidpointRS,
    Simpson9,
    Companion4 { x: f64, y: f64 },
    TrapezoidFunctional,
    RiemannComposite,
    RsComposite,
    MercerBracket,
}

impl RuleId {
    /// CLI name; point parameters are supplied separately.
    pub fn name(&self) -> &'static str {
        match self {
            RuleId::OstrowskiPoint { .. } => "ostrowski",
            RuleId::Trapezoid4 => "trapezoid4",
            RuleId::RsTrapezoid => "rs-trapezoid",
            RuleId::MidpointRS => "midpoint",
            RuleId::Simpson9 => "simpson9",
            RuleId::Companion4 { .. } => "companion4",
            RuleId::TrapezoidFunctional => "trapezoid-functional",
            RuleId::RiemannComposite => "riemann",
            RuleId::RsComposite => "rs-composite",
            RuleId::MercerBracket => "mercer",
        }
    }

    /// Parse a CLI name, filling point parameters from `(x, y)`.
    pub fn parse_with_point(s: &str, x: f64, y: f64) -> Result<Self> {
        Ok(match s {
            "ostrowski" => RuleId::OstrowskiPoint { x, y },
            "companion4" => RuleId::Companion4 { x, y },
            other => other.parse()?,
        })
    }

    /// Rules whose estimate approximates `int int f du` rather than the plain double integral.
    pub fn is_stieltjes(&self) -> bool {
        matches!(
            self,
            RuleId::RsTrapezoid | RuleId::MidpointRS | RuleId::RsComposite | RuleId::MercerBracket | RuleId::TrapezoidFunctional
        )
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RuleId::OstrowskiPoint { x, y } => write!(f, "ostrowski({x},{y})"),
            RuleId::Companion4 { x, y } => write!(f, "companion4({x},{y})"),
            other => f.write_str(other.name()),
        }
    }
}

impl FromStr for RuleId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "ostrowski" => RuleId::OstrowskiPoint { x: f64::NAN, y: f64::NAN },
            "trapezoid4" => RuleId::Trapezoid4,
            "rs-trapezoid" => RuleId::RsTrapezoid,
            "midpoint" => RuleId::MidpointRS,
            "simpson9" => RuleId::Simpson9,
            "companion4" => RuleId::Companion4 { x: f64::NAN, y: f64::NAN },
            "trapezoid-functional" => RuleId::TrapezoidFunctional,
            "riemann" => RuleId::RiemannComposite,
            "rs-composite" => RuleId::RsComposite,
            "mercer" => RuleId::MercerBracket,
            _ => return Err(Error::Usage(format!("unknown rule '{s}'"))),
        })
    }
}

fn check_point(q: &Rect, x: f64, y: f64) -> Result<()> {
    if q.contains(x, y) {
        Ok(())
    } else {
        Err(Error::Domain(format!("point ({x}, {y}) outside {q}")))
    }
}

/// `area(q) * f(x, y)`.
pub fn ostrowski_point_rule(f: &Surface, q: &Rect, x: f64, y: f64) -> Result<f64> {
    check_point(q, x, y)?;
    Ok(q.area() * f.eval(x, y))
}

/// `(Delta/4) * [f(b,d) - f(b,c) - f(a,d) + f(a,c)]`, the corner combination of the
/// bounded-bivariation trapezoid inequality (note the alternating signs).
pub fn trapezoid_rule(f: &Surface, q: &Rect) -> f64 {
    0.25 * q.area() * delta11(f, q)
}

/// Corner weights `A, B, C, D` of the RS-trapezoid rule, ordered `(a,c), (a,d), (b,c), (b,d)`.
pub fn rs_trapezoid_weights(g: &Surface, q: &Rect, tol: f64) -> Result<[f64; 4]> {
    let (w, h) = (q.width(), q.height());
    let mx_c = quad::line_x(g, q.a, q.b, q.c, tol)? / w;
    let mx_d = quad::line_x(g, q.a, q.b, q.d, tol)? / w;
    let my_a = quad::line_y(g, q.a, q.c, q.d, tol)? / h;
    let my_b = quad::line_y(g, q.b, q.c, q.d, tol)? / h;
    let gm = quad::mean(g, q, tol)?;
    let [gac, gad, gbc, gbd] = corners(g, q);
    Ok([
        gac - mx_c - my_a + gm,
        -(gad - mx_d - my_a + gm),
        -(gbc - mx_c - my_b + gm),
        gbd - mx_d - my_b + gm,
    ])
}

/// `A f(a,c) + B f(a,d) + C f(b,c) + D f(b,d)`.
pub fn rs_trapezoid_rule(f: &Surface, g: &Surface, q: &Rect, tol: f64) -> Result<f64> {
    let w = rs_trapezoid_weights(g, q, tol)?;
    let fc = corners(f, q);
    Ok(w.iter().zip(fc.iter()).map(|(a, b)| a * b).sum())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MidpointRule {
    pub value: f64,
    pub node: (f64, f64),
}

fn degenerate_threshold(g: &Surface, q: &Rect) -> f64 {
    1e-12 * corners(g, q).iter().fold(1.0f64, |m, v| m.max(v.abs()))
}

/// Node of the RS-midpoint rule: the quotients reproducing the moments of `x` and `y`.
pub fn rs_midpoint_node(g: &Surface, q: &Rect, tol: f64) -> Result<(f64, f64)> {
    let dg = delta11(g, q);
    if dg.abs() <= degenerate_threshold(g, q) {
        return Err(Error::DegenerateIntegrator(dg));
    }
    let [gac, gad, gbc, gbd] = corners(g, q);
    let ix = quad::line_x(g, q.a, q.b, q.d, tol)? - quad::line_x(g, q.a, q.b, q.c, tol)?;
    let iy = quad::line_y(g, q.b, q.c, q.d, tol)? - quad::line_y(g, q.a, q.c, q.d, tol)?;
    let t = (q.b * (gbd - gbc) - q.a * (gad - gac) - ix) / dg;
    let s = (q.d * (gbd - gad) - q.c * (gbc - gac) - iy) / dg;
    if !q.contains(t, s) {
        return Err(Error::NodeOutOfDomain(t, s));
    }
    Ok((t, s))
}

/// `delta11 g(q) * f(t, s)` at the moment-matching node.
pub fn rs_midpoint_rule(f: &Surface, g: &Surface, q: &Rect, tol: f64) -> Result<MidpointRule> {
    let node = rs_midpoint_node(g, q, tol)?;
    Ok(MidpointRule { value: delta11(g, q) * f.eval(node.0, node.1), node })
}

/// Simpson-type combination exactly as printed:
/// `(Delta/36)[f(b,d) - f(b,c) - f(a,d) + f(a,c)]
///  + (Delta/9)[f(m,d) + f(b,n) + 4 f(m,n) - f(m,c) - f(a,n)]`, with `(m,n)` the center.
///
/// It is not normalized for constants (`f = 1` gives `4/9 * Delta`).
pub fn simpson_rule(f: &Surface, q: &Rect) -> f64 {
    let (m, n) = q.center();
    let area = q.area();
    area / 36.0 * delta11(f, q)
        + area / 9.0
            * (f.eval(m, q.d) + f.eval(q.b, n) + 4.0 * f.eval(m, n) - f.eval(m, q.c) - f.eval(q.a, n))
}

/// `(Delta/4)[f(x,y) + f(a+b-x, y) + f(x, c+d-y) + f(a+b-x, c+d-y)]`.
pub fn companion_rule(f: &Surface, q: &Rect, x: f64, y: f64) -> Result<f64> {
    let (mx, my) = q.center();
    if !(q.a <= x && x <= mx && q.c <= y && y <= my) {
        return Err(Error::Domain(format!("companion point ({x}, {y}) must lie in [a,(a+b)/2] x [c,(c+d)/2]")));
    }
    let (xr, yr) = (q.a + q.b - x, q.c + q.d - y);
    Ok(0.25 * q.area() * (f.eval(x, y) + f.eval(xr, y) + f.eval(x, yr) + f.eval(xr, yr)))
}

#[derive(Debug, Clone, PartialEq)]
pub struct FunctionalValue {
    pub value: f64,
    pub oracle: OracleReport,
}

/// `T(f,u;Q) = (corner mean of f) * delta11 u(Q) - int int f du`.
pub fn trapezoid_functional(f: &Surface, u: &Surface, q: &Rect, tol: f64) -> Result<FunctionalValue> {
    let oracle = rs_oracle(f, u, q, tol)?;
    if !oracle.converged {
        return Err(Error::Unconverged(format!(
            "RS oracle stopped at {} cells per side, last delta {:e}",
            oracle.resolution,
            oracle.deltas.last().copied().unwrap_or(0.0)
        )));
    }
    let avg = corners(f, q).iter().sum::<f64>() / 4.0;
    Ok(FunctionalValue { value: avg * delta11(u, q) - oracle.value, oracle })
}

/// Tagged Riemann sum `sum (x_{i+1}-x_i)(y_{j+1}-y_j) f(tag)`.
pub fn composite_riemann(f: &Surface, p: &GridPartition) -> f64 {
    let mut total = 0.0;
    for j in 0..p.ny() {
        for i in 0..p.nx() {
            let (t, s) = p.tag(i, j);
            total += p.cell(i, j).area() * f.eval(t, s);
        }
    }
    total
}

/// `sum_cells [delta11 g(cell) / area(cell)] * int int_cell f`.
pub fn composite_rs(f: &Surface, g: &Surface, p: &GridPartition, tol: f64) -> Result<f64> {
    let mut total = 0.0;
    for j in 0..p.ny() {
        for i in 0..p.nx() {
            let cell = p.cell(i, j);
            total += delta11(g, &cell) / cell.area() * quad::integral2(f, &cell, tol)?;
        }
    }
    Ok(total)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MercerBracket {
    pub lower: f64,
    pub upper: f64,
    pub node: (f64, f64),
}

fn bisect<F: Fn(f64) -> f64>(h: F, lo: f64, hi: f64, tol: f64) -> Option<f64> {
    let (mut lo, mut hi) = (lo, hi);
    let (mut flo, fhi) = (h(lo), h(hi));
    if flo == 0.0 {
        return Some(lo);
    }
    if fhi == 0.0 {
        return Some(hi);
    }
    if flo * fhi > 0.0 {
        return None;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let fm = h(mid);
        if fm.abs() <= tol || hi - lo <= f64::EPSILON * hi.abs().max(1.0) {
            return Some(mid);
        }
        if (fm > 0.0) == (flo > 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

/// Mercer-type bracket: `lower = delta11 g * f(t, s)` at the roots of the two edge
/// equations, `upper` the RS-trapezoid combination.
///
/// Hypotheses (sampled on a 32 x 32 grid): `g` nondecreasing in each variable and
/// `f` with nonnegative mixed increments.
pub fn mercer_bracket(f: &Surface, g: &Surface, q: &Rect, tol: f64) -> Result<MercerBracket> {
    let dg = delta11(g, q);
    if dg.abs() <= degenerate_threshold(g, q) {
        return Err(Error::DegenerateIntegrator(dg));
    }
    let n = 32;
    for k in 0..=n {
        let frac = k as f64 / n as f64;
        for l in 0..n {
            let (a0, a1) = (l as f64 / n as f64, (l + 1) as f64 / n as f64);
            let (x0, y) = q.lerp(a0, frac);
            let (x1, _) = q.lerp(a1, frac);
            let (x, y0) = q.lerp(frac, a0);
            let (_, y1) = q.lerp(frac, a1);
            let sc = 1e-9 * g.eval(x1, y).abs().max(1.0);
            if g.eval(x1, y) < g.eval(x0, y) - sc || g.eval(x, y1) < g.eval(x, y0) - sc {
                return Err(Error::Hypothesis(format!("{} is not increasing", g.name())));
            }
        }
    }
    if bimonotone_check_scaled(f, q, n)? != BimonotoneClass::Increasing {
        return Err(Error::Hypothesis(format!("mixed partial of {} is negative somewhere", f.name())));
    }
    let [gac, gad, gbc, gbd] = corners(g, q);
    let ix = quad::line_x(g, q.a, q.b, q.d, QUADRATURE_TOL)? - quad::line_x(g, q.a, q.b, q.c, QUADRATURE_TOL)?;
    let iy = quad::line_y(g, q.b, q.c, q.d, QUADRATURE_TOL)? - quad::line_y(g, q.a, q.c, q.d, QUADRATURE_TOL)?;
    let ht = |t: f64| (q.b - t) * (gbd - gbc) + (t - q.a) * (gad - gac) - ix;
    let hs = |s: f64| (q.d - s) * (gbd - gad) + (s - q.c) * (gbc - gac) - iy;
    let t = bisect(ht, q.a, q.b, tol).ok_or(Error::NodeOutOfDomain(f64::NAN, f64::NAN))?;
    let s = bisect(hs, q.c, q.d, tol).ok_or(Error::NodeOutOfDomain(t, f64::NAN))?;
    let upper = rs_trapezoid_rule(f, g, q, QUADRATURE_TOL)?;
    Ok(MercerBracket { lower: dg * f.eval(t, s), upper, node: (t, s) })
}

/// Sign class of the mixed increments with a `1e-9` relative floor.
fn bimonotone_check_scaled(f: &Surface, q: &Rect, n: usize) -> Result<BimonotoneClass> {
    let c = bimonotone_check(f, q, n)?;
    if c.class != BimonotoneClass::Neither {
        return Ok(c.class);
    }
    // tolerate rounding-level negatives, as the hypothesis check allows -1e-9 * scale
    let xs: Vec<f64> = (0..=n).map(|k| q.a + q.width() * k as f64 / n as f64).collect();
    let ys: Vec<f64> = (0..=n).map(|k| q.c + q.height() * k as f64 / n as f64).collect();
    let mut scale = 1.0f64;
    let mut worst = 0.0f64;
    for j in 0..n {
        for i in 0..n {
            let cell = Rect::span(xs[i], xs[i + 1], ys[j], ys[j + 1]);
            let d = delta11(f, &cell);
            scale = scale.max(f.eval(xs[i], ys[j]).abs());
            worst = worst.min(d / cell.area());
        }
    }
    Ok(if worst < -1e-9 * scale { BimonotoneClass::Neither } else { BimonotoneClass::Increasing })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::univariate::{SepSum, Univariate};

    fn ts() -> Surface {
        SepSum::product(1.0, Univariate::identity(), Univariate::identity()).to_surface("ts")
    }

    fn t2s2() -> Surface {
        SepSum::product(1.0, Univariate::monomial(2), Univariate::monomial(2)).to_surface("t2s2")
    }

    #[test]
    fn point_rules() {
        let q = Rect::unit();
        assert_eq!(ostrowski_point_rule(&ts(), &q, 0.5, 0.5).unwrap(), 0.25);
        assert_eq!(ostrowski_point_rule(&ts(), &q, 0.0, 0.0).unwrap(), 0.0);
        assert!(ostrowski_point_rule(&ts(), &q, 2.0, 0.0).is_err());
        assert_eq!(companion_rule(&ts(), &q, 0.25, 0.25).unwrap(), 0.25);
        assert_eq!(companion_rule(&ts(), &q, 0.5, 0.5).unwrap(), ostrowski_point_rule(&ts(), &q, 0.5, 0.5).unwrap());
        assert!(companion_rule(&ts(), &q, 0.75, 0.25).is_err());
        assert_eq!(trapezoid_rule(&ts(), &q), 0.25);
    }

    #[test]
    fn simpson_as_printed() {
        let q = Rect::unit();
        assert!((simpson_rule(&ts(), &q) - 0.25).abs() < 1e-15);
        assert!((simpson_rule(&Surface::constant(1.0), &q) - 4.0 / 9.0).abs() < 1e-15);
        assert!(simpson_rule(&Surface::new("t-s", |t, s| t - s), &q).abs() < 1e-15);
    }

    #[test]
    fn rs_trapezoid_weights_for_ts() {
        let w = rs_trapezoid_weights(&ts(), &Rect::unit(), 1e-12).unwrap();
        for v in w {
            assert!((v - 0.25).abs() < 1e-15);
        }
        let q = Rect::new(0.5, 2.0, -1.0, 0.3).unwrap();
        let g = Surface::new("e", |t: f64, s: f64| (t + s).exp());
        let w = rs_trapezoid_weights(&g, &q, 1e-12).unwrap();
        assert!((w.iter().sum::<f64>() - delta11(&g, &q)).abs() < 1e-10);
    }

    #[test]
    fn midpoint_nodes() {
        let q = Rect::unit();
        let m = rs_midpoint_rule(&Surface::new("t+s", |t, s| t + s), &ts(), &q, 1e-12).unwrap();
        assert_eq!(m.node, (0.5, 0.5));
        assert_eq!(m.value, 1.0);
        let m = rs_midpoint_node(&t2s2(), &q, 1e-12).unwrap();
        assert!((m.0 - 2.0 / 3.0).abs() < 1e-15 && (m.1 - 2.0 / 3.0).abs() < 1e-15);
        let sep = Surface::new("t+s", |t, s| t + s);
        assert!(matches!(rs_midpoint_rule(&ts(), &sep, &q, 1e-12), Err(Error::DegenerateIntegrator(_))));
    }

    #[test]
    fn trapezoid_functional_examples() {
        let q = Rect::unit();
        let t = trapezoid_functional(&Surface::new("t+s", |t, s| t + s), &ts(), &q, 1e-10).unwrap();
        assert!(t.value.abs() < 1e-9);
        let t = trapezoid_functional(&Surface::constant(3.0), &t2s2(), &q, 1e-10).unwrap();
        assert!(t.value.abs() < 1e-12);
    }

    #[test]
    fn composites() {
        let q = Rect::unit();
        let p = GridPartition::uniform(&q, 2, 2).unwrap();
        assert_eq!(composite_riemann(&ts(), &p), 0.25);
        assert_eq!(composite_riemann(&Surface::constant(1.0), &p), 1.0);
        let p = GridPartition::uniform(&q, 64, 64).unwrap();
        let v = composite_rs(&ts(), &t2s2(), &p, 1e-12).unwrap();
        assert!((v - 4.0 / 9.0).abs() < 1e-3);
        let f = Surface::new("e", |t: f64, s: f64| (t * s).exp());
        let v = composite_rs(&f, &ts(), &GridPartition::uniform(&q, 3, 5).unwrap(), 1e-12).unwrap();
        let exact = quad::integral2(&f, &q, 1e-13).unwrap();
        assert!((v - exact).abs() < 1e-10);
    }

    #[test]
    fn mercer_examples() {
        let q = Rect::unit();
        let b = mercer_bracket(&ts(), &ts(), &q, 1e-14).unwrap();
        assert!((b.lower - 0.25).abs() < 1e-9 && (b.upper - 0.25).abs() < 1e-9);
        let sep = Surface::new("t+s", |t, s| t + s);
        assert!(matches!(mercer_bracket(&ts(), &sep, &q, 1e-12), Err(Error::DegenerateIntegrator(_))));
        let neg = Surface::new("-ts", |t, s| -t * s);
        assert!(matches!(mercer_bracket(&neg, &ts(), &q, 1e-12), Err(Error::Hypothesis(_))));
    }

    #[test]
    fn rule_names_round_trip() {
        for r in [RuleId::Trapezoid4, RuleId::RsTrapezoid, RuleId::MidpointRS, RuleId::Simpson9, RuleId::MercerBracket, RuleId::RiemannComposite] {
            assert_eq!(r.name().parse::<RuleId>().unwrap(), r);
        }
        assert!("nope".parse::<RuleId>().is_err());
    }
}
