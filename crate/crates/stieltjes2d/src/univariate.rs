//! One-variable building blocks with exact calculus, and separable sums of their products.
//!
//! These carry the analytic metadata that fixtures and the registry rely on: exact
//! derivatives, antiderivatives, variations, ranges and Holder constants.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::core::{Rect, Surface};

#[derive(Debug, Clone, PartialEq)]
pub enum Univariate {
    /// `sum_k c[k] t^k`
    Poly(Vec<f64>),
    /// `amp * exp(k t)`
    Exp { amp: f64, k: f64 },
    /// `amp * sin(w t + p)`
    Sin { amp: f64, w: f64, p: f64 },
    /// `lo` for `t < t0`, `hi` for `t >= t0` (right-continuous).
    Step { t0: f64, lo: f64, hi: f64 },
    /// `amp * |t - t0|^beta`, `beta in (0, 1]`.
    PowAbs { amp: f64, t0: f64, beta: f64 },
}

impl Univariate {
    pub fn constant(c: f64) -> Self {
        Univariate::Poly(vec![c])
    }

    pub fn identity() -> Self {
        Univariate::Poly(vec![0.0, 1.0])
    }

    pub fn monomial(k: usize) -> Self {
        let mut c = vec![0.0; k + 1];
        c[k] = 1.0;
        Univariate::Poly(c)
    }

    pub fn eval(&self, t: f64) -> f64 {
        match self {
            Univariate::Poly(c) => c.iter().rev().fold(0.0, |acc, &k| acc * t + k),
            Univariate::Exp { amp, k } => amp * (k * t).exp(),
            Univariate::Sin { amp, w, p } => amp * (w * t + p).sin(),
            Univariate::Step { t0, lo, hi } => {
                if t < *t0 {
                    *lo
                } else {
                    *hi
                }
            }
            Univariate::PowAbs { amp, t0, beta } => amp * (t - t0).abs().powf(*beta),
        }
    }

    /// Exact derivative; `None` where the function is not differentiable.
    pub fn deriv(&self) -> Option<Univariate> {
        match self {
            Univariate::Poly(c) => {
                if c.len() <= 1 {
                    return Some(Univariate::Poly(vec![0.0]));
                }
                Some(Univariate::Poly(
                    c.iter().enumerate().skip(1).map(|(k, v)| k as f64 * v).collect(),
                ))
            }
            Univariate::Exp { amp, k } => Some(Univariate::Exp { amp: amp * k, k: *k }),
            Univariate::Sin { amp, w, p } => Some(Univariate::Sin { amp: amp * w, w: *w, p: p + FRAC_PI_2 }),
            Univariate::Step { lo, hi, .. } if lo == hi => Some(Univariate::constant(0.0)),
            Univariate::PowAbs { amp, .. } if *amp == 0.0 => Some(Univariate::constant(0.0)),
            _ => None,
        }
    }

    pub fn nth_deriv(&self, n: u32) -> Option<Univariate> {
        let mut f = self.clone();
        for _ in 0..n {
            f = f.deriv()?;
        }
        Some(f)
    }

    /// An antiderivative (continuous, closed form).
    pub fn antideriv(&self, t: f64) -> f64 {
        match self {
            Univariate::Poly(c) => c
                .iter()
                .enumerate()
                .rev()
                .fold(0.0, |acc, (k, &v)| acc * t + v / (k as f64 + 1.0))
                * t,
            Univariate::Exp { amp, k } => {
                if *k == 0.0 {
                    amp * t
                } else {
                    amp / k * (k * t).exp()
                }
            }
            Univariate::Sin { amp, w, p } => {
                if *w == 0.0 {
                    amp * p.sin() * t
                } else {
                    -amp / w * (w * t + p).cos()
                }
            }
            Univariate::Step { t0, lo, hi } => lo * t.min(*t0) + hi * (t - t0).max(0.0),
            Univariate::PowAbs { amp, t0, beta } => {
                let z = t - t0;
                amp * z.signum() * z.abs().powf(beta + 1.0) / (beta + 1.0)
            }
        }
    }

    pub fn integral(&self, a: f64, b: f64) -> f64 {
        self.antideriv(b) - self.antideriv(a)
    }

    pub fn jumps(&self) -> Vec<f64> {
        match self {
            Univariate::Step { t0, lo, hi } if lo != hi => vec![*t0],
            _ => Vec::new(),
        }
    }

    /// Interior points of `(a, b)` where monotonicity may change.
    fn turning_points(&self, a: f64, b: f64) -> Vec<f64> {
        let mut pts = Vec::new();
        match self {
            Univariate::Poly(c) if c.len() > 2 => {
                let dp = self.deriv().unwrap();
                let n = 4096;
                let h = (b - a) / n as f64;
                let mut x0 = a;
                let mut f0 = dp.eval(x0);
                for i in 1..=n {
                    let x1 = if i == n { b } else { a + i as f64 * h };
                    let f1 = dp.eval(x1);
                    if f0 == 0.0 && x0 > a {
                        pts.push(x0);
                    } else if f0 * f1 < 0.0 {
                        let (mut lo, mut hi) = (x0, x1);
                        for _ in 0..80 {
                            let mid = 0.5 * (lo + hi);
                            if dp.eval(lo) * dp.eval(mid) <= 0.0 {
                                hi = mid;
                            } else {
                                lo = mid;
                            }
                        }
                        pts.push(0.5 * (lo + hi));
                    }
                    x0 = x1;
                    f0 = f1;
                }
            }
            Univariate::Sin { w, p, .. } if *w != 0.0 => {
                // w t + p = pi/2 + k pi
                let (ta, tb) = if *w > 0.0 { (a, b) } else { (b, a) };
                let k0 = ((w * ta + p - FRAC_PI_2) / PI).ceil() as i64;
                let k1 = ((w * tb + p - FRAC_PI_2) / PI).floor() as i64;
                for k in k0..=k1 {
                    let t = (FRAC_PI_2 + k as f64 * PI - p) / w;
                    if t > a && t < b {
                        pts.push(t);
                    }
                }
            }
            Univariate::PowAbs { t0, .. } if *t0 > a && *t0 < b => pts.push(*t0),
            _ => {}
        }
        pts.sort_by(f64::total_cmp);
        pts
    }

    /// Exact total variation on `[a, b]`.
    pub fn variation(&self, a: f64, b: f64) -> f64 {
        if let Univariate::Step { t0, lo, hi } = self {
            return if a < *t0 && *t0 <= b { (hi - lo).abs() } else { 0.0 };
        }
        let mut pts = vec![a];
        pts.extend(self.turning_points(a, b));
        pts.push(b);
        pts.windows(2).map(|w| (self.eval(w[1]) - self.eval(w[0])).abs()).sum()
    }

    /// Exact `(min, max)` on `[a, b]`.
    pub fn range(&self, a: f64, b: f64) -> (f64, f64) {
        if let Univariate::Step { t0, lo, hi } = self {
            let mut vals = Vec::new();
            if a < *t0 {
                vals.push(*lo);
            }
            if b >= *t0 {
                vals.push(*hi);
            }
            return vals.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(m, mm), &v| (m.min(v), mm.max(v)));
        }
        let mut pts = vec![a, b];
        pts.extend(self.turning_points(a, b));
        pts.iter()
            .map(|&t| self.eval(t))
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(m, mm), v| (m.min(v), mm.max(v)))
    }

    pub fn sup_abs(&self, a: f64, b: f64) -> f64 {
        let (m, mm) = self.range(a, b);
        m.abs().max(mm.abs())
    }

    /// A constant `H` with `|f(t1) - f(t2)| <= H |t1 - t2|^beta` on `[a, b]`.
    pub fn holder_const(&self, a: f64, b: f64, beta: f64) -> Option<f64> {
        let span = b - a;
        match self {
            Univariate::Poly(_) | Univariate::Exp { .. } => {
                let l = self.deriv()?.sup_abs(a, b);
                Some(l * span.powf(1.0 - beta))
            }
            Univariate::Sin { amp, w, .. } => {
                let lip = amp.abs() * w.abs() * span.powf(1.0 - beta);
                let glob = amp.abs() * 2f64.powf(1.0 - beta) * w.abs().powf(beta);
                Some(lip.min(glob))
            }
            Univariate::PowAbs { amp, beta: g, .. } => {
                if beta <= *g && *g <= 1.0 {
                    Some(amp.abs() * span.powf(g - beta))
                } else {
                    None
                }
            }
            Univariate::Step { lo, hi, .. } => (lo == hi).then_some(0.0),
        }
    }

    /// Monotone on `[a, b]` (non-strict), with direction +1 / -1, or 0 if constant.
    pub fn monotone_sign(&self, a: f64, b: f64) -> Option<i8> {
        let v = self.variation(a, b);
        let d = self.eval(b) - self.eval(a);
        if v == 0.0 {
            Some(0)
        } else if (v - d.abs()).abs() <= 1e-12 * v.max(1.0) {
            Some(if d > 0.0 { 1 } else { -1 })
        } else {
            None
        }
    }
}

/// `sum_k c_k phi_k(t) psi_k(s)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SepSum {
    pub terms: Vec<(f64, Univariate, Univariate)>,
}

impl SepSum {
    pub fn new(terms: Vec<(f64, Univariate, Univariate)>) -> Self {
        SepSum { terms }
    }

    pub fn product(c: f64, phi: Univariate, psi: Univariate) -> Self {
        SepSum { terms: vec![(c, phi, psi)] }
    }

    pub fn push(&mut self, c: f64, phi: Univariate, psi: Univariate) {
        self.terms.push((c, phi, psi));
    }

    pub fn eval(&self, t: f64, s: f64) -> f64 {
        self.terms.iter().map(|(c, p, q)| c * p.eval(t) * q.eval(s)).sum()
    }

    /// `d^{i+j} / dt^i ds^j`, when every factor is smooth enough.
    pub fn partial(&self, i: u32, j: u32) -> Option<SepSum> {
        let mut out = Vec::with_capacity(self.terms.len());
        for (c, p, q) in &self.terms {
            out.push((*c, p.nth_deriv(i)?, q.nth_deriv(j)?));
        }
        Some(SepSum { terms: out })
    }

    pub fn to_surface(&self, name: impl Into<String>) -> Surface {
        let name = name.into();
        let me = self.clone();
        let e = me.clone();
        let part = me.clone();
        let pn = name.clone();
        let pr = me.clone();
        let px = me.clone();
        let py = me.clone();
        let mut jx: Vec<f64> = me.terms.iter().flat_map(|(_, p, _)| p.jumps()).collect();
        let mut jy: Vec<f64> = me.terms.iter().flat_map(|(_, _, q)| q.jumps()).collect();
        jx.sort_by(f64::total_cmp);
        jx.dedup();
        jy.sort_by(f64::total_cmp);
        jy.dedup();
        Surface::new(name, move |t, s| e.eval(t, s))
            .with_partials(move |i, j| part.partial(i, j).map(|d| d.to_surface(format!("d{i}{j}({pn})"))))
            .with_primitive(move |t, s| {
                pr.terms.iter().map(|(c, p, q)| c * p.antideriv(t) * q.antideriv(s)).sum()
            })
            .with_line_primitives(
                move |t, s| px.terms.iter().map(|(c, p, q)| c * p.antideriv(t) * q.eval(s)).sum(),
                move |t, s| py.terms.iter().map(|(c, p, q)| c * p.eval(t) * q.antideriv(s)).sum(),
            )
            .with_jumps(jx, jy)
    }

    /// `sum |c_k| V(phi_k) V(psi_k)`: the Vitali bivariation for one term, an upper bound otherwise.
    pub fn vitali_upper(&self, q: &Rect) -> f64 {
        self.terms
            .iter()
            .map(|(c, p, r)| c.abs() * p.variation(q.a, q.b) * r.variation(q.c, q.d))
            .sum()
    }

    /// Interval-arithmetic enclosure of the range.
    pub fn range_bounds(&self, q: &Rect) -> (f64, f64) {
        let mut lo = 0.0;
        let mut hi = 0.0;
        for (c, p, r) in &self.terms {
            let (p0, p1) = p.range(q.a, q.b);
            let (r0, r1) = r.range(q.c, q.d);
            let prods = [c * p0 * r0, c * p0 * r1, c * p1 * r0, c * p1 * r1];
            lo += prods.iter().copied().fold(f64::INFINITY, f64::min);
            hi += prods.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        }
        (lo, hi)
    }

    /// Holder constants on the coordinates (`H1`, `H2`) for the given exponents.
    pub fn holder_consts(&self, q: &Rect, beta1: f64, beta2: f64) -> Option<(f64, f64)> {
        let mut h1 = 0.0;
        let mut h2 = 0.0;
        for (c, p, r) in &self.terms {
            h1 += c.abs() * p.holder_const(q.a, q.b, beta1)? * r.sup_abs(q.c, q.d);
            h2 += c.abs() * r.holder_const(q.c, q.d, beta2)? * p.sup_abs(q.a, q.b);
        }
        Some((h1, h2))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn poly_calculus() {
        let p = Univariate::Poly(vec![1.0, -2.0, 0.0, 1.0]);
        assert_eq!(p.eval(2.0), 5.0);
        assert_eq!(p.deriv().unwrap().eval(2.0), 10.0);
        assert!((p.integral(0.0, 2.0) - (2.0 - 4.0 + 4.0)).abs() < 1e-14);
        // t^3 - 2t + 1 on [-2, 2]: extrema at +-sqrt(2/3)
        let r = (2.0f64 / 3.0).sqrt();
        let v = (p.eval(-r) - p.eval(-2.0)).abs() + (p.eval(r) - p.eval(-r)).abs() + (p.eval(2.0) - p.eval(r)).abs();
        assert!((p.variation(-2.0, 2.0) - v).abs() < 1e-10);
    }

    #[test]
    fn sin_variation_and_range() {
        let s = Univariate::Sin { amp: 1.0, w: 1.0, p: 0.0 };
        assert!((s.variation(0.0, PI) - 2.0).abs() < 1e-12);
        assert!((s.variation(0.0, 2.0 * PI) - 4.0).abs() < 1e-12);
        let (m, mm) = s.range(0.0, 2.0 * PI);
        assert!((m + 1.0).abs() < 1e-12 && (mm - 1.0).abs() < 1e-12);
        let neg = Univariate::Sin { amp: 2.0, w: -3.0, p: 0.4 };
        let fine: f64 = (0..20000)
            .map(|i| (neg.eval((i + 1) as f64 * 1e-4) - neg.eval(i as f64 * 1e-4)).abs())
            .sum();
        assert!((neg.variation(0.0, 2.0) - fine).abs() < 1e-6);
    }

    #[test]
    fn step_and_powabs() {
        let st = Univariate::Step { t0: 0.5, lo: -1.0, hi: 1.0 };
        assert_eq!(st.variation(0.0, 1.0), 2.0);
        assert_eq!(st.variation(0.5, 1.0), 0.0);
        assert_eq!(st.range(0.0, 0.4), (-1.0, -1.0));
        assert!((st.integral(0.0, 1.0)).abs() < 1e-15);
        let pa = Univariate::PowAbs { amp: 1.0, t0: 0.5, beta: 0.5 };
        assert!((pa.variation(0.0, 1.0) - 2.0 * 0.5f64.sqrt()).abs() < 1e-14);
        let num = (0..100000).map(|i| pa.eval((i as f64 + 0.5) / 100000.0)).sum::<f64>() / 100000.0;
        assert!((pa.integral(0.0, 1.0) - num).abs() < 1e-6);
    }

    #[test]
    fn sepsum_surface_metadata() {
        let f = SepSum::product(1.0, Univariate::monomial(2), Univariate::monomial(2)).to_surface("t2s2");
        let q = Rect::unit();
        assert!((f.exact_cell_integral(&q).unwrap() - 1.0 / 9.0).abs() < 1e-15);
        assert_eq!(f.partial(1, 1).unwrap().eval(0.5, 0.5), 1.0);
        assert!((f.exact_x_integral(0.0, 1.0, 2.0).unwrap() - 4.0 / 3.0).abs() < 1e-15);
        let s = SepSum::product(1.0, Univariate::Sin { amp: 1.0, w: 1.0, p: 0.0 }, Univariate::Sin { amp: 1.0, w: 1.0, p: 0.0 });
        assert!((s.vitali_upper(&Rect::new(0.0, PI, 0.0, PI).unwrap()) - 4.0).abs() < 1e-12);
    }

    #[test]
    fn holder_constants_hold_on_samples() {
        let q = Rect::new(-1.0, 2.0, 0.0, 1.5).unwrap();
        let f = SepSum::new(vec![
            (0.7, Univariate::PowAbs { amp: 1.0, t0: 0.3, beta: 0.5 }, Univariate::constant(1.0)),
            (1.3, Univariate::Sin { amp: 1.0, w: 2.0, p: 0.1 }, Univariate::Sin { amp: 1.0, w: -1.5, p: 0.0 }),
        ]);
        let (h1, h2) = f.holder_consts(&q, 0.5, 0.7).unwrap();
        for i in 0..400 {
            let u = |k: f64| (i as f64 * k).sin() * 0.5 + 0.5;
            let (t1, s1) = q.lerp(u(1.1), u(2.3));
            let (t2, s2) = q.lerp(u(3.7), u(0.9));
            let lhs = (f.eval(t1, s1) - f.eval(t2, s2)).abs();
            let rhs = h1 * (t1 - t2).abs().powf(0.5) + h2 * (s1 - s2).abs().powf(0.7);
            assert!(lhs <= rhs + 1e-12);
        }
    }
}
