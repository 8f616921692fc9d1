//! The dyadic refinement behind every reference value: level sums for `t s` against
//! `t^2 s^2` (exact 4/9), and a unit step integrator that samples the integrand.

use stieltjes2d::rs_sum::{rs_oracle, rs_oracle_with, OracleOptions};
use stieltjes2d::univariate::{SepSum, Univariate};
use stieltjes2d::{Rect, Surface};

fn main() -> stieltjes2d::Result<()> {
    let q = Rect::unit();
    let f = Surface::new("ts", |t, s| t * s);
    let u = SepSum::product(1.0, Univariate::monomial(2), Univariate::monomial(2)).to_surface("t2s2");

    let r = rs_oracle_with(&f, &u, &q, &OracleOptions::new(1e-12).with_max_side(512))?;
    for (k, v) in r.levels.iter().enumerate() {
        println!("side {:>4}  sum {:.12}  err {:.2e}", 1 << k, v, (v - 4.0 / 9.0).abs());
    }
    println!("converged: {}", r.converged);

    // H(t - 0.3) H(s - 0.7): all mass at one point.
    let step = SepSum::product(
        1.0,
        Univariate::Step { t0: 0.3, lo: 0.0, hi: 1.0 },
        Univariate::Step { t0: 0.7, lo: 0.0, hi: 1.0 },
    )
    .to_surface("step");
    let g = Surface::new("g", |t: f64, s: f64| (t - s).exp());
    let o = rs_oracle(&g, &step, &q, 1e-12)?;
    println!("step integrator: {:.15} vs g(0.3, 0.7) = {:.15}", o.value, g.eval(0.3, 0.7));
    Ok(())
}
