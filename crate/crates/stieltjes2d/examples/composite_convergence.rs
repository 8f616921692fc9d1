//! Composite Riemann and RS rules on dyadic grids, with the summed per-cell bounds.

use stieltjes2d::bounds::{composite_riemann_bound, composite_rs_bound, riemann_reference};
use stieltjes2d::cubature::{composite_riemann, composite_rs, QUADRATURE_TOL};
use stieltjes2d::rs_sum::OracleOptions;
use stieltjes2d::univariate::{SepSum, Univariate};
use stieltjes2d::{GridPartition, Rect};

fn main() -> stieltjes2d::Result<()> {
    let q = Rect::unit();
    let f = SepSum::product(1.0, Univariate::Exp { amp: 1.0, k: 1.0 }, Univariate::Sin { amp: 1.0, w: 2.0, p: 0.0 });
    let fs = f.to_surface("f");
    let (exact, _) = riemann_reference(&fs, &q, &OracleOptions::new(1e-12))?;

    println!("riemann (midpoint tags)");
    for k in 1..=6 {
        let p = GridPartition::dyadic(&q, k)?;
        let err = (composite_riemann(&fs, &p) - exact).abs();
        let bound = composite_riemann_bound(&p, |c| f.vitali_upper(c))?;
        println!("  level {k}  err {err:.3e}  bound {bound:.3e}");
    }

    // Holder f = |t - 1/2|^(1/2) + s, integrator g = t^3 s.
    let h = SepSum::new(vec![
        (1.0, Univariate::PowAbs { amp: 1.0, t0: 0.5, beta: 0.5 }, Univariate::constant(1.0)),
        (1.0, Univariate::constant(1.0), Univariate::identity()),
    ]);
    let g = SepSum::product(1.0, Univariate::monomial(3), Univariate::identity());
    let (hs, gs) = (h.to_surface("h"), g.to_surface("g"));
    // g is smooth, so the RS integral is the plain integral of h g_ts.
    // g_ts = 3t^2, so the integral is 1/2 + int 3t^2 |t - 1/2|^(1/2) dt = 1/2 + 5 sqrt(2) / 14.
    let reference = 0.5 + 5.0 * 2f64.sqrt() / 14.0;
    println!("rs composite");
    for k in 1..=6 {
        let p = GridPartition::dyadic(&q, k)?;
        let err = (composite_rs(&hs, &gs, &p, QUADRATURE_TOL)? - reference).abs();
        let bound = composite_rs_bound(&p, (1.0, 1.0, 0.5, 1.0), |c| g.vitali_upper(c));
        println!("  level {k}  err {err:.3e}  bound {bound:.3e}");
    }
    Ok(())
}
