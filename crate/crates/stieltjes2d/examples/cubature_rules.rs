//! Every single-panel rule on one smooth integrand, next to its a-priori bound.

use stieltjes2d::bounds::{bound_companion, bound_ostrowski, bound_simpson, bound_trapezoid, riemann_reference};
use stieltjes2d::cubature::{companion_rule, ostrowski_point_rule, simpson_rule, trapezoid_rule};
use stieltjes2d::rs_sum::OracleOptions;
use stieltjes2d::univariate::{SepSum, Univariate};
use stieltjes2d::Rect;

fn main() -> stieltjes2d::Result<()> {
    let q = Rect::new(0.0, 2.0, -1.0, 1.0)?;
    let sep = SepSum::product(1.0, Univariate::Exp { amp: 1.0, k: 0.5 }, Univariate::Sin { amp: 1.0, w: 1.3, p: 0.2 });
    let f = sep.to_surface("f");
    let v = sep.vitali_upper(&q);
    let (exact, _) = riemann_reference(&f, &q, &OracleOptions::new(1e-12))?;

    let (x, y) = (0.7, 0.1);
    let rows = [
        ("ostrowski", ostrowski_point_rule(&f, &q, x, y)?, bound_ostrowski(&q, x, y, v)?),
        ("trapezoid4", trapezoid_rule(&f, &q), bound_trapezoid(&q, v)),
        ("simpson9", simpson_rule(&f, &q), bound_simpson(&q, v)),
        ("companion4", companion_rule(&f, &q, 0.4, -0.6)?, bound_companion(&q, 0.4, -0.6, v)?),
    ];
    println!("integral {exact:.10}, bivariation {v:.6}");
    for (name, est, bound) in rows {
        println!("{name:<11} {est:>14.10}  |err| {:.3e}  bound {bound:.3e}", (est - exact).abs());
    }
    Ok(())
}
