//! Integrate `f = t + s` against `u = t s` on the unit square with the two RS rules
//! and compare with the brute-force oracle.

use stieltjes2d::cubature::{rs_midpoint_rule, rs_trapezoid_rule, QUADRATURE_TOL};
use stieltjes2d::io::registry;
use stieltjes2d::rs_sum::rs_oracle;
use stieltjes2d::Rect;

fn main() -> stieltjes2d::Result<()> {
    let f = registry::lookup("reg:sum_ts")?.surface();
    let u = registry::lookup("reg:prod_ts")?.surface();
    let q = Rect::unit();

    let mid = rs_midpoint_rule(&f, &u, &q, QUADRATURE_TOL)?;
    let trap = rs_trapezoid_rule(&f, &u, &q, QUADRATURE_TOL)?;
    let oracle = rs_oracle(&f, &u, &q, 1e-10)?;

    println!("midpoint    {:.12}  node {:?}", mid.value, mid.node);
    println!("trapezoid   {:.12}", trap);
    println!("oracle      {:.12}  (+/- {:.1e}, {} cells/side)", oracle.value, oracle.error_estimate, oracle.resolution);
    Ok(())
}
