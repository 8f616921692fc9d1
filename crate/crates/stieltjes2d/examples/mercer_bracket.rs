//! Lower and upper Mercer-type values around the oracle for random admissible pairs.

use stieltjes2d::cubature::{mercer_bracket, QUADRATURE_TOL};
use stieltjes2d::rs_sum::{rs_oracle_with, OracleOptions};
use stieltjes2d::sweep::{mercer_pair, random_rect, rng};

fn main() -> stieltjes2d::Result<()> {
    let mut r = rng(1);
    for _ in 0..5 {
        let q = random_rect(&mut r);
        let (f, g) = mercer_pair(&mut r, &q);
        let b = mercer_bracket(&f.surface, &g.surface, &q, QUADRATURE_TOL)?;
        let o = rs_oracle_with(&f.surface, &g.surface, &q, &OracleOptions::new(1e-9).with_max_side(256))?;
        println!("{:>12.6} <= {:>12.6} <= {:>12.6}   node ({:.4}, {:.4})", b.lower, o.value, b.upper, b.node.0, b.node.1);
    }
    Ok(())
}
