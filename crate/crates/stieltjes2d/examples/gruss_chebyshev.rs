//! Chebyshev functional, the Korkine identity, the Gruss equality case and the
//! disagreement between the direct value and the kernel form.

use stieltjes2d::gruss::{chebyshev, cheby_kernel_psi, gruss_bound, korkine};
use stieltjes2d::io::registry;
use stieltjes2d::rs_sum::OracleOptions;
use stieltjes2d::Rect;

fn main() -> stieltjes2d::Result<()> {
    let q = Rect::unit();
    let get = |n: &str| registry::lookup(n).map(|e| e.surface());

    let (f, g) = (get("exp_ts")?, get("sin_prod")?);
    let ch = chebyshev(&f, &g, &q, 1e-12)?;
    let k = korkine(&f, &g, &q, 1e-12)?;
    println!("T(exp, sin) = {:.12}, Korkine residual {:.2e}", ch.t_value, k.residual);

    let sgn = get("sgn_prod")?;
    let t = chebyshev(&sgn, &sgn, &q, 1e-12)?.t_value;
    println!("sgn product: T = {t}, Gruss bound = {}", gruss_bound(-1.0, 1.0, -1.0, 1.0));

    let opts = OracleOptions::new(1e-7).with_max_side(64);
    for (a, b) in [("t", "t"), ("prod_ts", "prod_ts")] {
        let r = cheby_kernel_psi(&get(a)?, &get(b)?, &q, &opts)?;
        println!("{a} x {b}: direct {:.6}  kernel {:.6}", r.t_direct, r.t_via_kernel);
    }
    Ok(())
}
