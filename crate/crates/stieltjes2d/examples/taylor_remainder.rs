//! Taylor blend and remainder at a point, the midpoint variant and the remainder bounds.

use stieltjes2d::io::registry;
use stieltjes2d::rs_sum::OracleOptions;
use stieltjes2d::taylor::{taylor_bounds, taylor_midpoint, taylor_remainder_bn, DnField, TaylorCertificates, TaylorFamily};
use stieltjes2d::Rect;

fn main() -> stieltjes2d::Result<()> {
    let q = Rect::unit();
    let f = registry::lookup("reg:exp_ts")?.surface();
    let (x, y) = (0.3, 0.6);
    let opts = OracleOptions::new(1e-9).with_max_side(256);

    for n in 0..=2 {
        let dn = DnField::new(&f, n, &q)?;
        let rem = taylor_remainder_bn(&f, &dn, &q, x, y, &opts)?;
        let mid = taylor_midpoint(&f, &dn, &q, &opts)?;
        println!(
            "n={n}: f={:.8} blend={:.8} remainder={:.3e} (blend+remainder-f = {:.3e}); midpoint F={:.3e}",
            f.eval(x, y),
            rem.blend,
            rem.value,
            rem.representation_residual,
            mid.f_m
        );
        let certs = TaylorCertificates::estimate(&dn, &q, x, y, 2.0, 1e-9)?;
        for fam in TaylorFamily::ALL_DEFAULT {
            match taylor_bounds(fam, &certs, &q, n, x, y) {
                Ok(b) => println!("    {:<14} {b:.3e}", fam.name()),
                Err(e) => println!("    {:<14} n/a ({e})", fam.name()),
            }
        }
    }
    Ok(())
}
