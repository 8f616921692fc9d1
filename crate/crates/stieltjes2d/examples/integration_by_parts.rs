//! The four-corner integration-by-parts formula against the two-variable identity
//! with edge terms, on `f = t`, `u = s` and on a smooth pair.

use stieltjes2d::rs_sum::integration_by_parts;
use stieltjes2d::{Rect, Surface};

fn main() -> stieltjes2d::Result<()> {
    let q = Rect::unit();
    let pairs = [
        (Surface::new("t", |t, _| t), Surface::new("s", |_, s| s)),
        (Surface::new("ts2", |t, s| t * s * s), Surface::new("e", |t: f64, s: f64| (t + 0.5 * s).exp())),
    ];
    for (f, u) in &pairs {
        let r = integration_by_parts(f, u, &q, 1e-9)?;
        println!(
            "{} / {}: corner form {:.6} vs {:.6} (residual {:.2e}); with edge terms residual {:.2e}",
            f.name(),
            u.name(),
            r.lhs,
            r.rhs,
            r.residual,
            r.corrected_residual
        );
    }
    Ok(())
}
