//! Vitali bivariation, Arzela variation and bimonotone class of the registry fixtures.

use stieltjes2d::io::registry;
use stieltjes2d::variation::{arzela_variation, bimonotone_check, vitali_bivariation};
use stieltjes2d::Rect;

fn main() -> stieltjes2d::Result<()> {
    let q = Rect::unit();
    println!("{:<14} {:>10} {:>10} {:>10}  class", "fixture", "vitali", "declared", "arzela");
    for e in registry::entries() {
        let f = e.surface();
        let v = vitali_bivariation(&f, &q, 1e-6)?;
        let a = arzela_variation(&f, &q, 1e-6)?;
        let c = bimonotone_check(&f, &q, 32)?;
        println!(
            "{:<14} {:>10.6} {:>10.6} {:>10.6}  {:?}{}",
            e.name,
            v.value,
            e.sep.vitali_upper(&q),
            a.value,
            c.class,
            if c.flat { " (flat)" } else { "" }
        );
    }
    Ok(())
}
