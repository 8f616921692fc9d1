//! Run every bound kind over seeded random fixtures and report violations.
//!
//! `cargo run --release --example soundness_sweep -- 500 2026`

use std::time::Instant;

use stieltjes2d::bounds::BoundKind;
use stieltjes2d::sweep::soundness_sweep;

fn main() {
    let mut args = std::env::args().skip(1);
    let count: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(100);
    let seed: u64 = args.next().and_then(|s| s.parse().ok()).unwrap_or(2026);

    let start = Instant::now();
    println!("{:<26} {:>8} {:>10} {:>7} {:>12}", "kind", "fixtures", "violations", "errors", "max ratio");
    for kind in BoundKind::ALL {
        let t = Instant::now();
        let r = soundness_sweep(kind, count, seed);
        println!(
            "{:<26} {:>8} {:>10} {:>7} {:>12.4e}   ({:.2}s)",
            kind.name(),
            r.fixtures,
            r.violations,
            r.errors,
            r.max_ratio,
            t.elapsed().as_secs_f64()
        );
    }
    println!("total {:.1}s", start.elapsed().as_secs_f64());
}
