//! Check a handful of bound kinds on fixtures with declared certificates.

use stieltjes2d::bounds::{evaluate, BoundInput, BoundKind};
use stieltjes2d::sweep::sweep_input;

fn main() -> stieltjes2d::Result<()> {
    let kinds = [
        BoundKind::OmegaRange,
        BoundKind::FunctionalHolderBV,
        BoundKind::PsiHolder,
        BoundKind::EfBimono,
        BoundKind::TrapezoidBV,
    ];
    for kind in kinds {
        let input: BoundInput = sweep_input(kind, 7, 0);
        let out = evaluate(kind, &input)?;
        println!(
            "{:<24} residual {:.3e}  bound {:.3e}  ratio {:.3}  {}",
            kind.name(),
            out.residual(),
            out.bound,
            out.ratio(),
            if out.satisfied() { "ok" } else { "VIOLATED" }
        );
    }
    Ok(())
}
