//! Compiled fixtures addressed as `reg:NAME`. Every entry is a separable sum, so the
//! surfaces carry partials, primitives and jump lines.

use crate::core::Surface;
use crate::error::{Error, Result};
use crate::univariate::{SepSum, Univariate};

pub const PREFIX: &str = "reg:";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Smooth,
    Step,
    Bimonotone,
    Holder,
}

#[derive(Debug, Clone)]
pub struct Entry {
    pub name: &'static str,
    pub family: Family,
    pub about: &'static str,
    pub sep: SepSum,
}

impl Entry {
    pub fn surface(&self) -> Surface {
        self.sep.to_surface(format!("{PREFIX}{}", self.name))
    }
}

fn t() -> Univariate {
    Univariate::identity()
}

fn one() -> Univariate {
    Univariate::constant(1.0)
}

fn heaviside(t0: f64) -> Univariate {
    Univariate::Step { t0, lo: 0.0, hi: 1.0 }
}

fn sign(t0: f64) -> Univariate {
    Univariate::Step { t0, lo: -1.0, hi: 1.0 }
}

fn root(t0: f64) -> Univariate {
    Univariate::PowAbs { amp: 1.0, t0, beta: 0.5 }
}

fn entry(name: &'static str, family: Family, about: &'static str, terms: Vec<(f64, Univariate, Univariate)>) -> Entry {
    Entry { name, family, about, sep: SepSum::new(terms) }
}

/// All fixtures, in a fixed order.
pub fn entries() -> Vec<Entry> {
    use Family::*;
    let sq = || Univariate::monomial(2);
    let exp = || Univariate::Exp { amp: 1.0, k: 1.0 };
    let sin = || Univariate::Sin { amp: 1.0, w: 1.0, p: 0.0 };
    vec![
        entry("one", Smooth, "1", vec![(1.0, one(), one())]),
        entry("t", Smooth, "t", vec![(1.0, t(), one())]),
        entry("s", Smooth, "s", vec![(1.0, one(), t())]),
        entry("prod_ts", Smooth, "t*s", vec![(1.0, t(), t())]),
        entry("sum_ts", Smooth, "t+s", vec![(1.0, t(), one()), (1.0, one(), t())]),
        entry("t2s", Smooth, "t^2*s", vec![(1.0, sq(), t())]),
        entry("t2s2", Smooth, "t^2*s^2", vec![(1.0, sq(), sq())]),
        entry("sq_sum", Smooth, "t^2+s^2", vec![(1.0, sq(), one()), (1.0, one(), sq())]),
        entry("exp_ts", Bimonotone, "exp(t+s)", vec![(1.0, exp(), exp())]),
        entry("sin_prod", Smooth, "sin(t)*sin(s)", vec![(1.0, sin(), sin())]),
        entry(
            "bimono_poly",
            Bimonotone,
            "t^3*s + t*s^3 + t*s",
            vec![(1.0, Univariate::monomial(3), t()), (1.0, t(), Univariate::monomial(3)), (1.0, t(), t())],
        ),
        entry("step_half", Step, "H(t-1/2)*H(s-1/2)", vec![(1.0, heaviside(0.5), heaviside(0.5))]),
        entry("sgn_prod", Step, "sgn(t-1/2)*sgn(s-1/2)", vec![(1.0, sign(0.5), sign(0.5))]),
        entry(
            "stair",
            Step,
            "H(t-1/4)*H(s-1/4) + H(t-3/4)*H(s-3/4)",
            vec![(1.0, heaviside(0.25), heaviside(0.25)), (1.0, heaviside(0.75), heaviside(0.75))],
        ),
        entry("sqrt_prod", Holder, "|t|^(1/2)*|s|^(1/2)", vec![(1.0, root(0.0), root(0.0))]),
        entry(
            "root_sum",
            Holder,
            "|t-1/2|^(1/2) + |s-1/2|^(1/2)",
            vec![(1.0, root(0.5), one()), (1.0, one(), root(0.5))],
        ),
    ]
}

pub fn names() -> Vec<String> {
    entries().iter().map(|e| format!("{PREFIX}{}", e.name)).collect()
}

/// Look up `reg:NAME` (the prefix is optional).
pub fn lookup(name: &str) -> Result<Entry> {
    let bare = name.strip_prefix(PREFIX).unwrap_or(name);
    entries()
        .into_iter()
        .find(|e| e.name == bare)
        .ok_or_else(|| Error::Usage(format!("unknown function '{name}' (known: {})", names().join(", "))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core::{delta11, Rect};

    #[test]
    fn at_least_twelve_fixtures_with_unique_names() {
        let mut n = names();
        assert!(n.len() >= 12);
        n.sort();
        n.dedup();
        assert_eq!(n.len(), entries().len());
    }

    #[test]
    fn lookup_accepts_both_spellings() {
        let f = lookup("reg:prod_ts").unwrap().surface();
        assert_eq!(f.eval(0.5, 0.5), 0.25);
        assert_eq!(lookup("sum_ts").unwrap().surface().eval(0.25, 0.5), 0.75);
        assert!(matches!(lookup("reg:nope"), Err(Error::Usage(_))));
    }

    #[test]
    fn fixtures_carry_metadata() {
        for e in entries() {
            let f = e.surface();
            assert!(f.has_primitive(), "{}", e.name);
            if e.family == Family::Step {
                assert!(f.has_jumps(), "{}", e.name);
            }
        }
    }

    #[test]
    fn step_fixture_is_a_unit_point_mass() {
        let u = lookup("step_half").unwrap().surface();
        assert_eq!(delta11(&u, &Rect::unit()), 1.0);
    }
}
