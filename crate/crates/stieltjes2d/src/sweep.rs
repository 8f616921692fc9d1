//! Seeded random fixtures with declared certificates, and the bound soundness sweep.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bounds::{evaluate, BoundInput, BoundKind};
use crate::core::{rect_split, Direction, Rect, Regularity, RegularityCertificate, Surface, Trial};
use crate::error::Result;
use crate::rs_sum::OracleOptions;
use crate::univariate::{SepSum, Univariate};

/// Per-side cap used by sweep oracles; the oracle error estimate covers the truncation.
pub const SWEEP_MAX_SIDE: usize = 128;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_rect<R: Rng>(rng: &mut R) -> Rect {
    let a = rng.gen_range(-1.0..1.0);
    let c = rng.gen_range(-1.0..1.0);
    Rect::new(a, a + rng.gen_range(0.5..2.0), c, c + rng.gen_range(0.5..2.0)).expect("positive sides")
}

fn sign<R: Rng>(rng: &mut R) -> f64 {
    if rng.gen_bool(0.5) {
        1.0
    } else {
        -1.0
    }
}

/// Any factor, steps included.
pub fn any_factor<R: Rng>(rng: &mut R, lo: f64, hi: f64) -> Univariate {
    match rng.gen_range(0..5) {
        0 => Univariate::Poly((0..rng.gen_range(2..4)).map(|_| rng.gen_range(-1.0..1.0)).collect()),
        1 => Univariate::Exp { amp: rng.gen_range(-1.0..1.0), k: rng.gen_range(-1.5..1.5) },
        2 => Univariate::Sin { amp: rng.gen_range(-1.0..1.0), w: rng.gen_range(0.5..4.0), p: rng.gen_range(0.0..6.3) },
        3 => Univariate::Step { t0: rng.gen_range(lo..hi), lo: rng.gen_range(-1.0..1.0), hi: rng.gen_range(-1.0..1.0) },
        _ => Univariate::PowAbs { amp: rng.gen_range(-1.0..1.0), t0: rng.gen_range(lo..hi), beta: rng.gen_range(0.3..1.0) },
    }
}

/// Continuous factor, Holder of every order `<= beta`.
pub fn holder_factor<R: Rng>(rng: &mut R, lo: f64, hi: f64, beta: f64) -> Univariate {
    match rng.gen_range(0..4) {
        0 => Univariate::Poly((0..rng.gen_range(2..4)).map(|_| rng.gen_range(-1.0..1.0)).collect()),
        1 => Univariate::Exp { amp: rng.gen_range(-1.0..1.0), k: rng.gen_range(-1.5..1.5) },
        2 => Univariate::Sin { amp: rng.gen_range(-1.0..1.0), w: rng.gen_range(0.5..4.0), p: rng.gen_range(0.0..6.3) },
        _ => Univariate::PowAbs { amp: rng.gen_range(-1.0..1.0), t0: rng.gen_range(lo..hi), beta: rng.gen_range(beta..=1.0) },
    }
}

/// Nondecreasing on `[lo, hi]`.
pub fn increasing_factor<R: Rng>(rng: &mut R, lo: f64, hi: f64, smooth: bool) -> Univariate {
    match rng.gen_range(0..if smooth { 3 } else { 4 }) {
        0 => Univariate::Poly(vec![rng.gen_range(-1.0..1.0), rng.gen_range(0.1..1.5)]),
        1 => Univariate::Exp { amp: rng.gen_range(0.1..1.0), k: rng.gen_range(0.2..1.5) },
        2 => {
            let k = rng.gen_range(0.1..1.0);
            Univariate::Poly(vec![k * lo * lo, -2.0 * k * lo, k])
        }
        _ => Univariate::Step { t0: rng.gen_range(lo..hi), lo: 0.0, hi: rng.gen_range(0.1..1.0) },
    }
}

/// Nonnegative and nondecreasing on `[lo, hi]`.
fn positive_increasing<R: Rng>(rng: &mut R, lo: f64, hi: f64, smooth: bool) -> Univariate {
    match rng.gen_range(0..if smooth { 3 } else { 4 }) {
        0 => {
            let k = rng.gen_range(0.1..1.5);
            Univariate::Poly(vec![rng.gen_range(0.0..0.5) - k * lo, k])
        }
        1 => Univariate::Exp { amp: rng.gen_range(0.1..1.0), k: rng.gen_range(0.2..1.5) },
        2 => {
            let k = rng.gen_range(0.1..1.0);
            Univariate::Poly(vec![k * lo * lo, -2.0 * k * lo, k])
        }
        _ => Univariate::Step { t0: rng.gen_range(lo..hi), lo: 0.0, hi: rng.gen_range(0.1..1.0) },
    }
}

/// A random surface with its declared certificates.
#[derive(Debug, Clone)]
pub struct Fixture {
    pub name: String,
    pub sep: SepSum,
    pub surface: Surface,
    pub certs: Vec<RegularityCertificate>,
}

impl Fixture {
    fn new(name: &str, sep: SepSum, certs: Vec<Regularity>) -> Self {
        let certs = certs
            .into_iter()
            .map(|r| RegularityCertificate::declared(r).expect("fixture certificates are valid"))
            .collect();
        Fixture { name: name.to_string(), surface: sep.to_surface(name), sep, certs }
    }

    /// Bivariation over each quadrant at `(x, y)` (SW, SE, NW, NE).
    pub fn quadrant_v(&self, q: &Rect, x: f64, y: f64) -> [f64; 4] {
        let parts = rect_split(q, x, y).expect("point inside");
        parts.map(|r| self.sep.vitali_upper(&r))
    }
}

/// Product terms plus a separable part, declared bivariation and range.
pub fn bv_fixture<R: Rng>(rng: &mut R, q: &Rect) -> Fixture {
    let mut sep = SepSum::new(Vec::new());
    for _ in 0..rng.gen_range(1..3) {
        sep.push(rng.gen_range(-2.0..2.0), any_factor(rng, q.a, q.b), any_factor(rng, q.c, q.d));
    }
    sep.push(1.0, any_factor(rng, q.a, q.b), Univariate::constant(1.0));
    sep.push(1.0, Univariate::constant(1.0), any_factor(rng, q.c, q.d));
    let v = sep.vitali_upper(q);
    let (min, max) = sep.range_bounds(q);
    Fixture::new("bv", sep, vec![Regularity::BoundedBivariation { v }, Regularity::Range { min, max }])
}

/// Continuous fixture with declared Holder (and derived Lipschitz when `beta = 1`), range and bivariation.
pub fn holder_fixture<R: Rng>(rng: &mut R, q: &Rect, lipschitz: bool) -> Fixture {
    let (b1, b2) = if lipschitz { (1.0, 1.0) } else { (rng.gen_range(0.3..=1.0), rng.gen_range(0.3..=1.0)) };
    let mut sep = SepSum::new(Vec::new());
    for _ in 0..rng.gen_range(1..3) {
        sep.push(rng.gen_range(-2.0..2.0), holder_factor(rng, q.a, q.b, b1), holder_factor(rng, q.c, q.d, b2));
    }
    sep.push(1.0, holder_factor(rng, q.a, q.b, b1), Univariate::constant(1.0));
    sep.push(1.0, Univariate::constant(1.0), holder_factor(rng, q.c, q.d, b2));
    let (h1, h2) = sep.holder_consts(q, b1, b2).expect("holder factors");
    let (min, max) = sep.range_bounds(q);
    let v = sep.vitali_upper(q);
    let mut regs = vec![
        Regularity::Holder { h1, h2, beta1: b1, beta2: b2 },
        Regularity::Range { min, max },
        Regularity::BoundedBivariation { v },
    ];
    if lipschitz {
        regs.push(Regularity::Lipschitz { l1: h1, l2: h2 });
    }
    Fixture::new(if lipschitz { "lipschitz" } else { "holder" }, sep, regs)
}

/// Bimonotone nondecreasing integrator: a positive product of nondecreasing factors plus a separable part.
pub fn bimonotone_fixture<R: Rng>(rng: &mut R, q: &Rect, smooth: bool) -> Fixture {
    let mut sep = SepSum::new(Vec::new());
    sep.push(
        rng.gen_range(0.2..2.0),
        increasing_factor(rng, q.a, q.b, smooth),
        increasing_factor(rng, q.c, q.d, smooth),
    );
    let sep_part = |rng: &mut R, lo, hi| if smooth { holder_factor(rng, lo, hi, 1.0) } else { any_factor(rng, lo, hi) };
    let p = sep_part(rng, q.a, q.b);
    let r = sep_part(rng, q.c, q.d);
    sep.push(sign(rng), p, Univariate::constant(1.0));
    sep.push(sign(rng), Univariate::constant(1.0), r);
    let v = sep.vitali_upper(q);
    let (min, max) = sep.range_bounds(q);
    Fixture::new(
        "bimonotone",
        sep,
        vec![
            Regularity::Bimonotone { direction: Direction::Increasing },
            Regularity::BoundedBivariation { v },
            Regularity::Range { min, max },
        ],
    )
}

/// Mercer-type pair: `g` nondecreasing in each variable with a positive mixed part, `f` with
/// nonnegative mixed partial plus an arbitrary smooth separable part.
pub fn mercer_pair<R: Rng>(rng: &mut R, q: &Rect) -> (Fixture, Fixture) {
    let mut g = SepSum::new(Vec::new());
    g.push(rng.gen_range(0.2..2.0), positive_increasing(rng, q.a, q.b, true), positive_increasing(rng, q.c, q.d, true));
    g.push(1.0, increasing_factor(rng, q.a, q.b, true), Univariate::constant(1.0));
    g.push(1.0, Univariate::constant(1.0), increasing_factor(rng, q.c, q.d, true));
    let mut f = SepSum::new(Vec::new());
    f.push(rng.gen_range(0.2..2.0), increasing_factor(rng, q.a, q.b, true), increasing_factor(rng, q.c, q.d, true));
    f.push(1.0, holder_factor(rng, q.a, q.b, 1.0), Univariate::constant(1.0));
    f.push(1.0, Univariate::constant(1.0), holder_factor(rng, q.c, q.d, 1.0));
    let inc = Regularity::Bimonotone { direction: Direction::Increasing };
    (Fixture::new("mercer-f", f, vec![inc]), Fixture::new("mercer-g", g, vec![inc, Regularity::Monotone { direction: Direction::Increasing }]))
}

/// The `(f, u)` families a bound kind is checked on.
fn fixture_for<R: Rng>(kind: BoundKind, rng: &mut R, q: &Rect) -> (Fixture, Fixture) {
    use BoundKind::*;
    match kind {
        OstrowskiBV | CompanionBV | TrapezoidBV | SimpsonBV | BdpUpper | BdpLower => {
            (bv_fixture(rng, q), bv_fixture(rng, q))
        }
        OstrowskiHolderU | FunctionalHolderBV | PsiHolder | TrapFuncHolderBV | CornerGrowthBV => {
            (holder_fixture(rng, q, false), bv_fixture(rng, q))
        }
        TrapFuncLipschitzBV => (holder_fixture(rng, q, true), bv_fixture(rng, q)),
        OmegaRange | FunctionalBVBV | PsiCorners | EfBV => (bv_fixture(rng, q), bv_fixture(rng, q)),
        ThetaQuadrant => (bv_fixture(rng, q), holder_fixture(rng, q, false)),
        FunctionalHolderBimono | TrapFuncHolderBimono | CornerGrowthBimono => {
            (holder_fixture(rng, q, false), bimonotone_fixture(rng, q, false))
        }
        RangeE | EfBimono => (bv_fixture(rng, q), bimonotone_fixture(rng, q, false)),
    }
}

/// Outcome of a soundness sweep for one bound kind.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepReport {
    pub kind: BoundKind,
    pub fixtures: usize,
    pub violations: usize,
    /// Fixtures whose evaluation failed (counted separately, not as violations).
    pub errors: usize,
    /// Largest `lhs / rhs` seen over the absolute checks.
    pub max_ratio: f64,
    /// The check with the largest excess, with the fixture index.
    pub worst: Option<(usize, Trial)>,
}

impl SweepReport {
    pub fn clean(&self) -> bool {
        self.violations == 0 && self.errors == 0
    }
}

/// Build the `i`-th fixture input of a sweep, deterministic in `(kind, seed, i)`.
pub fn sweep_input(kind: BoundKind, seed: u64, i: usize) -> BoundInput {
    let mix = seed ^ ((kind as u64 + 1) << 40) ^ (i as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    let mut r = rng(mix);
    let q = random_rect(&mut r);
    let (f, u) = fixture_for(kind, &mut r, &q);
    let (x, y) = if kind == BoundKind::CompanionBV {
        let (mx, my) = q.center();
        (r.gen_range(q.a..=mx), r.gen_range(q.c..=my))
    } else {
        (r.gen_range(q.a..=q.b), r.gen_range(q.c..=q.d))
    };
    let mut input = BoundInput::new(f.surface.clone(), u.surface.clone(), q)
        .at(x, y)
        .oracle(OracleOptions::new(1e-7).with_max_side(SWEEP_MAX_SIDE));
    input.f_certs = f.certs.clone();
    input.u_certs = u.certs.clone();
    if kind == BoundKind::ThetaQuadrant {
        input = input.quadrants(f.quadrant_v(&q, x, y));
    }
    input
}

/// Run `count` fixtures of the matching family through [`evaluate`].
pub fn soundness_sweep(kind: BoundKind, count: usize, seed: u64) -> SweepReport {
    let mut rep = SweepReport { kind, fixtures: count, violations: 0, errors: 0, max_ratio: 0.0, worst: None };
    for i in 0..count {
        let input = sweep_input(kind, seed, i);
        match evaluate(kind, &input) {
            Ok(out) => {
                if !out.satisfied() {
                    rep.violations += 1;
                }
                if !kind.is_one_sided() {
                    rep.max_ratio = rep.max_ratio.max(out.ratio());
                }
                let t = out.worst();
                if rep.worst.map_or(true, |(_, w)| t.excess() > w.excess()) {
                    rep.worst = Some((i, t));
                }
            }
            Err(_) => rep.errors += 1,
        }
    }
    rep
}

/// All kinds, in catalog order.
pub fn sweep_all(count: usize, seed: u64) -> Result<Vec<SweepReport>> {
    Ok(BoundKind::ALL.iter().map(|&k| soundness_sweep(k, count, seed)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::variation::{bimonotone_check, vitali_bivariation, BimonotoneClass};

    #[test]
    fn declared_bivariation_is_an_upper_bound() {
        let mut r = rng(7);
        for _ in 0..10 {
            let q = random_rect(&mut r);
            let f = bv_fixture(&mut r, &q);
            let declared = f.sep.vitali_upper(&q);
            let est = vitali_bivariation(&f.surface, &q, 1e-3).unwrap().value;
            assert!(est <= declared * (1.0 + 1e-9) + 1e-9, "{est} > {declared}");
        }
    }

    #[test]
    fn bimonotone_fixtures_are_bimonotone() {
        let mut r = rng(11);
        for _ in 0..10 {
            let q = random_rect(&mut r);
            let u = bimonotone_fixture(&mut r, &q, false);
            let chk = bimonotone_check(&u.surface, &q, 24).unwrap();
            assert!(matches!(chk.class, BimonotoneClass::Increasing), "{:?}", u.sep);
        }
    }

    #[test]
    fn holder_constants_hold_on_samples() {
        let mut r = rng(3);
        for _ in 0..10 {
            let q = random_rect(&mut r);
            let f = holder_fixture(&mut r, &q, false);
            let Regularity::Holder { h1, h2, beta1, beta2 } = f.certs[0].regularity else { panic!() };
            for _ in 0..200 {
                let (x1, y1) = q.lerp(r.gen(), r.gen());
                let (x2, y2) = q.lerp(r.gen(), r.gen());
                let lhs = (f.surface.eval(x1, y1) - f.surface.eval(x2, y2)).abs();
                let rhs = h1 * (x1 - x2).abs().powf(beta1) + h2 * (y1 - y2).abs().powf(beta2);
                assert!(lhs <= rhs + 1e-12);
            }
        }
    }

    #[test]
    fn sweep_is_deterministic() {
        let a = soundness_sweep(BoundKind::OmegaRange, 5, 42);
        let b = soundness_sweep(BoundKind::OmegaRange, 5, 42);
        assert_eq!(a, b);
        assert!(a.clean(), "{a:?}");
    }
}
