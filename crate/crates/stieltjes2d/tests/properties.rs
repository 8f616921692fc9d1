use proptest::prelude::*;

use stieltjes2d::bounds::{bound_simpson, bound_trapezoid};
use stieltjes2d::cubature::{companion_rule, rs_midpoint_rule, rs_trapezoid_rule, trapezoid_rule, QUADRATURE_TOL};
use stieltjes2d::io::report::{Format, Report};
use stieltjes2d::io::GridFile;
use stieltjes2d::univariate::{SepSum, Univariate};
use stieltjes2d::variation::vitali_bivariation;
use stieltjes2d::{delta11, rect_split, GridPartition, Rect, Surface};

fn rect() -> impl Strategy<Value = Rect> {
    (-3.0..3.0f64, 0.1..3.0f64, -3.0..3.0f64, 0.1..3.0f64).prop_map(|(a, w, c, h)| Rect::span(a, a + w, c, c + h))
}

fn factor() -> impl Strategy<Value = Univariate> {
    prop_oneof![
        prop::collection::vec(-2.0..2.0f64, 1..4).prop_map(Univariate::Poly),
        (-1.0..1.0f64, -1.5..1.5f64).prop_map(|(amp, k)| Univariate::Exp { amp, k }),
        (-1.0..1.0f64, 0.5..3.0f64, 0.0..6.0f64).prop_map(|(amp, w, p)| Univariate::Sin { amp, w, p }),
    ]
}

fn sep() -> impl Strategy<Value = SepSum> {
    prop::collection::vec((-2.0..2.0f64, factor(), factor()), 1..3).prop_map(SepSum::new)
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn grid_text_round_trip(
        xs in prop::collection::btree_set(-1000i32..1000, 2..6),
        ys in prop::collection::btree_set(-1000i32..1000, 2..6),
        seed in prop::collection::vec(-1e6..1e6f64, 36),
    ) {
        let xs: Vec<f64> = xs.into_iter().map(|v| v as f64 / 7.0).collect();
        let ys: Vec<f64> = ys.into_iter().map(|v| v as f64 / 3.0).collect();
        let values = (0..ys.len()).map(|i| (0..xs.len()).map(|j| seed[i * 6 + j]).collect()).collect();
        let g = GridFile::new(xs, ys, values).unwrap();
        prop_assert_eq!(GridFile::parse(&g.to_csv()).unwrap(), g);
    }

    #[test]
    fn mixed_difference_is_additive(s in sep(), q in rect(), tx in 0.05..0.95f64, ty in 0.05..0.95f64) {
        let f = s.to_surface("f");
        let (x, y) = q.lerp(tx, ty);
        let parts = rect_split(&q, x, y).unwrap();
        let sum: f64 = parts.iter().map(|r| delta11(&f, r)).sum();
        prop_assert!(close(sum, delta11(&f, &q), 1e-10), "{sum} vs {}", delta11(&f, &q));
    }

    #[test]
    fn dyadic_cells_tile_the_rectangle(q in rect(), k in 0u32..5) {
        let p = GridPartition::dyadic(&q, k).unwrap();
        let mut area = 0.0;
        for j in 0..p.ny() {
            for i in 0..p.nx() {
                area += p.cell(i, j).area();
            }
        }
        prop_assert!(close(area, q.area(), 1e-12));
    }

    #[test]
    fn companion_is_exact_on_bilinear(
        c in prop::array::uniform4(-3.0..3.0f64), q in rect(), tx in 0.0..=0.5f64, ty in 0.0..=0.5f64,
    ) {
        let [a0, a1, a2, a3] = c;
        let f = Surface::new("bilinear", move |t, s| a0 + a1 * t + a2 * s + a3 * t * s);
        let (mx, my) = q.center();
        let exact = q.area() * (a0 + a1 * mx + a2 * my + a3 * mx * my);
        let (x, y) = q.lerp(tx, ty);
        let (x, y) = (x.min(mx), y.min(my));
        prop_assert!(close(companion_rule(&f, &q, x, y).unwrap(), exact, 1e-12));
        // the four-corner rule only sees the mixed part
        prop_assert!(close(trapezoid_rule(&f, &q), 0.25 * a3 * q.area() * q.area(), 1e-10));
    }

    #[test]
    fn rs_rules_reduce_to_plain_integrals_against_ts(c in prop::array::uniform4(-3.0..3.0f64), q in rect()) {
        let [a0, a1, a2, a3] = c;
        let f = Surface::new("bilinear", move |t, s| a0 + a1 * t + a2 * s + a3 * t * s);
        let affine = Surface::new("affine", move |t, s| a0 + a1 * t + a2 * s);
        let ts = Surface::new("ts", |t, s| t * s);
        let (mx, my) = q.center();
        let exact = q.area() * (a0 + a1 * mx + a2 * my + a3 * mx * my);
        let trap = rs_trapezoid_rule(&f, &ts, &q, QUADRATURE_TOL).unwrap();
        prop_assert!(close(trap, exact, 1e-10), "{trap} vs {exact}");
        let mid = rs_midpoint_rule(&affine, &ts, &q, QUADRATURE_TOL).unwrap();
        prop_assert!(close(mid.value, q.area() * (a0 + a1 * mx + a2 * my), 1e-10));
    }

    #[test]
    fn bounds_scale_with_the_certificate(q in rect(), v in 0.0..10.0f64, k in 1.0..4.0f64) {
        prop_assert!(bound_trapezoid(&q, v) >= 0.0);
        prop_assert!(close(bound_trapezoid(&q, k * v), k * bound_trapezoid(&q, v), 1e-12));
        prop_assert!(bound_simpson(&q, v) <= bound_simpson(&q, k * v));
    }

    #[test]
    fn vitali_of_a_product_of_monotone_factors_is_the_mixed_difference(
        k1 in 0.1..2.0f64, k2 in 0.1..2.0f64, q in rect(),
    ) {
        let s = SepSum::product(1.0, Univariate::Exp { amp: 1.0, k: k1 }, Univariate::Exp { amp: 1.0, k: k2 });
        let f = s.to_surface("f");
        let v = vitali_bivariation(&f, &q, 1e-9).unwrap().value;
        prop_assert!(close(v, delta11(&f, &q).abs(), 1e-9));
        prop_assert!(close(v, s.vitali_upper(&q), 1e-9));
    }

    #[test]
    fn report_digest_ignores_timing(ms in 0.0..1e4f64, x in -1e3..1e3f64) {
        let mk = |elapsed: f64, v: f64| {
            let mut r = Report::new("integrate --rule trapezoid4");
            r.input("f", "reg:t");
            r.num("value", v);
            r.elapsed_ms = elapsed;
            r
        };
        let (a, b) = (mk(0.0, x), mk(ms, x));
        prop_assert_eq!(a.digest(), b.digest());
        let strip = |r: &Report| r.render(Format::Kv).lines().filter(|l| !l.starts_with("elapsed_ms=")).collect::<Vec<_>>().join("\n");
        prop_assert_eq!(strip(&a), strip(&b));
    }
}
