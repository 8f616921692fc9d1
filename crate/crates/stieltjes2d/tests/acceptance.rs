//! Acceptance criteria 1 to 10. Each test prints one `criterion N ... PASS|FAIL` line and
//! then asserts, so a FAIL is both visible in `--nocapture` output and a failing test.

use std::process::Command;
use std::time::Instant;

use rand::Rng;

use stieltjes2d::bounds::{
    composite_riemann_bound, composite_rs_bound, evaluate, riemann_reference, BoundInput, BoundKind,
};
use stieltjes2d::cubature::{composite_riemann, composite_rs, mercer_bracket, rs_midpoint_rule, rs_trapezoid_rule, QUADRATURE_TOL};
use stieltjes2d::gruss::{chebyshev, cheby_kernel_psi, gruss_bound, korkine};
use stieltjes2d::io::grid::{load_grid, write_grid, GridFile};
use stieltjes2d::io::report::parse_kv;
use stieltjes2d::io::registry;
use stieltjes2d::quad;
use stieltjes2d::rs_sum::{integration_by_parts, rs_oracle, rs_oracle_with, OracleOptions};
use stieltjes2d::sweep::{holder_fixture, mercer_pair, random_rect, rng, soundness_sweep};
use stieltjes2d::taylor::{taylor_bounds, taylor_midpoint, taylor_remainder_bn, DnField, TaylorCertificates, TaylorFamily};
use stieltjes2d::univariate::{SepSum, Univariate};
use stieltjes2d::{GridPartition, Rect, Regularity, RegularityCertificate, Surface, CERT_SLACK};

fn verdict(n: u32, what: &str, pass: bool, detail: String) {
    println!("criterion {n} ({what}): {} | {detail}", if pass { "PASS" } else { "FAIL" });
    assert!(pass, "criterion {n} ({what}) failed: {detail}");
}

fn poly<R: Rng>(r: &mut R, deg: usize) -> Univariate {
    Univariate::Poly((0..=deg).map(|_| r.gen_range(-1.0..1.0)).collect())
}

/// Two product terms, degree at most 3 in each variable.
fn random_poly<R: Rng>(r: &mut R) -> SepSum {
    let mut s = SepSum::new(Vec::new());
    for _ in 0..2 {
        let (dx, dy) = (r.gen_range(0..=3), r.gen_range(0..=3));
        s.push(1.0, poly(r, dx), poly(r, dy));
    }
    s
}

fn smooth_factor<R: Rng>(r: &mut R) -> Univariate {
    match r.gen_range(0..3) {
        0 => {
            let d = r.gen_range(1..=3);
            poly(r, d)
        }
        1 => Univariate::Exp { amp: r.gen_range(0.5..1.5), k: r.gen_range(-1.0..1.0) },
        _ => Univariate::Sin { amp: r.gen_range(0.5..1.5), w: r.gen_range(0.5..2.0), p: r.gen_range(0.0..3.0) },
    }
}

fn random_smooth<R: Rng>(r: &mut R) -> SepSum {
    let mut s = SepSum::new(Vec::new());
    s.push(1.0, smooth_factor(r), smooth_factor(r));
    s.push(0.5, smooth_factor(r), smooth_factor(r));
    s
}

fn reg(name: &str) -> Surface {
    registry::lookup(name).unwrap().surface()
}

#[test]
fn criterion_01_integration_by_parts() {
    let start = Instant::now();
    let mut r = rng(101);
    let (mut worst, mut worst_corrected) = (0.0f64, 0.0f64);
    for _ in 0..20 {
        let q = random_rect(&mut r);
        let f = random_poly(&mut r).to_surface("f");
        let u = random_poly(&mut r).to_surface("u");
        let rep = integration_by_parts(&f, &u, &q, 1e-9).unwrap();
        let scale = rep.lhs.abs().max(rep.rhs.abs()).max(1.0);
        worst = worst.max(rep.residual / scale);
        worst_corrected = worst_corrected.max(rep.corrected_residual / scale);
    }
    let secs = start.elapsed().as_secs_f64();
    verdict(
        1,
        "integration by parts",
        worst <= 1e-8 && secs < 10.0,
        format!(
            "worst residual/scale {worst:.3e} (limit 1e-8), two-variable identity with edge terms {worst_corrected:.3e}, {secs:.2}s"
        ),
    );
}

#[test]
fn criterion_02_rs_rule_exactness() {
    let start = Instant::now();
    let q = Rect::unit();
    let integrators = [("ts", reg("prod_ts")), ("t2s2", reg("t2s2")), ("exp_ts", reg("exp_ts"))];
    let trap_f = [reg("one"), reg("t"), reg("s"), reg("prod_ts")];
    let mid_f = [reg("one"), reg("t"), reg("s")];
    let mut worst = 0.0f64;
    let mut oracle_gap = 0.0f64;
    for (_, u) in &integrators {
        let density = u.partial(1, 1).unwrap();
        for (k, f) in trap_f.iter().enumerate() {
            let exact = quad::integral2(&f.times(&density), &q, 1e-14).unwrap();
            let rel = |v: f64| (v - exact).abs() / exact.abs().max(1e-300);
            let t = rs_trapezoid_rule(f, u, &q, QUADRATURE_TOL).unwrap();
            worst = worst.max(rel(t));
            if k < 3 {
                let m = rs_midpoint_rule(&mid_f[k], u, &q, QUADRATURE_TOL).unwrap();
                worst = worst.max(rel(m.value));
            }
            let o = rs_oracle(f, u, &q, 1e-10).unwrap();
            oracle_gap = oracle_gap.max(((o.value - exact).abs() - o.error_estimate).max(0.0));
        }
    }
    let secs = start.elapsed().as_secs_f64();
    verdict(
        2,
        "RS trapezoid and midpoint exactness",
        worst <= 1e-10 && oracle_gap <= 1e-9 && secs < 5.0,
        format!("worst relative error {worst:.3e}, oracle outside its own estimate by {oracle_gap:.3e}, {secs:.2}s"),
    );
}

#[test]
fn criterion_03_oracle_sanity() {
    let q = Rect::unit();
    let o = rs_oracle_with(&reg("prod_ts"), &reg("t2s2"), &q, &OracleOptions::new(1e-9).with_max_side(512)).unwrap();
    let err = (o.value - 4.0 / 9.0).abs();
    let f = reg("exp_ts");
    let mut step_err = 0.0f64;
    for (t0, s0) in [(0.5, 0.5), (0.25, 0.75), (0.8125, 0.1875)] {
        let step = SepSum::product(
            1.0,
            Univariate::Step { t0, lo: 0.0, hi: 1.0 },
            Univariate::Step { t0: s0, lo: 0.0, hi: 1.0 },
        )
        .to_surface("step");
        let r = rs_oracle(&f, &step, &q, 1e-9).unwrap();
        step_err = step_err.max((r.value - f.eval(t0, s0)).abs());
    }
    verdict(
        3,
        "oracle sanity",
        err <= 1e-6 && o.resolution <= 512 && step_err <= 1e-6,
        format!("|oracle - 4/9| = {err:.3e} at {} cells per side, unit step error {step_err:.3e}", o.resolution),
    );
}

#[test]
fn criterion_04_bound_soundness_sweep() {
    let start = Instant::now();
    let mut dirty = Vec::new();
    for kind in BoundKind::ALL {
        let rep = soundness_sweep(kind, 500, 2026);
        println!(
            "  {:<24} violations {:>4}  errors {:>3}  max ratio {:.3e}",
            kind.name(),
            rep.violations,
            rep.errors,
            rep.max_ratio
        );
        if !rep.clean() {
            dirty.push(format!("{}({}+{})", kind.name(), rep.violations, rep.errors));
        }
    }
    let secs = start.elapsed().as_secs_f64();
    verdict(
        4,
        "bound soundness sweep",
        dirty.is_empty() && secs < 120.0,
        format!("500 fixtures per kind, {secs:.1}s; kinds with violations+errors: {}", if dirty.is_empty() { "none".into() } else { dirty.join(" ") }),
    );
}

#[test]
fn criterion_05_sharpness() {
    // Aligned steps H(t - t0) H(s - s0) on a 16 x 16 lattice of jump positions.
    let q = Rect::unit();
    let mut best = (0.0f64, 0.0, 0.0);
    for i in 1..16 {
        for j in 1..16 {
            let (t0, s0) = (i as f64 / 16.0, j as f64 / 16.0);
            let sep = SepSum::product(
                1.0,
                Univariate::Step { t0, lo: 0.0, hi: 1.0 },
                Univariate::Step { t0: s0, lo: 0.0, hi: 1.0 },
            );
            let v = sep.vitali_upper(&q);
            let input = BoundInput::new(sep.to_surface("step"), reg("prod_ts"), q)
                .f_cert(RegularityCertificate::declared(Regularity::BoundedBivariation { v }).unwrap());
            let out = evaluate(BoundKind::TrapezoidBV, &input).unwrap();
            if out.ratio() > best.0 {
                best = (out.ratio(), t0, s0);
            }
        }
    }
    let f = reg("sgn_prod");
    let ch = chebyshev(&f, &f, &q, 1e-12).unwrap();
    let gruss_ratio = ch.t_value / gruss_bound(-1.0, 1.0, -1.0, 1.0);
    verdict(
        5,
        "sharpness probes",
        best.0 >= 0.5 && (gruss_ratio - 1.0).abs() <= 1e-9,
        format!(
            "trapezoid-bv best ratio {:.4} at step ({}, {}); Gruss ratio on sgn product {gruss_ratio:.12}",
            best.0, best.1, best.2
        ),
    );
}

#[test]
fn criterion_06_korkine_and_kernel() {
    let mut r = rng(606);
    let mut worst = 0.0f64;
    for _ in 0..10 {
        let q = random_rect(&mut r);
        let f = random_poly(&mut r).to_surface("f");
        let g = random_poly(&mut r).to_surface("g");
        let k = korkine(&f, &g, &q, 1e-12).unwrap();
        worst = worst.max(k.residual / k.scale);
    }
    let q = Rect::unit();
    let opts = OracleOptions::new(1e-7).with_max_side(128);
    let mut kernel_gap = 0.0f64;
    let mut oracle_err = 0.0f64;
    for (f, g) in [("t", "t"), ("prod_ts", "prod_ts"), ("t2s2", "prod_ts"), ("exp_ts", "sin_prod")] {
        let k = cheby_kernel_psi(&reg(f), &reg(g), &q, &opts).unwrap();
        kernel_gap = kernel_gap.max(k.residual_vs_direct);
        oracle_err = oracle_err.max(k.oracle.error_estimate);
    }
    verdict(
        6,
        "Korkine identity and kernel form",
        worst <= 1e-9 && kernel_gap <= 1e-6,
        format!(
            "Korkine worst residual/scale {worst:.3e}; direct vs kernel worst gap {kernel_gap:.3e} (oracle error {oracle_err:.1e})"
        ),
    );
}

#[test]
fn criterion_07_taylor() {
    let mut r = rng(707);
    let mut fixtures: Vec<SepSum> = ["exp_ts", "sin_prod", "t2s2", "t2s", "bimono_poly", "prod_ts", "sq_sum"]
        .iter()
        .map(|n| registry::lookup(n).unwrap().sep)
        .collect();
    while fixtures.len() < 10 {
        fixtures.push(random_smooth(&mut r));
    }
    let q = Rect::unit();
    let opts = OracleOptions::new(1e-9).with_max_side(256);
    let mut worst_rep = 0.0f64;
    let mut midpoint_violations = 0;
    for sep in &fixtures {
        let f = sep.to_surface("f");
        for n in 0..=2 {
            let dn = DnField::new(&f, n, &q).unwrap();
            for _ in 0..5 {
                let (x, y) = q.lerp(r.gen_range(0.05..0.95), r.gen_range(0.05..0.95));
                let rem = taylor_remainder_bn(&f, &dn, &q, x, y, &opts).unwrap();
                worst_rep = worst_rep.max(rem.representation_residual.abs());
            }
            let (cx, cy) = q.center();
            let mid = taylor_midpoint(&f, &dn, &q, &opts).unwrap();
            let certs = TaylorCertificates::estimate(&dn, &q, cx, cy, 2.0, 1e-9).unwrap();
            let bound = taylor_bounds(TaylorFamily::Midpoint, &certs, &q, n, cx, cy).unwrap();
            if mid.f_m.abs() > bound + mid.error_estimate + CERT_SLACK {
                midpoint_violations += 1;
            }
        }
    }
    verdict(
        7,
        "Taylor representation and midpoint bound",
        worst_rep <= 1e-6 && midpoint_violations == 0,
        format!("worst |A_n + B_n - f| {worst_rep:.3e}; midpoint bound violations {midpoint_violations}/30"),
    );
}

#[test]
fn criterion_08_composite_convergence() {
    let mut r = rng(808);
    let mut riemann_violations = 0;
    let mut rs_violations = 0;
    let mut not_decreasing = 0;
    for _ in 0..8 {
        let q = random_rect(&mut r);
        let f = random_smooth(&mut r);
        let fs = f.to_surface("f");
        let (reference, err) = riemann_reference(&fs, &q, &OracleOptions::new(1e-10)).unwrap();
        let mut errors = Vec::new();
        for k in 1..=6 {
            let p = GridPartition::dyadic(&q, k).unwrap();
            let e = (composite_riemann(&fs, &p) - reference).abs();
            let b = composite_riemann_bound(&p, |c| f.vitali_upper(c)).unwrap();
            if e > b + err + CERT_SLACK {
                riemann_violations += 1;
            }
            errors.push(e);
        }
        if errors[5] > errors[1] {
            not_decreasing += 1;
        }

        let h = holder_fixture(&mut r, &q, false);
        let Regularity::Holder { h1, h2, beta1, beta2 } = h.certs[0].regularity else { unreachable!() };
        let g = random_smooth(&mut r);
        let gs = g.to_surface("g");
        let o = rs_oracle_with(&h.surface, &gs, &q, &OracleOptions::new(1e-9)).unwrap();
        for k in 1..=6 {
            let p = GridPartition::dyadic(&q, k).unwrap();
            let e = (composite_rs(&h.surface, &gs, &p, QUADRATURE_TOL).unwrap() - o.value).abs();
            let b = composite_rs_bound(&p, (h1, h2, beta1, beta2), |c| g.vitali_upper(c));
            if e > b + o.error_estimate + CERT_SLACK {
                rs_violations += 1;
            }
        }
    }
    verdict(
        8,
        "composite convergence",
        riemann_violations == 0 && rs_violations == 0 && not_decreasing == 0,
        format!(
            "level checks over 8 fixtures x 6 levels: riemann violations {riemann_violations}, rs violations {rs_violations}; level 6 worse than level 2 in {not_decreasing}"
        ),
    );
}

#[test]
fn criterion_09_mercer_bracket() {
    let mut r = rng(909);
    let mut violations = 0;
    let mut log = Vec::new();
    let opts = OracleOptions::new(1e-9).with_max_side(256);
    for i in 0..100 {
        let q = random_rect(&mut r);
        let (f, g) = mercer_pair(&mut r, &q);
        match mercer_bracket(&f.surface, &g.surface, &q, QUADRATURE_TOL) {
            Ok(b) => {
                let o = rs_oracle_with(&f.surface, &g.surface, &q, &opts).unwrap();
                let slack = o.error_estimate + CERT_SLACK * o.value.abs().max(1.0);
                if b.lower > o.value + slack || o.value > b.upper + slack {
                    violations += 1;
                    log.push(format!("#{i}: {} <= {} <= {}", b.lower, o.value, b.upper));
                }
            }
            Err(e) => log.push(format!("#{i}: {e}")),
        }
    }
    verdict(
        9,
        "Mercer bracket",
        violations == 0 && log.is_empty(),
        format!("violations {violations}/100; discrepancy log: {}", if log.is_empty() { "empty".into() } else { log.join("; ") }),
    );
}

fn cli(args: &str) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_stieltjes2d"))
        .args(args.split_whitespace())
        .output()
        .expect("binary runs");
    (out.status.code().unwrap_or(-1), String::from_utf8_lossy(&out.stdout).into_owned())
}

fn kv(text: &str, key: &str) -> Option<String> {
    parse_kv(text).into_iter().find(|(k, _)| k == key).map(|(_, v)| v)
}

#[test]
fn criterion_10_cli() {
    let mut notes = Vec::new();

    let (code, out) = cli("integrate --rule midpoint --f reg:sum_ts --u reg:prod_ts --rect 0 1 0 1");
    let ok1 = code == 0
        && kv(&out, "value").as_deref() == Some("1")
        && kv(&out, "node_x").as_deref() == Some("0.5")
        && kv(&out, "node_y").as_deref() == Some("0.5");
    notes.push(format!("integrate {}", if ok1 { "ok" } else { "wrong" }));

    let (code, out) = cli("certify --rule trapezoid4 --bound trapezoid-bv --f reg:prod_ts --rect 0 1 0 1 --V 1");
    let ok2 = code == 0
        && kv(&out, "bound").as_deref() == Some("0.25")
        && kv(&out, "residual").as_deref() == Some("0")
        && kv(&out, "satisfied").as_deref() == Some("true");
    notes.push(format!("certify {}", if ok2 { "ok" } else { "wrong" }));

    let (_, out) = cli("converge --rule riemann --f reg:prod_ts --rect 0 1 0 1 --levels 6");
    let mut rd = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(out.as_bytes());
    let col = rd.headers().map(|h| h.iter().position(|c| c == "error")).ok().flatten();
    let errors: Vec<f64> = rd
        .records()
        .filter_map(|r| r.ok())
        .filter_map(|r| col.and_then(|c| r.get(c)).and_then(|v| v.parse().ok()))
        .collect();
    let ok3 = errors.len() == 6 && errors[1..].windows(2).all(|w| w[1] < w[0]);
    notes.push(format!("converge {} ({} rows)", if ok3 { "ok" } else { "wrong" }, errors.len()));

    let dir = std::env::temp_dir().join(format!("stieltjes2d-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("grid.csv");
    let f = Surface::new("f", |t: f64, s: f64| (3.1 * t).sin() * s.exp() / 7.0 + 1e-17 * t);
    let xs: Vec<f64> = (0..9).map(|i| -0.3 + 0.137 * i as f64).collect();
    let ys: Vec<f64> = (0..7).map(|i| 0.01 * (i * i) as f64).collect();
    let grid = GridFile::sample(&f, xs.clone(), ys.clone()).unwrap();
    write_grid(&path, &grid).unwrap();
    let loaded = load_grid(&path).unwrap();
    let reparsed = GridFile::parse(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let ok4 = reparsed == grid
        && ys.iter().enumerate().all(|(i, &y)| {
            xs.iter().enumerate().all(|(j, &x)| loaded.eval(x, y).to_bits() == grid.values[i][j].to_bits())
        });
    notes.push(format!("grid round trip {}", if ok4 { "bit-exact" } else { "differs" }));
    let _ = std::fs::remove_dir_all(&dir);

    let (code, out) = cli("certify --rule trapezoid4 --bound trapezoid-bv --f reg:t2s2 --rect 0 1 0 1 --V 0.1");
    let ok5 = code == 2 && kv(&out, "satisfied").as_deref() == Some("false");
    notes.push(format!("undersized certificate exit {code}"));

    verdict(10, "command line", ok1 && ok2 && ok3 && ok4 && ok5, notes.join(", "));
}
