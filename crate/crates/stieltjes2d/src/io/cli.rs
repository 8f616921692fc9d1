//! Argument grammar and subcommand dispatch for the `stieltjes2d` binary.

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use crate::bounds::{composite_riemann_bound, composite_rs_bound, evaluate, riemann_reference, BoundInput, BoundKind};
use crate::core::{GridPartition, Rect, Regularity, RegularityCertificate, Surface, CERT_SLACK};
use crate::cubature::{self, RuleId, QUADRATURE_TOL};
use crate::error::{Error, Result};
use crate::gruss;
use crate::io::grid::load_grid;
use crate::io::registry;
use crate::io::report::{Format, Report, Table};
use crate::rs_sum::{rs_oracle_with, OracleOptions};
use crate::taylor::{self, DnField, PartialSource, TaylorCertificates, TaylorFamily};
use crate::variation::{
    arzela_variation, bimonotone_check, estimate_constants, vitali_bivariation, vitali_sum, BimonotoneClass,
    EstimateKind, ESTIMATE_INFLATION,
};

#[derive(Parser, Debug)]
#[command(name = "stieltjes2d", version, about = "Riemann-Stieltjes double integrals with certified error bounds")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Apply one cubature rule and compare with the oracle
    Integrate(Opts),
    /// Check a rule against an a-priori bound built from declared certificates
    Certify(Opts),
    /// Error of a composite rule on dyadic levels 1..K, as a table
    Converge(Opts),
    /// Bivariation, Arzela variation, bimonotonicity and range of f
    Variation(Opts),
    /// Chebyshev functional of f and g with its identities and bounds
    Gruss(Opts),
    /// Taylor blend, remainder and remainder bounds at a point
    Taylor(Opts),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Integrate(_) => "integrate",
            Command::Certify(_) => "certify",
            Command::Converge(_) => "converge",
            Command::Variation(_) => "variation",
            Command::Gruss(_) => "gruss",
            Command::Taylor(_) => "taylor",
        }
    }

    pub fn opts(&self) -> &Opts {
        match self {
            Command::Integrate(o)
            | Command::Certify(o)
            | Command::Converge(o)
            | Command::Variation(o)
            | Command::Gruss(o)
            | Command::Taylor(o) => o,
        }
    }
}

#[derive(Args, Debug, Clone)]
pub struct Opts {
    #[arg(long, num_args = 4, value_names = ["A", "B", "C", "D"], allow_negative_numbers = true, required = true)]
    pub rect: Vec<f64>,
    /// Registry name (`reg:NAME`) or grid file
    #[arg(long)]
    pub f: Option<String>,
    #[arg(long)]
    pub u: Option<String>,
    #[arg(long)]
    pub g: Option<String>,
    #[arg(long)]
    pub rule: Option<String>,
    #[arg(long)]
    pub bound: Option<String>,
    #[arg(long, allow_negative_numbers = true, requires = "y")]
    pub x: Option<f64>,
    #[arg(long, allow_negative_numbers = true, requires = "x")]
    pub y: Option<f64>,
    /// Taylor order; oracle cells per side for the gruss kernel check
    #[arg(long)]
    pub n: Option<u32>,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub levels: Option<u32>,
    #[arg(long = "V", allow_negative_numbers = true)]
    pub v: Option<f64>,
    #[arg(long = "H1", requires_all = ["h2", "beta1", "beta2"])]
    pub h1: Option<f64>,
    #[arg(long = "H2", requires = "h1")]
    pub h2: Option<f64>,
    #[arg(long = "beta1", requires = "h1")]
    pub beta1: Option<f64>,
    #[arg(long = "beta2", requires = "h1")]
    pub beta2: Option<f64>,
    #[arg(long = "L1", requires = "l2")]
    pub l1: Option<f64>,
    #[arg(long = "L2", requires = "l1")]
    pub l2: Option<f64>,
    #[arg(long = "m", allow_negative_numbers = true, requires = "big_m")]
    pub m: Option<f64>,
    #[arg(long = "M", allow_negative_numbers = true, requires = "m")]
    pub big_m: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

/// What the binary prints and returns.
#[derive(Debug, Clone, Default)]
pub struct Outcome {
    pub exit: i32,
    pub stdout: String,
    pub stderr: String,
    pub report: Option<Report>,
}

impl Outcome {
    fn error(e: &Error) -> Self {
        Outcome { exit: 1, stderr: format!("error: {e}\n"), ..Default::default() }
    }
}

/// Parse `args` (program name first) and run the subcommand.
///
/// Exit 0 on success, 2 when a checked certificate is violated, 1 on any error.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Outcome { stdout: text, ..Default::default() },
                _ => Outcome { exit: 1, stderr: text, ..Default::default() },
            };
        }
    };
    let echo = argv.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect::<Vec<_>>().join(" ");
    let start = Instant::now();
    let mut report = match execute(&cli.command, echo) {
        Ok(r) => r,
        Err(e) => return Outcome::error(&e),
    };
    report.elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
    if let Err(e) = report.check_finite() {
        return Outcome::error(&e);
    }
    let opts = cli.command.opts();
    let default = if matches!(cli.command, Command::Converge(_)) { Format::Csv } else { Format::Kv };
    let text = report.render(opts.format.unwrap_or(default));
    let exit = if report.satisfied() == Some(false) { 2 } else { 0 };
    let stdout = match &opts.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &text) {
                return Outcome::error(&Error::Io(e));
            }
            String::new()
        }
        None => text,
    };
    Outcome { exit, stdout, stderr: String::new(), report: Some(report) }
}

/// Run a parsed command and return its report (no timing, no rendering).
pub fn execute(cmd: &Command, echo: String) -> Result<Report> {
    let mut cx = Ctx::new(cmd.opts(), echo)?;
    match cmd {
        Command::Integrate(_) => integrate(&mut cx)?,
        Command::Certify(_) => certify(&mut cx)?,
        Command::Converge(_) => converge(&mut cx)?,
        Command::Variation(_) => variation(&mut cx)?,
        Command::Gruss(_) => gruss_cmd(&mut cx)?,
        Command::Taylor(_) => taylor_cmd(&mut cx)?,
    }
    Ok(cx.report)
}

fn usage(msg: impl Into<String>) -> Error {
    Error::Usage(msg.into())
}

/// `reg:NAME` from the registry, anything else as a grid file path.
pub fn resolve_function(spec: &str) -> Result<Surface> {
    if spec.starts_with(registry::PREFIX) {
        return Ok(registry::lookup(spec)?.surface());
    }
    let path = Path::new(spec);
    if path.is_file() {
        load_grid(path)
    } else {
        Err(usage(format!("unknown function '{spec}': not a registry name and not a file")))
    }
}

struct Ctx<'a> {
    o: &'a Opts,
    q: Rect,
    tol: f64,
    oracle: OracleOptions,
    report: Report,
}

const CERT_FLAGS: [&str; 4] = ["--V", "--H1..--beta2", "--L1 --L2", "--m --M"];

impl<'a> Ctx<'a> {
    fn new(o: &'a Opts, echo: String) -> Result<Self> {
        let [a, b, c, d] = o.rect[..] else {
            return Err(usage("--rect takes four numbers"));
        };
        let q = Rect::new(a, b, c, d).map_err(|e| usage(format!("malformed --rect: {e}")))?;
        let tol = o.tol.unwrap_or(1e-8);
        if !(tol > 0.0 && tol.is_finite()) {
            return Err(usage("--tol must be positive"));
        }
        Ok(Ctx { o, q, tol, oracle: OracleOptions::new(tol), report: Report::new(echo) })
    }

    fn load(&mut self, role: &str, spec: &str) -> Result<Surface> {
        let f = resolve_function(spec)?;
        f.check_covers(&self.q)?;
        self.report.input(role, f.name());
        Ok(f)
    }

    fn function(&mut self, role: &str) -> Result<Surface> {
        let spec = self.spec(role).ok_or_else(|| usage(format!("this command needs --{role}")))?;
        self.load(role, &spec)
    }

    fn function_or(&mut self, role: &str, default: &str) -> Result<Surface> {
        let spec = self.spec(role).unwrap_or_else(|| default.to_string());
        self.load(role, &spec)
    }

    fn spec(&self, role: &str) -> Option<String> {
        match role {
            "f" => self.o.f.clone(),
            "u" => self.o.u.clone(),
            _ => self.o.g.clone(),
        }
    }

    fn reject(&self, role: &str, why: &str) -> Result<()> {
        if self.spec(role).is_some() {
            return Err(usage(format!("--{role} is not used {why}")));
        }
        Ok(())
    }

    fn point(&self) -> Option<(f64, f64)> {
        self.o.x.zip(self.o.y)
    }

    fn holder(&self) -> Option<(f64, f64, f64, f64)> {
        Some((self.o.h1?, self.o.h2?, self.o.beta1?, self.o.beta2?))
    }

    fn given_flags(&self) -> [bool; 4] {
        [self.o.v.is_some(), self.holder().is_some(), self.o.l1.is_some(), self.o.m.is_some()]
    }

    fn no_certificates(&self, cmd: &str) -> Result<()> {
        if let Some(k) = self.given_flags().iter().position(|&g| g) {
            return Err(usage(format!("{cmd} takes no {} certificate", CERT_FLAGS[k])));
        }
        Ok(())
    }

    fn levels(&self, default: u32) -> Result<u32> {
        let k = self.o.levels.unwrap_or(default);
        if (1..=10).contains(&k) {
            Ok(k)
        } else {
            Err(usage("--levels must be in 1..=10"))
        }
    }
}

fn oracle_fields(r: &mut Report, value: f64, err: f64, converged: bool) {
    r.num("oracle", value);
    r.num("oracle_error", err);
    r.flag("oracle_converged", converged);
}

// ---------------------------------------------------------------------------
// integrate

fn integrate(cx: &mut Ctx) -> Result<()> {
    cx.no_certificates("integrate")?;
    cx.reject("g", "by integrate")?;
    let name = cx.o.rule.clone().ok_or_else(|| usage("integrate needs --rule"))?;
    let q = cx.q;
    let (x, y) = match (cx.point(), name.as_str()) {
        (Some(p), _) => p,
        (None, "companion4") => (q.a, q.c),
        (None, _) => q.center(),
    };
    let rule = RuleId::parse_with_point(&name, x, y)?;
    let f = cx.function("f")?;
    let u = if rule.is_stieltjes() {
        Some(cx.function_or("u", "reg:prod_ts")?)
    } else {
        cx.reject("u", &format!("by the plain rule {name}"))?;
        None
    };
    cx.report.text("rule", rule.name());
    let levels = cx.levels(4)?;
    let value = match rule {
        RuleId::OstrowskiPoint { x, y } | RuleId::Companion4 { x, y } => {
            cx.report.num("x", x);
            cx.report.num("y", y);
            if matches!(rule, RuleId::Companion4 { .. }) {
                cubature::companion_rule(&f, &q, x, y)?
            } else {
                cubature::ostrowski_point_rule(&f, &q, x, y)?
            }
        }
        RuleId::Trapezoid4 => cubature::trapezoid_rule(&f, &q),
        RuleId::Simpson9 => cubature::simpson_rule(&f, &q),
        RuleId::RiemannComposite => {
            let p = GridPartition::dyadic(&q, levels)?;
            cx.report.int("cells", (p.nx() * p.ny()) as i64);
            cubature::composite_riemann(&f, &p)
        }
        _ => {
            let u = u.as_ref().expect("stieltjes rules load u");
            match rule {
                RuleId::RsTrapezoid => cubature::rs_trapezoid_rule(&f, u, &q, QUADRATURE_TOL)?,
                RuleId::MidpointRS => {
                    let m = cubature::rs_midpoint_rule(&f, u, &q, QUADRATURE_TOL)?;
                    cx.report.num("node_x", m.node.0);
                    cx.report.num("node_y", m.node.1);
                    m.value
                }
                RuleId::RsComposite => {
                    let p = GridPartition::dyadic(&q, levels)?;
                    cx.report.int("cells", (p.nx() * p.ny()) as i64);
                    cubature::composite_rs(&f, u, &p, QUADRATURE_TOL)?
                }
                RuleId::TrapezoidFunctional => {
                    // The value is itself the error of the corner rule, so no residual.
                    let fv = cubature::trapezoid_functional(&f, u, &q, cx.tol)?;
                    cx.report.num("value", fv.value);
                    oracle_fields(&mut cx.report, fv.oracle.value, fv.oracle.error_estimate, fv.oracle.converged);
                    return Ok(());
                }
                _ => {
                    let mb = cubature::mercer_bracket(&f, u, &q, QUADRATURE_TOL)?;
                    let o = rs_oracle_with(&f, u, &q, &cx.oracle)?;
                    cx.report.num("lower", mb.lower);
                    cx.report.num("upper", mb.upper);
                    cx.report.num("node_x", mb.node.0);
                    cx.report.num("node_y", mb.node.1);
                    oracle_fields(&mut cx.report, o.value, o.error_estimate, o.converged);
                    let slack = o.error_estimate + CERT_SLACK;
                    cx.report.flag("bracketed", mb.lower <= o.value + slack && o.value <= mb.upper + slack);
                    return Ok(());
                }
            }
        }
    };
    cx.report.num("value", value);
    let (reference, err, converged) = match &u {
        Some(u) => {
            let o = rs_oracle_with(&f, u, &q, &cx.oracle)?;
            (o.value, o.error_estimate, o.converged)
        }
        None => {
            let (v, e) = riemann_reference(&f, &q, &cx.oracle)?;
            (v, e, true)
        }
    };
    oracle_fields(&mut cx.report, reference, err, converged);
    cx.report.num("residual", (value - reference).abs());
    Ok(())
}

// ---------------------------------------------------------------------------
// certify

/// The rule whose estimate a bound kind certifies; `None` for pure functionals.
pub fn rule_for(kind: BoundKind) -> Option<&'static str> {
    use BoundKind::*;
    match kind {
        OstrowskiBV | OstrowskiHolderU | ThetaQuadrant => Some("ostrowski"),
        CompanionBV => Some("companion4"),
        TrapezoidBV => Some("trapezoid4"),
        SimpsonBV => Some("simpson9"),
        TrapFuncHolderBV | TrapFuncLipschitzBV | TrapFuncHolderBimono => Some("trapezoid-functional"),
        _ => None,
    }
}

fn declared(r: Regularity) -> Result<RegularityCertificate> {
    RegularityCertificate::declared(r)
}

/// Certificates for one role; marks which flag groups were consumed.
fn role_certs(cx: &Ctx, kind: BoundKind, role: &str, s: &Surface, needs: &[&str], used: &mut [bool; 4]) -> Result<Vec<RegularityCertificate>> {
    let missing = |flag: &str| usage(format!("{kind} needs {flag} for {role}"));
    let mut out = Vec::new();
    for need in needs {
        match *need {
            "bivariation" => {
                let v = cx.o.v.ok_or_else(|| missing("--V"))?;
                used[0] = true;
                out.push(declared(Regularity::BoundedBivariation { v })?);
            }
            "holder" | "corner-growth" => {
                let (h1, h2, beta1, beta2) = cx.holder().ok_or_else(|| missing("--H1 --H2 --beta1 --beta2"))?;
                used[1] = true;
                out.push(declared(Regularity::Holder { h1, h2, beta1, beta2 })?);
            }
            "lipschitz" => {
                let (l1, l2) = cx.o.l1.zip(cx.o.l2).ok_or_else(|| missing("--L1 --L2"))?;
                used[2] = true;
                out.push(declared(Regularity::Lipschitz { l1, l2 })?);
            }
            "range" | "partial-range" => {
                let (min, max) = cx.o.m.zip(cx.o.big_m).ok_or_else(|| missing("--m --M"))?;
                used[3] = true;
                out.push(declared(Regularity::Range { min, max })?);
            }
            "bimonotone" => {
                let check = bimonotone_check(s, &cx.q, 32)?;
                let direction = check
                    .direction()
                    .ok_or_else(|| Error::Hypothesis(format!("{kind} needs {role} bimonotone; {} is not", s.name())))?;
                out.push(RegularityCertificate::estimated(
                    Regularity::Bimonotone { direction },
                    33 * 33,
                    ESTIMATE_INFLATION,
                )?);
            }
            other => return Err(usage(format!("{kind} consumes an unknown certificate '{other}'"))),
        }
    }
    Ok(out)
}

fn certify(cx: &mut Ctx) -> Result<()> {
    cx.reject("g", "by certify (use --u for the integrator)")?;
    let kind: BoundKind = cx.o.bound.as_deref().ok_or_else(|| usage("certify needs --bound"))?.parse()?;
    let rule = rule_for(kind);
    match (cx.o.rule.as_deref(), rule) {
        (Some(given), Some(want)) if given != want => {
            return Err(usage(format!("{kind} certifies rule {want}, not {given}")));
        }
        (Some(given), None) => return Err(usage(format!("{kind} is a functional bound and takes no rule ({given})"))),
        _ => {}
    }
    if cx.point().is_some() && !kind.uses_point() && kind != BoundKind::CompanionBV {
        return Err(usage(format!("{kind} takes no --x --y")));
    }
    let f = cx.function("f")?;
    let u = if kind.is_riemann() {
        cx.reject("u", &format!("by {kind}"))?;
        registry::lookup("reg:prod_ts")?.surface()
    } else {
        cx.function("u")?
    };
    let (need_f, need_u) = kind.consumes();
    let mut used = [false; 4];
    let f_certs = role_certs(cx, kind, "f", &f, need_f, &mut used)?;
    let u_certs = role_certs(cx, kind, "u", &u, need_u, &mut used)?;
    for (k, (&given, &taken)) in cx.given_flags().iter().zip(&used).enumerate() {
        if given && !taken {
            return Err(usage(format!("incompatible certificate: {kind} does not use {}", CERT_FLAGS[k])));
        }
    }
    let mut input = BoundInput::new(f, u, cx.q).oracle(cx.oracle.clone());
    input.f_certs = f_certs;
    input.u_certs = u_certs;
    if let Some((x, y)) = cx.point() {
        input = input.at(x, y);
    }
    let out = evaluate(kind, &input)?;
    let r = &mut cx.report;
    r.text("bound_kind", kind.name());
    r.text("rule", rule.unwrap_or("functional"));
    r.num("estimate", out.estimate);
    r.num("oracle", out.reference);
    r.num("oracle_error", out.oracle_error);
    r.num("residual", out.residual());
    r.num("bound", out.bound);
    if let Some(l) = out.lower {
        r.num("lower", l);
    }
    if let Some(u) = out.upper {
        r.num("upper", u);
    }
    let ratio = out.ratio();
    if ratio.is_finite() {
        r.num("ratio", ratio);
    }
    r.flag("satisfied", out.satisfied());
    Ok(())
}

// ---------------------------------------------------------------------------
// converge

/// Per-cell bivariation from a 4 x 4 Vitali sum, inflated.
fn sampled_cell_v(s: &Surface) -> impl Fn(&Rect) -> f64 + '_ {
    move |cell| match GridPartition::uniform(cell, 4, 4) {
        Ok(p) => ESTIMATE_INFLATION * vitali_sum(s, &p),
        Err(_) => f64::NAN,
    }
}

fn converge(cx: &mut Ctx) -> Result<()> {
    cx.reject("g", "by converge (use --u for the integrator)")?;
    let name = cx.o.rule.clone().unwrap_or_else(|| "riemann".into());
    let rule: RuleId = name.parse()?;
    let levels = cx.levels(6)?;
    let q = cx.q;
    let f = cx.function("f")?;
    let mut rows = Vec::new();
    let declared_v = cx.o.v;
    if let Some(v) = declared_v {
        declared(Regularity::BoundedBivariation { v })?;
    }
    let (reference, err) = match rule {
        RuleId::RiemannComposite => {
            cx.reject("u", "by the riemann rule")?;
            if cx.given_flags()[1..].iter().any(|&g| g) {
                return Err(usage("incompatible certificate: riemann uses only --V"));
            }
            let (reference, err) = riemann_reference(&f, &q, &cx.oracle)?;
            for k in 1..=levels {
                let n = 1usize << k;
                let p = GridPartition::uniform_at(&q, n, n, 0.0)?;
                let est = cubature::composite_riemann(&f, &p);
                // Uniform cells share one coefficient, so spreading a total V evenly gives the same sum.
                let bound = match declared_v {
                    Some(v) => composite_riemann_bound(&p, |_| v / (n * n) as f64)?,
                    None => composite_riemann_bound(&p, sampled_cell_v(&f))?,
                };
                rows.push(vec![k as f64, (n * n) as f64, est, (est - reference).abs(), bound]);
            }
            (reference, err)
        }
        RuleId::RsComposite => {
            let u = cx.function("u")?;
            let holder = cx.holder().ok_or_else(|| usage("rs-composite needs --H1 --H2 --beta1 --beta2 for f"))?;
            declared(Regularity::Holder { h1: holder.0, h2: holder.1, beta1: holder.2, beta2: holder.3 })?;
            if cx.given_flags()[2..].iter().any(|&g| g) {
                return Err(usage("incompatible certificate: rs-composite uses the Holder flags and --V"));
            }
            let o = rs_oracle_with(&f, &u, &q, &cx.oracle)?;
            for k in 1..=levels {
                let p = GridPartition::dyadic(&q, k)?;
                let n = p.nx();
                let est = cubature::composite_rs(&f, &u, &p, QUADRATURE_TOL)?;
                let bound = match declared_v {
                    Some(v) => composite_rs_bound(&p, holder, |_| v / (n * n) as f64),
                    None => composite_rs_bound(&p, holder, sampled_cell_v(&u)),
                };
                rows.push(vec![k as f64, (n * n) as f64, est, (est - o.value).abs(), bound]);
            }
            (o.value, o.error_estimate)
        }
        _ => return Err(usage(format!("converge supports riemann and rs-composite, not {name}"))),
    };
    let slack = err + CERT_SLACK;
    let holds = rows.iter().all(|r| r[3] <= r[4] + slack);
    let r = &mut cx.report;
    r.text("rule", rule.name());
    r.text("certificate", if declared_v.is_some() { "declared" } else { "estimated" });
    r.num("reference", reference);
    r.num("reference_error", err);
    r.flag("satisfied", holds);
    r.table = Some(Table {
        header: ["level", "cells", "estimate", "error", "bound"].map(String::from).to_vec(),
        rows,
    });
    Ok(())
}

// ---------------------------------------------------------------------------
// variation

fn variation(cx: &mut Ctx) -> Result<()> {
    if cx.holder().is_some() || cx.o.l1.is_some() {
        return Err(usage("variation checks only --V and --m --M"));
    }
    cx.reject("u", "by variation")?;
    cx.reject("g", "by variation")?;
    let q = cx.q;
    let f = cx.function("f")?;
    let tol = cx.o.tol.unwrap_or(1e-6);
    let vit = vitali_bivariation(&f, &q, tol)?;
    let arz = arzela_variation(&f, &q, tol)?;
    let bm = bimonotone_check(&f, &q, 32)?;
    let range = estimate_constants(&f, &q, EstimateKind::Range, 4096)?;
    let r = &mut cx.report;
    r.num("vitali", vit.value);
    r.flag("vitali_converged", vit.converged);
    r.int("vitali_resolution", vit.resolution as i64);
    r.num("arzela", arz.value);
    r.flag("arzela_converged", arz.converged);
    let class = match (bm.flat, bm.class) {
        (true, _) => "flat",
        (_, BimonotoneClass::Increasing) => "increasing",
        (_, BimonotoneClass::Decreasing) => "decreasing",
        _ => "neither",
    };
    r.text("bimonotone", class);
    let (lo, hi) = match range.regularity {
        Regularity::Range { min, max } => (min, max),
        _ => unreachable!("range estimate"),
    };
    r.num("range_min", lo);
    r.num("range_max", hi);
    let mut checks = Vec::new();
    if let Some(v) = cx.o.v {
        declared(Regularity::BoundedBivariation { v })?;
        checks.push(vit.value <= v * (1.0 + 1e-9) + CERT_SLACK);
    }
    if let Some((m, big_m)) = cx.o.m.zip(cx.o.big_m) {
        declared(Regularity::Range { min: m, max: big_m })?;
        let s = 1e-9 * lo.abs().max(hi.abs()).max(1.0);
        checks.push(lo >= m - s && hi <= big_m + s);
    }
    if !checks.is_empty() {
        r.flag("satisfied", checks.iter().all(|&c| c));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// gruss

fn gruss_cmd(cx: &mut Ctx) -> Result<()> {
    if cx.o.v.is_some() || cx.holder().is_some() {
        return Err(usage("gruss checks only --L1 --L2 and --m --M"));
    }
    cx.reject("u", "by gruss (use --g)")?;
    let q = cx.q;
    let f = cx.function("f")?;
    let g = cx.function("g")?;
    let tol = cx.tol;
    let ch = gruss::chebyshev(&f, &g, &q, tol)?;
    let side = cx.o.n.map_or(32, |n| n as usize);
    let kernel = gruss::cheby_kernel_psi(&f, &g, &q, &cx.oracle.clone().with_max_side(side.min(cx.oracle.max_side)));
    let r = &mut cx.report;
    r.num("chebyshev", ch.t_value);
    r.num("mean_f", ch.mean_f);
    r.num("mean_g", ch.mean_g);
    match gruss::korkine(&f, &g, &q, tol) {
        Ok(k) => {
            r.num("korkine_lhs", k.lhs);
            r.num("korkine_rhs", k.rhs);
            r.num("korkine_residual", k.residual);
        }
        Err(Error::Unconverged(msg)) => r.text("korkine", format!("unconverged ({msg})")),
        Err(e) => return Err(e),
    }
    r.num("gruss_bound_sampled", ch.bound);
    match kernel {
        Ok(k) => {
            r.num("kernel_value", k.t_via_kernel);
            r.num("kernel_residual", k.residual_vs_direct);
        }
        Err(Error::Unconverged(msg)) => r.text("kernel", format!("unconverged ({msg})")),
        Err(e) => return Err(e),
    }
    let mut checks = Vec::new();
    let slack = 1e-9 * ch.t_value.abs().max(1.0) + CERT_SLACK;
    if let Some((l1, l2)) = cx.o.l1.zip(cx.o.l2) {
        declared(Regularity::Lipschitz { l1, l2 })?;
        let euclid = gruss::gruss_lipschitz_bound(l1, l2, &q, gruss::LipschitzVariant::Euclidean);
        r.num("lipschitz_bound", euclid);
        r.num(
            "product_increment_bound",
            gruss::gruss_lipschitz_bound(l1, l2, &q, gruss::LipschitzVariant::ProductIncrement),
        );
        r.num("product_increment_korkine", gruss::gruss_product_increment_korkine(l1, l2, &q));
        checks.push(ch.t_value.abs() <= euclid + slack);
    }
    if let Some((m, big_m)) = cx.o.m.zip(cx.o.big_m) {
        declared(Regularity::Range { min: m, max: big_m })?;
        let al = gruss::aleph_gruss(&f, &g, &q, m, big_m, cx.o.l2.unwrap_or(1.0), &cx.oracle)?;
        let r = &mut cx.report;
        r.num("aleph", al.value);
        r.num("aleph_bound", al.printed);
        r.num("aleph_bound_l", al.with_l);
        checks.push(al.value.abs() <= al.printed + al.oracle_error + CERT_SLACK);
    }
    if !checks.is_empty() {
        cx.report.flag("satisfied", checks.iter().all(|&c| c));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// taylor

fn taylor_cmd(cx: &mut Ctx) -> Result<()> {
    cx.no_certificates("taylor (constants are estimated from the partials)")?;
    cx.reject("u", "by taylor")?;
    cx.reject("g", "by taylor")?;
    let q = cx.q;
    let n = cx.o.n.unwrap_or(1);
    let (x, y) = cx.point().unwrap_or_else(|| q.center());
    let f = cx.function("f")?;
    let dn = DnField::new(&f, n, &q)?;
    let rem = taylor::taylor_remainder_bn(&f, &dn, &q, x, y, &cx.oracle)?;
    let mid = taylor::taylor_midpoint(&f, &dn, &q, &cx.oracle)?;
    let certs = TaylorCertificates::estimate(&dn, &q, x, y, 2.0, 1e-9)?;
    let r = &mut cx.report;
    r.int("order", i64::from(n));
    r.text(
        "partials",
        match dn.source() {
            PartialSource::Metadata => "metadata",
            PartialSource::FiniteDifference => "finite-difference",
        },
    );
    r.num("x", x);
    r.num("y", y);
    r.num("value", f.try_eval(x, y)?);
    r.num("blend", rem.blend);
    r.num("remainder", rem.value);
    r.num("remainder_error", rem.error_estimate);
    r.num("representation_residual", rem.representation_residual);
    r.num("midpoint_e", mid.e_m);
    r.num("midpoint_f", mid.f_m);
    r.num("midpoint_residual", mid.residual);
    let mut all = true;
    for fam in TaylorFamily::ALL_DEFAULT {
        let key = format!("bound.{}", fam.name());
        match taylor::taylor_bounds(fam, &certs, &q, n, x, y) {
            Ok(b) => {
                let (lhs, err) = match fam {
                    TaylorFamily::Midpoint => (mid.f_m.abs(), mid.error_estimate),
                    _ => (rem.value.abs(), rem.error_estimate),
                };
                all &= lhs <= b + err + CERT_SLACK;
                r.num(&key, b);
            }
            Err(e) => r.text(&key, format!("n/a ({e})")),
        }
    }
    r.flag("satisfied", all);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn argv(s: &str) -> Vec<String> {
        std::iter::once("stieltjes2d".to_string()).chain(s.split_whitespace().map(String::from)).collect()
    }

    #[test]
    fn negative_rect_coordinates_parse() {
        let cli = Cli::try_parse_from(argv("variation --rect -1 0 -2.5 -1 --f reg:t")).unwrap();
        assert_eq!(cli.command.opts().rect, vec![-1.0, 0.0, -2.5, -1.0]);
    }

    #[test]
    fn bad_input_exits_one() {
        for line in [
            "integrate --rule midpoint --f reg:nope --rect 0 1 0 1",
            "integrate --rule midpoint --f reg:t --rect 1 0 0 1",
            "integrate --rule midpoint --f reg:t --rect 0 1 0",
            "integrate --rule warp --f reg:t --rect 0 1 0 1",
            "certify --bound trapezoid-bv --f reg:prod_ts --rect 0 1 0 1",
            "certify --bound trapezoid-bv --f reg:prod_ts --rect 0 1 0 1 --V 1 --L1 1 --L2 1",
            "certify --rule simpson9 --bound trapezoid-bv --f reg:prod_ts --rect 0 1 0 1 --V 1",
        ] {
            let out = run(argv(line));
            assert_eq!(out.exit, 1, "{line}: {}", out.stderr);
            assert!(!out.stderr.is_empty());
        }
    }

    #[test]
    fn help_exits_zero() {
        let out = run(argv("--help"));
        assert_eq!(out.exit, 0);
        assert!(out.stdout.contains("certify"));
    }

    #[test]
    fn every_bound_kind_has_a_consistent_rule() {
        for kind in BoundKind::ALL {
            if let Some(r) = rule_for(kind) {
                assert!(r.parse::<RuleId>().is_ok(), "{kind}");
            }
        }
    }
}
