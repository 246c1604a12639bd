//! Command dispatch.

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use num_rational::BigRational;
use wzeta::checkers::{self, CheckConfig, CheckError, CheckReport, IgusaInput, Verdict};
use wzeta::geom::{count_points_with, CountConfig, CountTable, VarietySpec};
use wzeta::padic::{default_precision, zeta_slope_lt_auto};
use wzeta::upoly;
use wzeta::zeta::{reconstruct_rational, series_from_counts};

use crate::gen::{weierstrass_manifest, Weierstrass};
use crate::manifest::{parse_manifest, Manifest};
use crate::report::{emit_report, summary, Outcome};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INCONSISTENT: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "wzeta", about = "Zeta functions, slope factors and point-counting congruences over finite fields")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Point counts over F_{q^r} for r = 1..ext
    Count(Common),
    /// Zeta function reconstructed from counts
    Zeta(Common),
    /// Slope factorization of the zeta function
    Slopes(Common),
    /// Run a named congruence check
    Check(Common),
    /// Print a manifest for Weierstrass curves
    Gen(GenArgs),
}

#[derive(Args, Debug)]
struct Common {
    #[arg(long)]
    manifest: String,
    /// Largest extension degree R
    #[arg(long, default_value_t = 3)]
    ext: usize,
    /// Variety to use instead of `main`
    #[arg(long)]
    variety: Option<String>,
    #[arg(long, requires = "deg_den")]
    deg_num: Option<usize>,
    #[arg(long, requires = "deg_num")]
    deg_den: Option<usize>,
    #[arg(long, conflicts_with_all = ["deg_num", "deg_den"])]
    auto_deg: bool,
    /// p-adic working precision M (default 24a)
    #[arg(long)]
    precision: Option<u32>,
    #[arg(long, default_value_t = 1)]
    kappa: u32,
    /// Slope cut, an exact fraction such as 1 or 1/2
    #[arg(long, default_value = "1")]
    rho: String,
    #[arg(long)]
    check: Option<String>,
    #[arg(long)]
    json: Option<String>,
    /// Enumeration budget in prefix points
    #[arg(long)]
    budget: Option<u64>,
    /// Counts may be extended up to this degree to determine a zeta function
    #[arg(long, default_value_t = 12)]
    r_max: usize,
}

#[derive(Args, Debug)]
struct GenArgs {
    #[arg(long)]
    p: u32,
    #[arg(long, default_value_t = 1)]
    a: u32,
    /// a1,a2,a3,a4,a6
    #[arg(long, allow_hyphen_values = true)]
    e1: String,
    /// Second curve; produces the product with the Igusa action
    #[arg(long, allow_hyphen_values = true)]
    e2: Option<String>,
}

/// Result of one invocation.
#[derive(Debug)]
pub struct RunResult {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
    pub json: Option<String>,
}

fn usage(msg: String) -> RunResult {
    RunResult { code: EXIT_USAGE, stdout: String::new(), stderr: msg, json: None }
}

pub const CHECKS: [&str; 7] =
    ["divis", "ax-katz", "general-serre", "serre-theta", "congruence-pair", "igusa", "vanish-purity"];

/// Parses `argv` (program name first) and runs the command.
pub fn run_command<S: AsRef<str>>(argv: &[S]) -> RunResult {
    let cli = match Cli::try_parse_from(argv.iter().map(|s| s.as_ref())) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK {
                RunResult { code, stdout: text, stderr: String::new(), json: None }
            } else {
                usage(text)
            };
        }
    };
    let (name, common) = match cli.cmd {
        Cmd::Gen(g) => return run_gen(&g),
        Cmd::Count(c) => ("count", c),
        Cmd::Zeta(c) => ("zeta", c),
        Cmd::Slopes(c) => ("slopes", c),
        Cmd::Check(c) => ("check", c),
    };
    let text = match std::fs::read_to_string(&common.manifest) {
        Ok(t) => t,
        Err(e) => return usage(format!("cannot read {}: {e}\n", common.manifest)),
    };
    let manifest = match parse_manifest(&text) {
        Ok(m) => m,
        Err(e) => return usage(format!("{}: {e}\n", common.manifest)),
    };
    let outcome = match execute(name, &common, &manifest) {
        Ok(o) => o,
        Err(e) => return usage(format!("error: {e}\n")),
    };
    let json = emit_report(&outcome);
    let code = match outcome.verdict {
        Some(Verdict::Fail) => EXIT_FAIL,
        Some(Verdict::InternalInconsistency) => EXIT_INCONSISTENT,
        _ => EXIT_OK,
    };
    if let Some(path) = &common.json {
        if let Err(e) = std::fs::write(path, &json) {
            return usage(format!("cannot write {path}: {e}\n"));
        }
    }
    RunResult { code, stdout: summary(&outcome), stderr: String::new(), json: Some(json) }
}

fn run_gen(g: &GenArgs) -> RunResult {
    let parse = |s: &str| -> Result<Weierstrass, String> {
        let v: Vec<i64> = s.split(',').map(|c| c.trim().parse::<i64>().map_err(|_| format!("bad coefficient '{c}'"))).collect::<Result<_, _>>()?;
        v.try_into().map_err(|_| "expected five coefficients a1,a2,a3,a4,a6".to_string())
    };
    let e1 = match parse(&g.e1) {
        Ok(c) => c,
        Err(e) => return usage(e + "\n"),
    };
    let e2 = match g.e2.as_deref().map(parse).transpose() {
        Ok(c) => c,
        Err(e) => return usage(e + "\n"),
    };
    match weierstrass_manifest(g.p, g.a, &e1, e2.as_ref()) {
        Ok(text) => RunResult { code: EXIT_OK, stdout: text, stderr: String::new(), json: None },
        Err(e) => usage(e + "\n"),
    }
}

fn parse_fraction(s: &str) -> Result<BigRational, String> {
    let bad = || format!("'{s}' is not a fraction");
    match s.split_once('/') {
        Some((n, d)) => {
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d == BigInt::from(0) {
                return Err(bad());
            }
            Ok(BigRational::new(n.trim().parse().map_err(|_| bad())?, d))
        }
        None => Ok(BigRational::from_integer(s.trim().parse().map_err(|_| bad())?)),
    }
}

fn pick<'a>(m: &'a Manifest, c: &'a Common) -> Result<(&'a str, &'a VarietySpec), String> {
    match &c.variety {
        Some(n) => m.get(n).map(|v| (n.as_str(), v)).ok_or_else(|| format!("no variety named {n}")),
        None => m.main().ok_or_else(|| "manifest declares no variety".to_string()),
    }
}

fn named<'a>(m: &'a Manifest, n: &str) -> Result<&'a VarietySpec, String> {
    m.get(n).ok_or_else(|| format!("this check needs a variety named {n}"))
}

fn check_config(c: &Common) -> CheckConfig {
    let mut count = CountConfig::default();
    if let Some(b) = c.budget {
        count.budget = b;
    }
    CheckConfig { r: c.ext, precision: c.precision, count, r_max: c.r_max }
}

fn err(e: CheckError) -> String {
    e.to_string()
}

/// Runs a non-`gen` command against a parsed manifest.
fn execute(command: &str, c: &Common, m: &Manifest) -> Result<Outcome, String> {
    let cfg = check_config(c);
    let q = m.field.q_big();
    if c.ext == 0 {
        return Err("--ext must be at least 1".into());
    }
    let mut report = CheckReport { name: command.to_string(), q: q.clone(), ..Default::default() };
    if command != "check" {
        let (name, v) = pick(m, c)?;
        report.inputs.push(("variety".into(), name.into()));
        report.inputs.push(("R".into(), c.ext.to_string()));
        let counts = (1..=c.ext as u32)
            .map(|r| count_points_with(v, r, &cfg.count))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| e.to_string())?;
        report.counts = counts.clone();
        if command == "count" {
            return Ok(Outcome { command: command.into(), report, verdict: None });
        }
        let z = match (c.deg_num, c.deg_den) {
            (Some(dn), Some(dd)) => {
                let series = series_from_counts(&CountTable::new(q.clone(), counts), c.ext).map_err(|e| e.to_string())?;
                reconstruct_rational(&series, dn, dd).map_err(|e| format!("{e} (more counts may help: raise --ext)"))?
            }
            _ => {
                let (table, z, why) = checkers::counts_for_reconstruction(v, &cfg).map_err(err)?;
                if table.len() > c.ext {
                    report.notes.push(format!("counts extended to r = {} to leave two check terms", table.len()));
                }
                report.counts = table.counts;
                z.ok_or_else(|| why.join("; "))?
            }
        };
        report.zeta = Some(z.clone());
        if command == "slopes" {
            let rho = parse_fraction(&c.rho)?;
            let (p, a) = (m.field.p(), m.field.degree());
            let prec = c.precision.unwrap_or_else(|| default_precision(a));
            let part = zeta_slope_lt_auto(&z, &rho, p, a, prec).map_err(|e| e.to_string())?;
            for (label, fs) in [("num", &part.num_factors), ("den", &part.den_factors)] {
                for f in &fs.factors {
                    report.slopes.push(checkers::SlopeEntry { part: label.into(), lambda: f.lambda.clone(), factor: f.factor.clone() });
                }
            }
            report.precision = Some(part.precision);
            report.inputs.push(("rho".into(), c.rho.trim().to_string()));
            report.notes.push(format!(
                "slope-<{} part: ({}) / ({})",
                c.rho.trim(),
                upoly::format(&part.num),
                upoly::format(&part.den)
            ));
        }
        return Ok(Outcome { command: command.into(), report, verdict: None });
    }

    let check = c.check.as_deref().ok_or("check needs --check NAME")?;
    let report = match check {
        "divis" => {
            let (_, v) = pick(m, c)?;
            let (table, _, why) = checkers::counts_for_reconstruction(v, &cfg).map_err(err)?;
            let mut r = checkers::check_divis(&table, c.kappa, &cfg).map_err(err)?;
            r.inconclusive.extend(why);
            r
        }
        "ax-katz" => checkers::check_ax_katz(pick(m, c)?.1, &cfg).map_err(err)?,
        "general-serre" => checkers::check_general_serre(named(m, "E1")?, named(m, "E2")?, &cfg).map_err(err)?,
        "serre-theta" => {
            let decl = m.declared("theta");
            let declared = decl.is_some_and(|d| d.len() == 2);
            let (a, b) = match decl {
                Some([a, b]) => (named(m, a)?, named(m, b)?),
                _ => (named(m, "T1")?, named(m, "T2")?),
            };
            checkers::check_serre_theta(a, b, declared, &cfg).map_err(err)?
        }
        "congruence-pair" => checkers::check_congruence_pair(named(m, "X")?, named(m, "Y")?, &cfg).map_err(err)?,
        "igusa" => {
            let act = m.action.as_ref().ok_or("igusa needs an [action] block")?;
            if act.order != 2 || act.slots.len() != 2 {
                return Err("igusa needs an order-2 action on a product of two curves".into());
            }
            let map = |i: usize| act.slots[i].1.clone().ok_or_else(|| format!("no map for {}", act.slots[i].0));
            let input = IgusaInput {
                e1: named(m, &act.slots[0].0)?.clone(),
                translation: map(0)?,
                e2: named(m, &act.slots[1].0)?.clone(),
                negation: map(1)?,
            };
            let mut r = checkers::check_igusa(&input, &cfg).map_err(err)?;
            if !act.free {
                r.notes.push("the action was not declared free; freeness was checked by counting".into());
            }
            r
        }
        "vanish-purity" => {
            let decl = m.declared("smooth-affine-complement");
            let (x, d) = match decl {
                Some([x, d]) => (named(m, x)?, named(m, d)?),
                _ => (named(m, "X")?, named(m, "D")?),
            };
            let n: usize = match m.declared("dimension") {
                Some([n]) => n.parse().map_err(|_| "dimension must be an integer".to_string())?,
                _ => return Err("vanish-purity needs 'dimension = n' under [declare]".into()),
            };
            checkers::check_vanish_purity(x, d, n, decl.is_some(), &cfg).map_err(err)?
        }
        other => return Err(format!("unknown check '{other}'; expected one of {}", CHECKS.join(", "))),
    };
    let verdict = report.verdict();
    Ok(Outcome { command: "check".into(), report, verdict: Some(verdict) })
}
