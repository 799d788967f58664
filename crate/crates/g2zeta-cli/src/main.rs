//! `g2zeta`: verification sweeps and single evaluations for the local G2
//! zeta integrals.

mod report;

use std::io;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use g2zeta_core::counting::{self, PairSelection, Prediction};
use g2zeta_core::g2::{self, OrbitKind, Quadruple};
use g2zeta_core::integrals::{self, Case11Mode, CaseId, LocalParams, NumericConfig};
use g2zeta_core::{padic, Error};
use num_rational::BigRational;
use serde_json::json;

use report::{Format, Outcome};

#[derive(Parser, Debug)]
#[command(name = "g2zeta", version, about = "Exact checks for local G2 zeta integrals at p = 5 mod 6")]
struct Cli {
    /// Output format for the report on stdout.
    #[arg(long, value_enum, default_value = "json", global = true)]
    output: Format,
    /// Worker threads for parallel counting and integration.
    #[arg(long, env = "G2ZETA_WORKERS", global = true)]
    workers: Option<usize>,
    /// Suppress progress messages on stderr.
    #[arg(long, global = true)]
    quiet: bool,
    /// Perturbs every expected value so the check fails (exit-code tests).
    #[arg(long, hide = true, global = true)]
    inject_wrong_expected: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Count solutions of the conjecture polynomial mod p for (b, c) pairs.
    VerifyConjecture(VerifyConjectureArgs),
    /// Count solutions of the conjecture polynomial mod p^k.
    Count(CountArgs),
    /// Count w^2 + 3wy + 3y^2 = b mod p^k.
    Psi1(Psi1Args),
    /// Closed form, and optionally a numeric value, of one sub-integral.
    EvalCase(EvalCaseArgs),
    /// Sum the sixteen closed forms and compare with the product formula.
    VerifyTheorem(VerifyTheoremArgs),
    /// Orbit type of sigma under GL_2(Z_p).
    ClassifyOrbit(ClassifyArgs),
    /// Check the G2 matrix identities on seeded random inputs.
    VerifyIdentities(IdentityArgs),
}

#[derive(Args, Debug)]
struct VerifyConjectureArgs {
    #[arg(long, default_value_t = 5)]
    pmin: u64,
    #[arg(long)]
    pmax: u64,
    /// `all`, or a number of sampled pairs per prime.
    #[arg(long, default_value = "all")]
    pairs: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Method {
    Auto,
    Brute,
    Hensel,
}

#[derive(Args, Debug)]
struct CountArgs {
    #[arg(long = "p")]
    p: u64,
    #[arg(long, allow_hyphen_values = true)]
    b: i64,
    #[arg(long, allow_hyphen_values = true)]
    c: i64,
    #[arg(long, default_value_t = 1)]
    k: u32,
    #[arg(long, value_enum, default_value = "auto")]
    method: Method,
    #[arg(long, default_value_t = counting::DEFAULT_WORK_LIMIT)]
    work_limit: u128,
}

#[derive(Args, Debug)]
struct Psi1Args {
    #[arg(long = "p")]
    p: u64,
    /// A single unit `b`; every unit residue when omitted.
    #[arg(long, allow_hyphen_values = true)]
    b: Option<i64>,
    #[arg(long, default_value_t = 1)]
    k: u32,
}

#[derive(Args, Debug)]
struct EvalCaseArgs {
    /// Four signs for (v, u, z, y), e.g. `+-++`, or a case number 1..16.
    #[arg(long, allow_hyphen_values = true)]
    case: String,
    #[arg(long = "p")]
    p: u64,
    #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
    b: i64,
    #[arg(long, default_value_t = 2, allow_hyphen_values = true)]
    c: i64,
    /// Real `s` for the numeric cross-check; skipped when omitted.
    #[arg(long)]
    s: Option<f64>,
    #[arg(long, default_value_t = 4)]
    depth: u32,
    #[arg(long, default_value_t = -10, allow_hyphen_values = true)]
    vmin: i64,
    /// Relative tolerance for numeric agreement.
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
    /// Use the counted N(-1) in case -+-+ instead of assuming p^2 - 1.
    #[arg(long)]
    counted: bool,
}

#[derive(Args, Debug)]
struct VerifyTheoremArgs {
    /// Comma-separated primes.
    #[arg(long = "p", value_delimiter = ',')]
    p: Vec<u64>,
    #[arg(long, allow_hyphen_values = true, requires = "c")]
    b: Option<i64>,
    #[arg(long, allow_hyphen_values = true, requires = "b")]
    c: Option<i64>,
    /// Irreducible pairs per prime when b, c are omitted.
    #[arg(long, default_value_t = 3)]
    pairs: usize,
    #[arg(long)]
    counted: bool,
}

#[derive(Args, Debug)]
struct ClassifyArgs {
    /// Comma-separated rationals, e.g. `1,0,1,2` or `1/2,0,3,5`.
    #[arg(long, allow_hyphen_values = true)]
    sigma: String,
    #[arg(long = "p")]
    p: u64,
    /// Fail unless the orbit has this kind.
    #[arg(long, value_enum)]
    expect: Option<KindArg>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum KindArg {
    ThreeDistinctLinear,
    LinearTimesIrreducibleQuadratic,
    IrreducibleCubic,
    RepeatedRoot,
}

impl From<KindArg> for OrbitKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::ThreeDistinctLinear => OrbitKind::ThreeDistinctLinear,
            KindArg::LinearTimesIrreducibleQuadratic => OrbitKind::LinearTimesIrreducibleQuadratic,
            KindArg::IrreducibleCubic => OrbitKind::IrreducibleCubic,
            KindArg::RepeatedRoot => OrbitKind::RepeatedRoot,
        }
    }
}

#[derive(Args, Debug)]
struct IdentityArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 100)]
    trials: usize,
}

struct Ctx {
    quiet: bool,
    inject: bool,
}

impl Ctx {
    fn progress(&self, msg: impl AsRef<str>) {
        if !self.quiet {
            eprintln!("{}", msg.as_ref());
        }
    }

    fn perturb(&self, x: u128) -> u128 {
        x + u128::from(self.inject)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.workers {
        if n == 0 {
            eprintln!("error: worker count must be positive");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let ctx = Ctx { quiet: cli.quiet, inject: cli.inject_wrong_expected };
    let start = Instant::now();
    let outcome = match &cli.command {
        Command::VerifyConjecture(a) => verify_conjecture(&ctx, a),
        Command::Count(a) => count(&ctx, a),
        Command::Psi1(a) => psi1(&ctx, a),
        Command::EvalCase(a) => eval_case(&ctx, a),
        Command::VerifyTheorem(a) => verify_theorem(&ctx, a),
        Command::ClassifyOrbit(a) => classify_orbit(&ctx, a),
        Command::VerifyIdentities(a) => verify_identities(&ctx, a),
    };
    match outcome {
        Ok(outcome) => {
            ctx.progress(format!("done in {} ms", start.elapsed().as_millis()));
            if let Err(e) = outcome.write(cli.output, &mut io::stdout().lock()) {
                eprintln!("error writing report: {e}");
                return ExitCode::from(2);
            }
            ExitCode::from(if outcome.passed { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error [{}]: {e}", e.code());
            ExitCode::from(2)
        }
    }
}

type CmdResult = Result<Outcome, Error>;

fn primes_five_mod_six(lo: u64, hi: u64) -> Vec<u64> {
    (lo.max(5)..=hi).filter(|&p| p % 6 == 5 && padic::is_prime(p)).collect()
}

fn verify_conjecture(ctx: &Ctx, a: &VerifyConjectureArgs) -> CmdResult {
    let selection = if a.pairs == "all" {
        PairSelection::All
    } else {
        let n = a
            .pairs
            .parse::<usize>()
            .map_err(|_| Error::InvalidInput(format!("--pairs must be 'all' or a count, got '{}'", a.pairs)))?;
        PairSelection::Sample { n, seed: a.seed }
    };
    let primes = primes_five_mod_six(a.pmin, a.pmax);
    if primes.is_empty() {
        return Err(Error::InvalidInput(format!("no primes p = 5 mod 6 in [{}, {}]", a.pmin, a.pmax)));
    }
    let config = json!({"pmin": a.pmin, "pmax": a.pmax, "pairs": a.pairs, "seed": a.seed});
    let mut out = Outcome::new(
        "verify-conjecture",
        config,
        &["prime", "expected", "irreducible_pairs", "pairs_tested", "counterexamples", "passed"],
    );
    for p in primes {
        let report = counting::verify_conjecture(p, selection)?;
        ctx.progress(format!("p = {p}: {} pairs in {} ms", report.pairs_tested, report.elapsed_ms));
        if let Some(w) = &report.warning {
            ctx.progress(format!("p = {p}: {w}"));
        }
        let passed = report.passed() && !ctx.inject;
        let row = vec![
            p.to_string(),
            ctx.perturb(report.expected as u128).to_string(),
            report.irreducible_pairs.to_string(),
            report.pairs_tested.to_string(),
            report.counterexamples.len().to_string(),
            passed.to_string(),
        ];
        out.push(&report, row, passed);
    }
    Ok(out)
}

fn count(ctx: &Ctx, a: &CountArgs) -> CmdResult {
    if a.k == 0 {
        return Err(Error::InvalidInput("k must be at least 1".into()));
    }
    let prob = counting::conjecture_problem(a.p, a.b, a.c, a.k)?;
    let mut report = match a.method {
        Method::Auto => counting::count_exact(&prob, a.work_limit)?,
        Method::Brute => {
            let start = Instant::now();
            let count = counting::count_brute(&prob, a.work_limit)?;
            counting::CountReport {
                prime: prob.prime,
                exponent: prob.exponent,
                polynomial: prob.polynomial_string(),
                domains: prob.domains.clone(),
                count,
                predicted: None,
                method: counting::CountMethod::BruteForce,
                elapsed_ms: start.elapsed().as_millis(),
            }
        }
        Method::Hensel => {
            let cert = counting::hensel_certificate(&prob)?;
            counting::hensel_count(&prob, &cert)?
        }
    };
    let pu = a.p as u128;
    let predicted = a.p % 6 == 5
        && a.b.rem_euclid(a.p as i64) != 0
        && a.c.rem_euclid(a.p as i64) != 0
        && counting::is_irreducible_cubic(a.b, a.c, a.p)?;
    if predicted {
        report.predicted = Some(Prediction {
            value: ctx.perturb((pu * pu - 1) * pu.pow(2 * (a.k - 1))),
            formula: "(p^2-1)p^(2(k-1))".into(),
        });
    }
    ctx.progress(format!("count {} mod {}^{} in {} ms", report.count, a.p, a.k, report.elapsed_ms));
    let passed = report.matches_prediction();
    let config = json!({"p": a.p, "b": a.b, "c": a.c, "k": a.k, "method": format!("{:?}", a.method).to_lowercase(), "work_limit": a.work_limit.to_string()});
    let mut out = Outcome::new("count", config, &["prime", "b", "c", "k", "count", "predicted", "method", "passed"]);
    let row = vec![
        a.p.to_string(),
        a.b.to_string(),
        a.c.to_string(),
        a.k.to_string(),
        report.count.to_string(),
        report.predicted.as_ref().map(|p| p.value.to_string()).unwrap_or_default(),
        format!("{:?}", report.method),
        passed.to_string(),
    ];
    out.push(&report, row, passed);
    Ok(out)
}

fn psi1(ctx: &Ctx, a: &Psi1Args) -> CmdResult {
    if a.k == 0 {
        return Err(Error::InvalidInput("k must be at least 1".into()));
    }
    let bs: Vec<i64> = match a.b {
        Some(b) => vec![b],
        None => (1..a.p as i64).collect(),
    };
    let config = json!({"p": a.p, "b": a.b, "k": a.k});
    let mut out = Outcome::new("psi1", config, &["prime", "b", "k", "count", "predicted", "passed"]);
    for b in bs {
        let mut report = counting::psi1_count(b, a.p, a.k)?;
        if let Some(pred) = report.predicted.as_mut() {
            pred.value = ctx.perturb(pred.value);
        }
        let passed = report.matches_prediction();
        let row = vec![
            a.p.to_string(),
            b.to_string(),
            a.k.to_string(),
            report.count.to_string(),
            report.predicted.as_ref().map(|p| p.value.to_string()).unwrap_or_default(),
            passed.to_string(),
        ];
        out.push(&report, row, passed);
    }
    ctx.progress(format!("psi1: {} values of b", out.rows.len()));
    Ok(out)
}

fn eval_case(ctx: &Ctx, a: &EvalCaseArgs) -> CmdResult {
    let case: CaseId = a.case.parse()?;
    let params = LocalParams::new(a.p, a.b, a.c)?;
    let mode = if a.counted { Case11Mode::Counted } else { Case11Mode::AssumeConjecture };
    let cfg = a.s.map(|s| NumericConfig::new(s, a.depth, a.vmin));
    let mut result = integrals::evaluate_case(case, &params, mode, cfg.as_ref())?;
    let mut passed = true;
    if let (Some(cfg), Some(num)) = (cfg.as_ref(), result.numeric.as_ref()) {
        let exact = result.closed_form.eval(cfg.s)? + if ctx.inject { 1.0 } else { 0.0 };
        let err = integrals::relative_error(num_complex_of(num.value_re, num.value_im), exact);
        result.agreement = Some(err);
        passed = err < a.tol;
        if result.closed_form.is_zero() && !ctx.inject {
            passed &= num.certified_zero;
        }
        ctx.progress(format!("case {case}: numeric {:e}, relative error {err:e}", num.value_re));
    }
    let config = json!({
        "case": case.to_string(), "p": a.p, "b": a.b, "c": a.c, "s": a.s,
        "depth": a.depth, "vmin": a.vmin, "tol": a.tol, "counted": a.counted,
    });
    let mut out = Outcome::new(
        "eval-case",
        config,
        &["case", "prime", "b", "c", "closed_form", "numeric", "agreement", "certified_zero", "passed"],
    );
    let row = vec![
        case.to_string(),
        a.p.to_string(),
        a.b.to_string(),
        a.c.to_string(),
        result.closed_form_string.clone(),
        result.numeric.as_ref().map(|n| format!("{:e}", n.value_re)).unwrap_or_default(),
        result.agreement.map(|e| format!("{e:e}")).unwrap_or_default(),
        result.numeric.as_ref().map(|n| n.certified_zero.to_string()).unwrap_or_default(),
        passed.to_string(),
    ];
    out.push(&result, row, passed);
    Ok(out)
}

fn num_complex_of(re: f64, im: f64) -> num_complex::Complex64 {
    num_complex::Complex64::new(re, im)
}

fn verify_theorem(ctx: &Ctx, a: &VerifyTheoremArgs) -> CmdResult {
    if a.p.is_empty() {
        return Err(Error::InvalidInput("give at least one prime with --p".into()));
    }
    let mode = if a.counted { Case11Mode::Counted } else { Case11Mode::AssumeConjecture };
    let config = json!({"p": a.p, "b": a.b, "c": a.c, "pairs": a.pairs, "counted": a.counted});
    let mut out = Outcome::new(
        "verify-theorem",
        config,
        &[
            "prime",
            "b",
            "c",
            "i_plus",
            "i_minus",
            "total",
            "target",
            "holds",
            "matches_reference",
            "conjecture_assumed",
        ],
    );
    for &p in &a.p {
        let pairs: Vec<(i64, i64)> = match (a.b, a.c) {
            (Some(b), Some(c)) => vec![(b, c)],
            _ => {
                LocalParams::new(p, 1, 1)?;
                counting::irreducible_unit_pairs(p)?.into_iter().take(a.pairs).collect()
            }
        };
        for (b, c) in pairs {
            let params = LocalParams::new(p, b, c)?;
            let mut report = integrals::theorem_check(&params, mode)?;
            if ctx.inject {
                let agg = integrals::aggregate(&params, mode)?;
                let wrong = integrals::theorem_target(p).add(&g2zeta_core::symval::ZetaExpr::one(p));
                report.target = wrong.to_string();
                report.holds = agg.total.equals(&wrong);
            }
            ctx.progress(format!("p = {p}, (b, c) = ({b}, {c}): total = {}", report.total));
            let passed = report.passed();
            let row = vec![
                p.to_string(),
                b.to_string(),
                c.to_string(),
                report.i_plus.clone(),
                report.i_minus.clone(),
                report.total.clone(),
                report.target.clone(),
                report.holds.to_string(),
                report.matches_reference.to_string(),
                report.conjecture_assumed.to_string(),
            ];
            out.push(&report, row, passed);
        }
    }
    Ok(out)
}

fn parse_rational(s: &str) -> Result<BigRational, Error> {
    let s = s.trim();
    let bad = || Error::InvalidInput(format!("'{s}' is not a rational number"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: i64 = n.trim().parse().map_err(|_| bad())?;
            let d: i64 = d.trim().parse().map_err(|_| bad())?;
            if d == 0 {
                return Err(bad());
            }
            Ok(padic::rat(n, d))
        }
        None => Ok(padic::int(s.parse().map_err(|_| bad())?)),
    }
}

fn classify_orbit(ctx: &Ctx, a: &ClassifyArgs) -> CmdResult {
    let parts: Vec<BigRational> = a.sigma.split(',').map(parse_rational).collect::<Result<_, _>>()?;
    let sigma: Quadruple =
        parts.try_into().map_err(|_| Error::InvalidInput("sigma needs exactly four entries".into()))?;
    let label = g2::orbit_classify(&sigma, a.p)?;
    let mut passed = match a.expect {
        Some(k) => label.kind == OrbitKind::from(k),
        None => true,
    };
    passed &= !ctx.inject;
    let config = json!({"sigma": a.sigma, "p": a.p, "expect": a.expect.map(|k| format!("{k:?}"))});
    let mut out = Outcome::new(
        "classify-orbit",
        config,
        &["sigma", "prime", "kind", "discriminant_valuation", "degenerate", "passed"],
    );
    let row = vec![
        a.sigma.clone(),
        a.p.to_string(),
        serde_json::to_value(label.kind).unwrap().as_str().unwrap_or_default().to_string(),
        label.discriminant_valuation.map(|v| v.to_string()).unwrap_or_else(|| "inf".into()),
        label.degenerate.to_string(),
        passed.to_string(),
    ];
    out.push(&label, row, passed);
    Ok(out)
}

fn verify_identities(ctx: &Ctx, a: &IdentityArgs) -> CmdResult {
    if a.trials == 0 {
        return Err(Error::InvalidInput("trials must be positive".into()));
    }
    let report = g2::verify_identities(a.seed, a.trials);
    let config = json!({"seed": a.seed, "trials": a.trials});
    let mut out = Outcome::new("verify-identities", config, &["identity", "trials", "failures", "passed"]);
    for r in &report.results {
        let failures = r.failures + usize::from(ctx.inject);
        let passed = failures == 0;
        ctx.progress(format!("{}: {}/{} failures", r.name, failures, r.trials));
        let row = vec![r.name.clone(), r.trials.to_string(), failures.to_string(), passed.to_string()];
        out.push(r, row, passed);
    }
    Ok(out)
}
