//! Command-line front end: approximant systems, determinant identities,
//! the independence criterion, series evaluation, and the numeric checks,
//! with deterministic machine-readable reports.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use lerch_pade::bigfloat::{BigFloat, DEFAULT_PRECISION_BITS};
use lerch_pade::criterion::{
    compute_measure, compute_v, threshold_table_csv, CriterionInput, CriterionReport, Verdict,
};
use lerch_pade::determinant::{chain_check, delta_det, det_m_pair, hermite_det_pair};
use lerch_pade::numeric::{
    bruteforce_linear_form_min, eval_lerch, eval_periodic, remainder_bound_check, PeriodicSpec,
};
use lerch_pade::operators::ShiftParam;
use lerch_pade::pade::{verify_order, Instance, OrderReport, PadeSystem};
use lerch_pade::poly::{Poly, Var};
use lerch_pade::rat::Rat;
use lerch_pade::Error;

const PRECISION_ENV: &str = "LERCH_PADE_PRECISION_BITS";

#[derive(Debug, Parser)]
#[command(
    name = "lerch-pade",
    about = "Exact simultaneous approximants, determinant identities, and an \
             effective linear-independence criterion for polylogarithm-type series"
)]
struct Cli {
    #[command(subcommand)]
    command: Group,
}

#[derive(Debug, Subcommand)]
enum Group {
    /// Build or verify an approximant system.
    #[command(subcommand)]
    Pade(PadeCmd),
    /// Determinant identities.
    #[command(subcommand)]
    Det(DetCmd),
    /// Independence criterion, measure, and threshold tables.
    #[command(subcommand)]
    Criterion(CriterionCmd),
    /// Rigorous series evaluation.
    #[command(subcommand)]
    Eval(EvalCmd),
    /// Numeric verification against the proved bounds.
    #[command(subcommand)]
    Check(CheckCmd),
}

#[derive(Debug, Subcommand)]
enum PadeCmd {
    /// Build every approximant and remainder prefix of an instance.
    Build(PadeBuildArgs),
    /// Verify exact degrees and remainder vanishing orders.
    Verify(InstanceRun),
}

#[derive(Debug, Subcommand)]
enum DetCmd {
    /// Constant value of the system determinant.
    Delta(InstanceRun),
    /// Factorization chain linking the determinant to the cell table.
    Chain(InstanceRun),
    /// Generalized Vandermonde determinant, direct versus closed form.
    Hermite(NodesRun),
    /// Shifted-factorial determinant pair, direct versus closed form.
    MPair(MPairArgs),
}

#[derive(Debug, Subcommand)]
enum CriterionCmd {
    /// Evaluate the independence criterion value V.
    Eval(CriterionArgs),
    /// Derive the measure exponent and constant for a slack epsilon.
    Measure(MeasureArgs),
    /// Threshold table over the two-parameter family grid.
    Tables(TablesArgs),
}

#[derive(Debug, Subcommand)]
enum EvalCmd {
    /// Evaluate the depth-s series at a rational point.
    Lerch(LerchArgs),
    /// Evaluate a periodic-coefficient variant through partial fractions.
    Periodic(PeriodicArgs),
}

#[derive(Debug, Subcommand)]
enum CheckCmd {
    /// Certify every remainder of an instance below its norm bound.
    RemainderBound(RemainderArgs),
    /// Exhaustive small-height search against the measure bound.
    LinearForm(LinearFormArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Args)]
struct CommonArgs {
    /// Working precision in bits (default 128, or LERCH_PADE_PRECISION_BITS).
    #[arg(long)]
    precision: Option<u32>,
    /// Write the report here instead of stdout; a one-line summary
    /// goes to stdout.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Report format (default text).
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Plain key=value file supplying any omitted flag; flags win.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct InstanceArgs {
    /// Number of alpha points; cross-checked against --alphas.
    #[arg(long)]
    m: Option<usize>,
    /// Comma-separated nonzero rationals, e.g. "1,1/2".
    #[arg(long, allow_hyphen_values = true)]
    alphas: Option<String>,
    /// Comma-separated shift:multiplicity pairs, e.g. "0:1,1/2:2".
    #[arg(long)]
    shifts: Option<String>,
    /// Approximation degree parameter.
    #[arg(long)]
    n: Option<usize>,
}

#[derive(Debug, Args)]
struct InstanceRun {
    #[command(flatten)]
    instance: InstanceArgs,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Debug, Args)]
struct PadeBuildArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    /// Remainder prefix length (default n + rho*m + 4).
    #[arg(long)]
    terms: Option<usize>,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Debug, Args)]
struct NodesRun {
    /// Comma-separated node:multiplicity pairs, e.g. "0:1,1/2:2".
    #[arg(long)]
    shifts: Option<String>,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Debug, Args)]
struct MPairArgs {
    /// Comma-separated node:multiplicity pairs, e.g. "0:1,1/2:2".
    #[arg(long)]
    shifts: Option<String>,
    /// Degree parameter of the factorial entries.
    #[arg(long)]
    n: Option<usize>,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Debug, Args)]
struct CriterionArgs {
    /// Number of alpha points; cross-checked against --alphas.
    #[arg(long)]
    m: Option<usize>,
    /// Comma-separated nonzero rationals, e.g. "1,1/2".
    #[arg(long, allow_hyphen_values = true)]
    alphas: Option<String>,
    /// Comma-separated shift:multiplicity pairs, e.g. "0:1,1/2:2".
    #[arg(long)]
    shifts: Option<String>,
    /// Evaluation point, |beta| above the sup norm of the alphas.
    #[arg(long, allow_hyphen_values = true)]
    beta: Option<String>,
    /// Experimental: read the size conditions at this finite place.
    #[arg(long)]
    place_prime: Option<u64>,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Debug, Args)]
struct MeasureArgs {
    #[command(flatten)]
    criterion: CriterionArgs,
    /// Slack subtracted from V, a positive rational below it.
    #[arg(long, allow_hyphen_values = true)]
    epsilon: Option<String>,
}

#[derive(Debug, Args)]
struct TablesArgs {
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Debug, Args)]
struct LerchArgs {
    /// Shift parameter, any rational except negative integers.
    #[arg(long, allow_hyphen_values = true)]
    x: Option<String>,
    /// Depth (series exponent).
    #[arg(long)]
    s: Option<usize>,
    /// Evaluation point with |z| below 1.
    #[arg(long, allow_hyphen_values = true)]
    z: Option<String>,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Debug, Args)]
struct PeriodicArgs {
    /// Denominator coefficients ascending, e.g. "-1,0,1" for z^2 - 1.
    #[arg(long, allow_hyphen_values = true)]
    b: Option<String>,
    /// Numerator coefficients ascending, degree below the denominator.
    #[arg(long, allow_hyphen_values = true)]
    w: Option<String>,
    /// Shift parameter, any rational except negative integers.
    #[arg(long, allow_hyphen_values = true)]
    x: Option<String>,
    /// Depth (series exponent).
    #[arg(long)]
    s: Option<usize>,
    /// Evaluation point, |z| above every root of the denominator.
    #[arg(long, allow_hyphen_values = true)]
    z: Option<String>,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Debug, Args)]
struct RemainderArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    /// Evaluation point, |beta| above the sup norm of the alphas.
    #[arg(long, allow_hyphen_values = true)]
    beta: Option<String>,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Debug, Args)]
struct LinearFormArgs {
    /// Number of alpha points; cross-checked against --alphas.
    #[arg(long)]
    m: Option<usize>,
    /// Comma-separated nonzero rationals, e.g. "1,1/2".
    #[arg(long, allow_hyphen_values = true)]
    alphas: Option<String>,
    /// Comma-separated shift:multiplicity pairs, e.g. "0:1,1/2:2".
    #[arg(long)]
    shifts: Option<String>,
    /// Evaluation point, |beta| above the sup norm of the alphas.
    #[arg(long, allow_hyphen_values = true)]
    beta: Option<String>,
    /// Largest coordinate magnitude searched (default 10, at most 50).
    #[arg(long)]
    height_cap: Option<u32>,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Debug)]
enum CliError {
    Lib(Error),
    Io(String),
}

impl From<Error> for CliError {
    fn from(err: Error) -> Self {
        CliError::Lib(err)
    }
}

impl CliError {
    fn kind(&self) -> &'static str {
        match self {
            CliError::Lib(Error::RatParse { .. }) => "rat-parse",
            CliError::Lib(Error::ShiftAtPole { .. }) => "shift-at-pole",
            CliError::Lib(Error::InvalidInstance { .. }) => "invalid-instance",
            CliError::Lib(Error::InvalidArgument { .. }) => "invalid-argument",
            CliError::Lib(Error::DivisionByZero { .. }) => "division-by-zero",
            CliError::Lib(Error::GuardExceeded { .. }) => "guard-exceeded",
            CliError::Lib(Error::VerificationFailed { .. }) => "verification-failed",
            CliError::Lib(Error::Undecidable { .. }) => "undecidable",
            CliError::Io(_) => "io",
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Lib(err) => err.to_string(),
            CliError::Io(message) => message.clone(),
        }
    }

    /// 1 for a failed verification, 2 for anything wrong with the input
    /// or the run itself.
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Lib(Error::VerificationFailed { .. }) => 1,
            _ => 2,
        }
    }
}

type CliResult<T> = Result<T, CliError>;

fn invalid(reason: String) -> CliError {
    CliError::Lib(Error::InvalidArgument {
        operation: "cli",
        reason,
    })
}

fn missing(key: &str) -> CliError {
    invalid(format!("missing required parameter --{key} (flag or config)"))
}

const KNOWN_KEYS: [&str; 17] = [
    "m",
    "alphas",
    "shifts",
    "n",
    "beta",
    "precision",
    "output",
    "format",
    "epsilon",
    "place-prime",
    "height-cap",
    "terms",
    "x",
    "s",
    "z",
    "b",
    "w",
];

fn load_config(path: &Path) -> CliResult<BTreeMap<String, String>> {
    let text = fs::read_to_string(path)
        .map_err(|err| CliError::Io(format!("reading {}: {err}", path.display())))?;
    let mut map = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            invalid(format!(
                "{}:{}: expected key=value, got `{line}`",
                path.display(),
                idx + 1
            ))
        })?;
        let key = key.trim();
        if !KNOWN_KEYS.contains(&key) {
            return Err(invalid(format!(
                "{}:{}: unknown key `{key}`",
                path.display(),
                idx + 1
            )));
        }
        if map.insert(key.to_string(), value.trim().to_string()).is_some() {
            return Err(invalid(format!(
                "{}:{}: duplicate key `{key}`",
                path.display(),
                idx + 1
            )));
        }
    }
    Ok(map)
}

/// Flag values merged over the config file, with precision falling back to
/// the environment and then the built-in default.
struct Ctx {
    cfg: BTreeMap<String, String>,
    format: Format,
    precision: u32,
    output: Option<PathBuf>,
}

fn parse_num<T: FromStr>(raw: &str, key: &str) -> CliResult<T> {
    raw.trim()
        .parse()
        .map_err(|_| invalid(format!("`{raw}` is not a valid value for {key}")))
}

impl Ctx {
    fn new(common: &CommonArgs) -> CliResult<Self> {
        let cfg = match &common.config {
            Some(path) => load_config(path)?,
            None => BTreeMap::new(),
        };
        let precision = match common.precision {
            Some(bits) => bits,
            None => match cfg.get("precision") {
                Some(raw) => parse_num(raw, "precision")?,
                None => match std::env::var(PRECISION_ENV) {
                    Ok(raw) => parse_num(&raw, PRECISION_ENV)?,
                    Err(_) => DEFAULT_PRECISION_BITS,
                },
            },
        };
        if !(8..=65536).contains(&precision) {
            return Err(invalid(format!(
                "precision {precision} outside 8..=65536 bits"
            )));
        }
        let format = match common.format {
            Some(fmt) => fmt,
            None => match cfg.get("format") {
                Some(raw) => match raw.as_str() {
                    "json" => Format::Json,
                    "csv" => Format::Csv,
                    "text" => Format::Text,
                    other => {
                        return Err(invalid(format!(
                            "`{other}` is not a format (json, csv, text)"
                        )))
                    }
                },
                None => Format::Text,
            },
        };
        let output = common
            .output
            .clone()
            .or_else(|| cfg.get("output").map(PathBuf::from));
        Ok(Ctx {
            cfg,
            format,
            precision,
            output,
        })
    }

    fn string(&self, flag: &Option<String>, key: &str) -> CliResult<String> {
        flag.clone()
            .or_else(|| self.cfg.get(key).cloned())
            .ok_or_else(|| missing(key))
    }

    fn num_opt<T: FromStr>(&self, flag: Option<T>, key: &str) -> CliResult<Option<T>> {
        match flag {
            Some(value) => Ok(Some(value)),
            None => self.cfg.get(key).map(|raw| parse_num(raw, key)).transpose(),
        }
    }

    fn num<T: FromStr>(&self, flag: Option<T>, key: &str) -> CliResult<T> {
        self.num_opt(flag, key)?.ok_or_else(|| missing(key))
    }

    fn rat(&self, flag: &Option<String>, key: &str) -> CliResult<Rat> {
        Ok(Rat::from_str(self.string(flag, key)?.trim())?)
    }

    fn instance(&self, args: &InstanceArgs) -> CliResult<Instance> {
        let alphas = parse_rat_list(&self.string(&args.alphas, "alphas")?)?;
        self.check_m(args.m, alphas.len())?;
        let shifts = parse_shift_list(&self.string(&args.shifts, "shifts")?)?;
        let n = self.num(args.n, "n")?;
        Ok(Instance::new(alphas, shifts, n)?)
    }

    fn check_m(&self, flag: Option<usize>, actual: usize) -> CliResult<()> {
        if let Some(m) = self.num_opt(flag, "m")? {
            if m != actual {
                return Err(invalid(format!("--m = {m} but {actual} alphas given")));
            }
        }
        Ok(())
    }
}

fn parse_rat_list(raw: &str) -> CliResult<Vec<Rat>> {
    raw.split(',')
        .map(|item| Ok(Rat::from_str(item.trim())?))
        .collect()
}

fn parse_node_list(raw: &str) -> CliResult<Vec<(Rat, usize)>> {
    raw.split(',')
        .map(|item| {
            let item = item.trim();
            let (x_raw, r_raw) = item
                .rsplit_once(':')
                .ok_or_else(|| invalid(format!("`{item}` is not of the form x:r")))?;
            let x = Rat::from_str(x_raw.trim())?;
            let r: usize = r_raw
                .trim()
                .parse()
                .map_err(|_| invalid(format!("multiplicity `{r_raw}` is not an integer")))?;
            Ok((x, r))
        })
        .collect()
}

fn parse_shift_list(raw: &str) -> CliResult<Vec<(ShiftParam, usize)>> {
    parse_node_list(raw)?
        .into_iter()
        .map(|(x, r)| Ok((ShiftParam::new(x)?, r)))
        .collect()
}

struct Outcome {
    body: String,
    summary: String,
}

fn finish(ctx: &Ctx, outcome: Outcome) -> CliResult<()> {
    match &ctx.output {
        Some(path) => {
            fs::write(path, &outcome.body)
                .map_err(|err| CliError::Io(format!("writing {}: {err}", path.display())))?;
            println!("{}", outcome.summary);
        }
        None => print!("{}", outcome.body),
    }
    Ok(())
}

fn json_body<T: Serialize>(report: &T) -> CliResult<String> {
    let mut body = serde_json::to_string_pretty(report)
        .map_err(|err| CliError::Io(format!("serializing report: {err}")))?;
    body.push('\n');
    Ok(body)
}

fn no_csv(command: &str) -> CliError {
    invalid(format!("csv format is not available for {command}"))
}

fn bf_text(value: &BigFloat) -> String {
    format!("{} (error <= {})", value.decimal(24), value.error_decimal(24))
}

fn rat_list(values: &[Rat]) -> String {
    let items: Vec<String> = values.iter().map(ToString::to_string).collect();
    format!("[{}]", items.join(", "))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            let diagnostic = serde_json::json!({
                "error": { "kind": err.kind(), "message": err.message() }
            });
            eprintln!("{diagnostic}");
            ExitCode::from(err.exit_code())
        }
    }
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Group::Pade(PadeCmd::Build(args)) => pade_build(args),
        Group::Pade(PadeCmd::Verify(args)) => pade_verify(args),
        Group::Det(DetCmd::Delta(args)) => det_delta(args),
        Group::Det(DetCmd::Chain(args)) => det_chain(args),
        Group::Det(DetCmd::Hermite(args)) => det_hermite(args),
        Group::Det(DetCmd::MPair(args)) => det_m_pair_cmd(args),
        Group::Criterion(CriterionCmd::Eval(args)) => criterion_eval(args),
        Group::Criterion(CriterionCmd::Measure(args)) => criterion_measure(args),
        Group::Criterion(CriterionCmd::Tables(args)) => criterion_tables(args),
        Group::Eval(EvalCmd::Lerch(args)) => eval_lerch_cmd(args),
        Group::Eval(EvalCmd::Periodic(args)) => eval_periodic_cmd(args),
        Group::Check(CheckCmd::RemainderBound(args)) => check_remainder_bound(args),
        Group::Check(CheckCmd::LinearForm(args)) => check_linear_form(args),
    }
}

fn pade_build(args: PadeBuildArgs) -> CliResult<()> {
    let ctx = Ctx::new(&args.common)?;
    let inst = ctx.instance(&args.instance)?;
    let system = match ctx.num_opt(args.terms, "terms")? {
        Some(terms) => PadeSystem::build_with_terms(&inst, terms)?,
        None => PadeSystem::build(&inst)?,
    };
    let body = match ctx.format {
        Format::Json => json_body(&system)?,
        Format::Csv => return Err(no_csv("pade build")),
        Format::Text => {
            let mut out = String::new();
            let inst = &system.instance;
            writeln!(
                out,
                "m = {}, d = {}, rho = {}, n = {}",
                inst.m(),
                inst.d(),
                inst.rho(),
                inst.n()
            )
            .unwrap();
            for (l, p) in system.p.iter().enumerate() {
                writeln!(out, "P[{l}] = {p}").unwrap();
                for (c, cell) in system.cells.iter().enumerate() {
                    writeln!(
                        out,
                        "  cell ({}, {}, {}): P = {}, R = {}",
                        cell.i, cell.j, cell.s, system.p_cells[l][c], system.remainders[l][c]
                    )
                    .unwrap();
                }
            }
            out
        }
    };
    finish(
        &ctx,
        Outcome {
            body,
            summary: format!(
                "built {} approximants over {} cells",
                system.p.len(),
                system.cells.len()
            ),
        },
    )
}

fn order_summary(inst: &Instance, report: &OrderReport) -> String {
    format!(
        "pass: degrees exact, all {} remainders vanish through z^-{} (ord >= {})",
        report.required_vanishing / inst.n().max(1),
        inst.n(),
        inst.n() + 1
    )
}

fn pade_verify(args: InstanceRun) -> CliResult<()> {
    let ctx = Ctx::new(&args.common)?;
    let inst = ctx.instance(&args.instance)?;
    let report = verify_order(&inst)?;
    let summary = order_summary(&inst, &report);
    let body = match ctx.format {
        Format::Json => json_body(&report)?,
        Format::Csv => return Err(no_csv("pade verify")),
        Format::Text => {
            let mut out = String::new();
            writeln!(out, "{summary}").unwrap();
            writeln!(out, "deg P = {:?}", report.degrees).unwrap();
            let cells: Vec<String> = report
                .cell_max_degrees
                .iter()
                .map(|d| d.map_or_else(|| "-".to_string(), |v| v.to_string()))
                .collect();
            writeln!(out, "max cell degrees = [{}]", cells.join(", ")).unwrap();
            writeln!(
                out,
                "vanishing coefficients checked = {}/{}",
                report.verified_vanishing, report.required_vanishing
            )
            .unwrap();
            out
        }
    };
    finish(&ctx, Outcome { body, summary })
}

#[derive(Serialize)]
struct DeltaReport {
    instance: Instance,
    delta: Rat,
}

fn det_delta(args: InstanceRun) -> CliResult<()> {
    let ctx = Ctx::new(&args.common)?;
    let inst = ctx.instance(&args.instance)?;
    let delta = delta_det(&inst)?;
    let summary = format!("delta = {delta}");
    let body = match ctx.format {
        Format::Json => json_body(&DeltaReport {
            instance: inst,
            delta,
        })?,
        Format::Csv => return Err(no_csv("det delta")),
        Format::Text => format!("{delta}\n"),
    };
    finish(&ctx, Outcome { body, summary })
}

fn det_chain(args: InstanceRun) -> CliResult<()> {
    let ctx = Ctx::new(&args.common)?;
    let inst = ctx.instance(&args.instance)?;
    let report = chain_check(&inst)?;
    if !report.delta_abs_matches || !report.det_u_abs_matches {
        return Err(Error::VerificationFailed {
            check: "determinant chain",
            detail: format!(
                "|delta| = |c det u| held: {}; |det u| = |E det w| held: {}",
                report.delta_abs_matches, report.det_u_abs_matches
            ),
        }
        .into());
    }
    let summary = "pass: |delta| = |c * det u| and |det u| = |E * det w|".to_string();
    let body = match ctx.format {
        Format::Json => json_body(&report)?,
        Format::Csv => return Err(no_csv("det chain")),
        Format::Text => {
            let mut out = String::new();
            writeln!(out, "{summary}").unwrap();
            writeln!(out, "delta = {}", report.delta).unwrap();
            writeln!(out, "c = {}", report.c_leading).unwrap();
            writeln!(out, "det u = {}", report.det_u).unwrap();
            writeln!(out, "E = {}", report.e_factor).unwrap();
            writeln!(out, "det w = {}", report.det_w).unwrap();
            writeln!(
                out,
                "delta sign = {}, det u sign = {}",
                report.delta_sign, report.det_u_sign
            )
            .unwrap();
            out
        }
    };
    finish(&ctx, Outcome { body, summary })
}

fn pair_outcome<T: Serialize>(
    ctx: &Ctx,
    command: &str,
    check: &'static str,
    report: &T,
    direct: &Rat,
    closed: &Rat,
    abs_equal: bool,
    sign: i8,
) -> CliResult<Outcome> {
    if !abs_equal {
        return Err(Error::VerificationFailed {
            check,
            detail: format!("|{direct}| != |{closed}|"),
        }
        .into());
    }
    let summary = format!("pass: |direct| = |closed| (sign {sign})");
    let body = match ctx.format {
        Format::Json => json_body(report)?,
        Format::Csv => return Err(no_csv(command)),
        Format::Text => {
            let mut out = String::new();
            writeln!(out, "{summary}").unwrap();
            writeln!(out, "direct = {direct}").unwrap();
            writeln!(out, "closed = {closed}").unwrap();
            out
        }
    };
    Ok(Outcome { body, summary })
}

fn det_hermite(args: NodesRun) -> CliResult<()> {
    let ctx = Ctx::new(&args.common)?;
    let nodes = parse_node_list(&ctx.string(&args.shifts, "shifts")?)?;
    let (x, r): (Vec<Rat>, Vec<usize>) = nodes.into_iter().unzip();
    let report = hermite_det_pair(&x, &r)?;
    let outcome = pair_outcome(
        &ctx,
        "det hermite",
        "hermite determinant pair",
        &report,
        &report.direct,
        &report.closed,
        report.abs_equal,
        report.sign,
    )?;
    finish(&ctx, outcome)
}

fn det_m_pair_cmd(args: MPairArgs) -> CliResult<()> {
    let ctx = Ctx::new(&args.common)?;
    let nodes = parse_node_list(&ctx.string(&args.shifts, "shifts")?)?;
    let n = ctx.num(args.n, "n")?;
    let report = det_m_pair(&nodes, n)?;
    let outcome = pair_outcome(
        &ctx,
        "det m-pair",
        "shifted-factorial determinant pair",
        &report,
        &report.direct,
        &report.closed,
        report.abs_equal,
        report.sign,
    )?;
    finish(&ctx, outcome)
}

fn criterion_input(ctx: &Ctx, args: &CriterionArgs) -> CliResult<CriterionInput> {
    let alphas = parse_rat_list(&ctx.string(&args.alphas, "alphas")?)?;
    ctx.check_m(args.m, alphas.len())?;
    let shifts = parse_shift_list(&ctx.string(&args.shifts, "shifts")?)?;
    let beta = ctx.rat(&args.beta, "beta")?;
    let input = match ctx.num_opt(args.place_prime, "place-prime")? {
        Some(prime) => {
            CriterionInput::with_finite_place(alphas, shifts, beta, prime, ctx.precision)?
        }
        None => CriterionInput::new(alphas, shifts, beta, ctx.precision)?,
    };
    Ok(input)
}

fn verdict_word(verdict: Verdict) -> &'static str {
    match verdict {
        Verdict::Independent => "independent",
        Verdict::Inconclusive => "inconclusive",
    }
}

fn criterion_text(report: &CriterionReport) -> String {
    let mut out = String::new();
    writeln!(out, "verdict: {}", verdict_word(report.verdict)).unwrap();
    writeln!(out, "v = {}", bf_text(&report.v)).unwrap();
    writeln!(out, "c_local = {}", bf_text(&report.c_local)).unwrap();
    for term in &report.terms {
        writeln!(out, "  {} = {}", term.name, bf_text(&term.value)).unwrap();
    }
    if let Some(measure) = &report.measure {
        writeln!(out, "epsilon = {}", measure.epsilon).unwrap();
        writeln!(out, "a = {}", bf_text(&measure.a_term)).unwrap();
        writeln!(out, "u = {}", bf_text(&measure.u_term)).unwrap();
        writeln!(out, "mu = {}", bf_text(&measure.mu_exponent)).unwrap();
        writeln!(out, "C = {}", bf_text(&measure.c_constant)).unwrap();
        writeln!(out, "log C = {}", bf_text(&measure.log_c_constant)).unwrap();
    }
    out
}

fn criterion_eval(args: CriterionArgs) -> CliResult<()> {
    let ctx = Ctx::new(&args.common)?;
    let input = criterion_input(&ctx, &args)?;
    let report = compute_v(&input)?;
    let summary = format!(
        "verdict: {} (v = {})",
        verdict_word(report.verdict),
        report.v.decimal(12)
    );
    let body = match ctx.format {
        Format::Json => json_body(&report)?,
        Format::Csv => return Err(no_csv("criterion eval")),
        Format::Text => criterion_text(&report),
    };
    finish(&ctx, Outcome { body, summary })
}

fn criterion_measure(args: MeasureArgs) -> CliResult<()> {
    let ctx = Ctx::new(&args.criterion.common)?;
    let input = criterion_input(&ctx, &args.criterion)?;
    let epsilon = ctx.rat(&args.epsilon, "epsilon")?;
    let report = compute_measure(&input, &epsilon)?;
    let measure = report.measure.as_ref().expect("measure part present");
    let summary = format!(
        "mu = {} (v = {}, epsilon = {})",
        measure.mu_exponent.decimal(12),
        report.v.decimal(12),
        measure.epsilon
    );
    let body = match ctx.format {
        Format::Json => json_body(&report)?,
        Format::Csv => return Err(no_csv("criterion measure")),
        Format::Text => criterion_text(&report),
    };
    finish(&ctx, Outcome { body, summary })
}

#[derive(Serialize)]
struct TablesReport {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

fn criterion_tables(args: TablesArgs) -> CliResult<()> {
    let ctx = Ctx::new(&args.common)?;
    let csv = threshold_table_csv(ctx.precision)?;
    let mut lines = csv.lines();
    let header: Vec<String> = lines
        .next()
        .expect("header row")
        .split(',')
        .map(str::to_string)
        .collect();
    let rows: Vec<Vec<String>> = lines
        .map(|line| line.split(',').map(str::to_string).collect())
        .collect();
    let summary = format!("{} rows", rows.len());
    let body = match ctx.format {
        Format::Json => json_body(&TablesReport { header, rows })?,
        Format::Csv | Format::Text => csv,
    };
    finish(&ctx, Outcome { body, summary })
}

#[derive(Serialize)]
struct LerchValueReport {
    x: Rat,
    s: usize,
    z: Rat,
    value: BigFloat,
}

fn eval_lerch_cmd(args: LerchArgs) -> CliResult<()> {
    let ctx = Ctx::new(&args.common)?;
    let x = ctx.rat(&args.x, "x")?;
    let s = ctx.num(args.s, "s")?;
    let z = ctx.rat(&args.z, "z")?;
    let value = eval_lerch(&x, s, &z, ctx.precision)?;
    let summary = format!("Phi_{s}({x}, {z}) = {}", bf_text(&value));
    let body = match ctx.format {
        Format::Json => json_body(&LerchValueReport { x, s, z, value })?,
        Format::Csv => return Err(no_csv("eval lerch")),
        Format::Text => format!("{summary}\n"),
    };
    finish(&ctx, Outcome { body, summary })
}

#[derive(Serialize)]
struct PeriodicValueReport {
    spec: PeriodicSpec,
    x: Rat,
    s: usize,
    z: Rat,
    value: BigFloat,
}

fn eval_periodic_cmd(args: PeriodicArgs) -> CliResult<()> {
    let ctx = Ctx::new(&args.common)?;
    let b = Poly::new(Var::Z, parse_rat_list(&ctx.string(&args.b, "b")?)?);
    let w = Poly::new(Var::Z, parse_rat_list(&ctx.string(&args.w, "w")?)?);
    let spec = PeriodicSpec::new(b, w)?;
    let x = ctx.rat(&args.x, "x")?;
    let s = ctx.num(args.s, "s")?;
    let z = ctx.rat(&args.z, "z")?;
    let value = eval_periodic(&spec, &x, s, &z, ctx.precision)?;
    let summary = format!("f({z}) = {}", bf_text(&value));
    let body = match ctx.format {
        Format::Json => json_body(&PeriodicValueReport {
            spec,
            x,
            s,
            z,
            value,
        })?,
        Format::Csv => return Err(no_csv("eval periodic")),
        Format::Text => {
            let mut out = String::new();
            writeln!(out, "{summary}").unwrap();
            writeln!(out, "roots = {}", rat_list(spec.roots())).unwrap();
            writeln!(out, "gammas = {}", rat_list(spec.gammas())).unwrap();
            out
        }
    };
    finish(&ctx, Outcome { body, summary })
}

fn check_remainder_bound(args: RemainderArgs) -> CliResult<()> {
    let ctx = Ctx::new(&args.common)?;
    let inst = ctx.instance(&args.instance)?;
    let beta = ctx.rat(&args.beta, "beta")?;
    let report = remainder_bound_check(&inst, &beta, ctx.precision)?;
    let summary = format!(
        "pass: {} remainders certified below the bound",
        report.cells.len()
    );
    let body = match ctx.format {
        Format::Json => json_body(&report)?,
        Format::Csv => return Err(no_csv("check remainder-bound")),
        Format::Text => {
            let mut out = String::new();
            writeln!(out, "{summary}").unwrap();
            if let Some(first) = report.cells.first() {
                writeln!(out, "bound = {}", bf_text(&first.bound)).unwrap();
            }
            for cell in &report.cells {
                writeln!(
                    out,
                    "l = {}, cell ({}, {}, {}): log|R| <= {}, prefix terms = {}",
                    cell.l,
                    cell.cell.i,
                    cell.cell.j,
                    cell.cell.s,
                    cell.log_abs_upper.decimal(12),
                    cell.prefix_terms
                )
                .unwrap();
            }
            out
        }
    };
    finish(&ctx, Outcome { body, summary })
}

fn check_linear_form(args: LinearFormArgs) -> CliResult<()> {
    let ctx = Ctx::new(&args.common)?;
    let alphas = parse_rat_list(&ctx.string(&args.alphas, "alphas")?)?;
    ctx.check_m(args.m, alphas.len())?;
    let shifts = parse_shift_list(&ctx.string(&args.shifts, "shifts")?)?;
    let beta = ctx.rat(&args.beta, "beta")?;
    let input = CriterionInput::new(alphas, shifts, beta, ctx.precision)?;
    let cap = self_or_default(ctx.num_opt(args.height_cap, "height-cap")?, 10);
    let report = bruteforce_linear_form_min(&input, cap, ctx.precision)?;
    if let Some(band) = report.bands.iter().find(|band| !band.all_exceed) {
        return Err(Error::VerificationFailed {
            check: "linear form floor",
            detail: format!(
                "height band {} is not certified above the measure bound",
                band.height
            ),
        }
        .into());
    }
    let summary = format!(
        "pass: all {} height bands clear the measure bound (min |L| = {})",
        report.bands.len(),
        report.min_abs.decimal(12)
    );
    let body = match ctx.format {
        Format::Json => json_body(&report)?,
        Format::Csv => return Err(no_csv("check linear-form")),
        Format::Text => {
            let mut out = String::new();
            writeln!(out, "{summary}").unwrap();
            writeln!(out, "total vectors = {}", report.total_vectors).unwrap();
            writeln!(
                out,
                "mu = {}, C = {}",
                report.mu_exponent.decimal(12),
                report.c_constant.decimal(6)
            )
            .unwrap();
            writeln!(
                out,
                "min |L| = {} at lambda = {:?}",
                bf_text(&report.min_abs),
                report.min_lambda
            )
            .unwrap();
            for band in &report.bands {
                writeln!(
                    out,
                    "height {}: {} vectors, min = {}, bound = {}",
                    band.height,
                    band.vectors,
                    band.min_abs.decimal(12),
                    band.bound.decimal(6)
                )
                .unwrap();
            }
            out
        }
    };
    finish(&ctx, Outcome { body, summary })
}

fn self_or_default<T>(value: Option<T>, fallback: T) -> T {
    value.unwrap_or(fallback)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_by_error_class() {
        let verification = CliError::Lib(Error::VerificationFailed {
            check: "x",
            detail: String::new(),
        });
        assert_eq!(verification.exit_code(), 1);
        assert_eq!(verification.kind(), "verification-failed");
        assert_eq!(invalid("bad".into()).exit_code(), 2);
        assert_eq!(CliError::Io("disk".into()).exit_code(), 2);
    }

    #[test]
    fn shift_syntax_round_trip() {
        let shifts = parse_shift_list("0:1, 1/2:2").unwrap();
        assert_eq!(shifts.len(), 2);
        assert_eq!(*shifts[0].0.value(), Rat::zero());
        assert_eq!(shifts[0].1, 1);
        assert_eq!(*shifts[1].0.value(), Rat::frac(1, 2));
        assert_eq!(shifts[1].1, 2);
        assert!(parse_shift_list("1/2").is_err());
        assert!(parse_shift_list("-1:1").is_err());
    }

    #[test]
    fn config_rejects_unknown_and_duplicate_keys() {
        let dir = std::env::temp_dir();
        let path = dir.join("lerch-pade-cli-test-config");
        fs::write(&path, "n = 2\nn = 3\n").unwrap();
        assert!(load_config(&path).is_err());
        fs::write(&path, "bogus = 1\n").unwrap();
        assert!(load_config(&path).is_err());
        fs::write(&path, "# comment\n\nn = 2\nprecision = 64\n").unwrap();
        let map = load_config(&path).unwrap();
        assert_eq!(map.get("n").map(String::as_str), Some("2"));
        assert_eq!(map.get("precision").map(String::as_str), Some("64"));
        fs::remove_file(&path).ok();
    }
}
