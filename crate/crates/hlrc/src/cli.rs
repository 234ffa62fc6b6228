//! Command-line interface. Every verb parses its inputs, calls the library
//! and serializes the result; no coding logic lives here.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use hlrc_core::code::{
    brute_force_min_distance, build_code, ex4_length_finding, ex5_lower_dimension_finding,
    hierarchy_params, min_distance, CodeSpec, EvaluationCode, Finding, Relation,
    DEFAULT_DISTANCE_BUDGET,
};
use hlrc_core::field::{FElem, FieldCtx};
use hlrc_core::geometry::{
    enumerate_surface, verify_family_counts, Family, GeometryError, SurfaceSpec, DEFAULT_MAX_P,
};
use hlrc_core::recovery::{Level, RepairPolicy};
use hlrc_core::sim::{
    build_layout, inject_failures, random_message, simulate_repair, FailureScenario, LayoutPolicy,
    RepairMode, ScenarioKind,
};

use crate::error::{exit, CliError};
use crate::formats::{
    self, append_csv, elem_cell, emit, is_stdout, read_json, to_json, write_csv, CodeJson,
    CountReportJson, GammaCsvRow, MessageJson, ParamsJson, PointCsvRow, RepairReportJson,
    ScenarioConfig, SimSummaryRow, WordJson,
};

/// Overrides the message-count budget of `mindist` (default 10^8).
pub const ENV_ENUM_BUDGET: &str = "HLRC_ENUM_BUDGET";
/// Overrides the largest prime `points` and `verify` will enumerate (default 13).
pub const ENV_MAX_P: &str = "HLRC_MAX_P";

#[derive(Debug, Parser)]
#[command(
    name = "hlrc",
    version,
    about = "Hierarchical locally recoverable codes on Artin-Schreier surfaces y^p - y = f(x, z)"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the hierarchical parameters ((n1, s1, d1), (n2, s2, d2)) and the
    /// full-code n, k and distance bound.
    ///
    /// Lower codes live on the p points over one (x, z): length p, dimension
    /// at most p - rho2 + 1, distance at least rho2. Middle codes live on a
    /// curve z = gamma (or, for ex5, on the planes z = 0 and x = 0): dimension
    /// at most (D + 1)(p - rho2 + 1) and distance at least rho1 rho2, or
    /// min(rho1 rho2, p(rho1 + rho2) - p^2) for ex5. The full-code bound is
    /// (rho1 + rho2 - 3)p + rho1 + rho2 for ex4, the middle bound for ex5, and
    /// min over gamma of #Z_gamma - nu(eta - rho1 + p - rho2) otherwise.
    Params(ParamsArgs),
    /// Enumerate the F_{p^2}-points of a surface in (z, x, y) order.
    ///
    /// Uses additive Hilbert 90: y^p - y = c is solvable iff Tr(c) = 0, and
    /// then has exactly p solutions.
    Points(PointsArgs),
    /// Compare exhaustive point counts with their closed forms and report
    /// published-formula discrepancies.
    ///
    /// ex4: total 2p^4 - 2p^3 + 2p^2 - p; x-support of Z_gamma in {p, 2p - 1}
    /// for gamma != 0, with p^2 - 2p + 1 curves of at least 2p^2 - p points.
    /// ex5: total 2p^3 - p. ex5l with Tr(lambda) != 0: total
    /// p^4 + p^3 - p^2 - p and #Z_gamma = p(p + 1). ex4-shifted with
    /// Tr(lambda) != 0: x-supports in {0, p - 1, 2p} and total in
    /// {(p^2 - p)(p - 1)^2, (p^2 - p)(p - 1)^2 + 2p^2(p - 1)}.
    /// Findings: the ex4 code length (statement 2p^4 - 3p^3 + 2p^2 - p versus
    /// proof line 2p^4 - 3p^3 - 2p - 2) and the ex5 lower-code dimension
    /// (p - rho2 versus p - rho2 + 1). Exits 4 if a count check or a gating
    /// statement formula fails.
    Verify(VerifyArgs),
    /// Build a code and write it as JSON (spec, basis, T, G).
    ///
    /// T is the union of the curves z = gamma over the admissible set Gamma
    /// (all points for ex5); V is spanned by x^i y^j z^k with i <= eta - rho1,
    /// j <= p - rho2, k <= rho3 (for ex5: y^i x^j and y^k z^l with
    /// j, l <= p^2 - rho1).
    Build(BuildArgs),
    /// Encode a message (or a seeded random message) into a codeword.
    Encode(EncodeArgs),
    /// Erase symbols of a codeword, explicitly or by a seeded failure scenario.
    Corrupt(CorruptArgs),
    /// Repair every erased symbol, escalating lower, middle, global.
    ///
    /// Lower interpolates in y from p - rho2 + 1 fiber symbols. Middle
    /// interpolates each column of a curve in y, then each coefficient along
    /// the column axis from D + 1 columns, and tolerates up to rho1 rho2 - 1
    /// erasures in the group. Global solves for the message. Exits 5 if any
    /// position stays unrecovered.
    Recover(RecoverArgs),
    /// Exact minimum distance by enumerating all messages, checked against
    /// the distance bound.
    Mindist(MindistArgs),
    /// Run a storage-repair simulation from a JSON scenario config.
    Simulate(SimulateArgs),
}

fn parse_family(s: &str) -> Result<Family, String> {
    s.parse()
}

fn parse_level(s: &str) -> Result<Level, String> {
    s.parse()
}

fn parse_kind(s: &str) -> Result<ScenarioKind, String> {
    s.parse()
}

fn parse_layout(s: &str) -> Result<LayoutPolicy, String> {
    match s {
        "striped" => Ok(LayoutPolicy::Striped),
        "fiber-packed" | "packed" => Ok(LayoutPolicy::FiberPacked),
        other => Err(format!("unknown layout `{other}`")),
    }
}

fn parse_mode(s: &str) -> Result<RepairMode, String> {
    match s {
        "parallel" => Ok(RepairMode::Parallel),
        "sequential" => Ok(RepairMode::Sequential),
        other => Err(format!("unknown mode `{other}`")),
    }
}

fn mode_name(m: RepairMode) -> &'static str {
    match m {
        RepairMode::Parallel => "parallel",
        RepairMode::Sequential => "sequential",
    }
}

#[derive(Debug, Clone, Args)]
pub struct SurfaceArgs {
    /// ex4, ex4-shifted, ex5 or ex5l
    #[arg(long, value_parser = parse_family, default_value = "ex4")]
    pub family: Family,
    /// Odd prime; the field is F_{p^2}
    #[arg(long)]
    pub p: u32,
    /// Shift for ex4-shifted and ex5l as coefficients "c0,c1"; defaults to
    /// the first element of nonzero trace
    #[arg(long)]
    pub lambda: Option<String>,
}

impl SurfaceArgs {
    fn lambda(&self) -> Result<Option<FElem>, CliError> {
        let Some(text) = &self.lambda else {
            return Ok(None);
        };
        let ctx = FieldCtx::new(self.p, 2).map_err(|e| CliError::Spec(e.to_string()))?;
        let coords = text
            .split(',')
            .map(|c| c.trim().parse::<u32>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| CliError::Usage(format!("--lambda {text}: {e}")))?;
        formats::parse_elem(&ctx, &coords).map(Some)
    }

    fn surface(&self) -> Result<SurfaceSpec, CliError> {
        SurfaceSpec::family(self.family, self.p, self.lambda()?).map_err(geometry_err)
    }
}

fn geometry_err(e: GeometryError) -> CliError {
    match e {
        GeometryError::EnumerationBudgetExceeded { .. } => CliError::Budget(e.to_string()),
        other => CliError::Spec(other.to_string()),
    }
}

#[derive(Debug, Clone, Args)]
pub struct CodeArgs {
    #[command(flatten)]
    pub surface: SurfaceArgs,
    #[arg(long)]
    pub rho1: usize,
    #[arg(long)]
    pub rho2: usize,
    /// x-support threshold (ex5l and --generic); ex5l defaults to
    /// min(p + 1, rho1 + rho2), --generic to p
    #[arg(long)]
    pub eta: Option<usize>,
    /// z-degree bound, required with --generic
    #[arg(long)]
    pub rho3: Option<usize>,
    /// Use the generic fibration construction on the chosen surface
    #[arg(long)]
    pub generic: bool,
}

impl CodeArgs {
    pub fn spec(&self) -> Result<CodeSpec, CliError> {
        let s = &self.surface;
        let (p, r1, r2) = (s.p, self.rho1, self.rho2);
        if self.generic {
            let rho3 = self
                .rho3
                .ok_or_else(|| CliError::Usage("--generic needs --rho3".into()))?;
            let eta = self.eta.unwrap_or(p as usize);
            return Ok(CodeSpec::generic(s.surface()?, eta, r1, r2, rho3)?);
        }
        if self.rho3.is_some() {
            return Err(CliError::Usage("--rho3 only applies with --generic".into()));
        }
        let no_eta = || match self.eta {
            Some(_) => Err(CliError::Usage(format!("{} fixes eta", s.family))),
            None => Ok(()),
        };
        let spec = match s.family {
            Family::Ex4 => {
                no_eta()?;
                CodeSpec::ex4(p, r1, r2)?
            }
            Family::Ex5 => {
                no_eta()?;
                CodeSpec::ex5(p, r1, r2)?
            }
            Family::Ex5Lambda => {
                let eta = self.eta.unwrap_or((p as usize + 1).min(r1 + r2));
                CodeSpec::ex5_lambda(p, s.lambda()?, eta, r1, r2)?
            }
            other => {
                return Err(CliError::Usage(format!(
                    "{other} has no fixed construction; use --generic"
                )))
            }
        };
        Ok(spec)
    }
}

#[derive(Debug, Args)]
pub struct ParamsArgs {
    #[command(flatten)]
    pub code: CodeArgs,
    /// Print JSON instead of a table
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct PointsArgs {
    #[command(flatten)]
    pub surface: SurfaceArgs,
    /// Largest p to enumerate (env HLRC_MAX_P, default 13)
    #[arg(long)]
    pub max_p: Option<u32>,
    /// Write the point list as JSON ("-" for stdout)
    #[arg(long)]
    pub json: Option<PathBuf>,
    /// Write the point list as CSV
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub surface: SurfaceArgs,
    /// rho1 for the ex5 lower-dimension finding (default p^2)
    #[arg(long)]
    pub rho1: Option<usize>,
    /// rho2 for the ex5 lower-dimension finding
    #[arg(long, default_value_t = 2)]
    pub rho2: usize,
    /// Largest p to enumerate (env HLRC_MAX_P, default 13)
    #[arg(long)]
    pub max_p: Option<u32>,
    /// Write the count report as JSON ("-" for stdout)
    #[arg(long)]
    pub json: Option<PathBuf>,
    /// Write one CSV row per gamma
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BuildArgs {
    #[command(flatten)]
    pub code: CodeArgs,
    /// Output code JSON ("-" for stdout)
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("source").required(true).args(["message", "seed"])))]
pub struct EncodeArgs {
    /// Code JSON written by `build`
    #[arg(long)]
    pub code: PathBuf,
    /// Message JSON {code_ref, message}
    #[arg(long)]
    pub message: Option<PathBuf>,
    /// Draw the message from SplitMix64 with this seed
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output codeword JSON ("-" for stdout)
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("pattern").required(true).args(["erase", "kind"])))]
pub struct CorruptArgs {
    #[arg(long)]
    pub code: PathBuf,
    /// Codeword JSON
    #[arg(long)]
    pub input: PathBuf,
    /// Comma-separated positions to erase
    #[arg(long)]
    pub erase: Option<String>,
    /// random_nodes, random_symbols or targeted_group
    #[arg(long, value_parser = parse_kind, requires_all = ["count", "seed"])]
    pub kind: Option<ScenarioKind>,
    #[arg(long)]
    pub count: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Node count for the layout (default: code length)
    #[arg(long)]
    pub nodes: Option<usize>,
    /// striped or fiber-packed
    #[arg(long, value_parser = parse_layout, default_value = "striped")]
    pub layout: LayoutPolicy,
    /// Output received-word JSON ("-" for stdout)
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct RecoverArgs {
    #[arg(long)]
    pub code: PathBuf,
    /// Received-word JSON with null erasures
    #[arg(long)]
    pub input: PathBuf,
    /// Highest level allowed: lower, middle or global
    #[arg(long, value_parser = parse_level, default_value = "global")]
    pub policy: Level,
    /// parallel or sequential
    #[arg(long, value_parser = parse_mode, default_value = "parallel")]
    pub mode: RepairMode,
    /// Output word JSON; unrecovered positions stay null ("-" for stdout)
    #[arg(long)]
    pub out: PathBuf,
    /// Write the repair report JSON
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct MindistArgs {
    #[command(flatten)]
    pub code: CodeArgs,
    /// Largest number of messages q^k to enumerate (env HLRC_ENUM_BUDGET,
    /// default 10^8)
    #[arg(long)]
    pub budget: Option<u128>,
    /// Also compute the distance of every middle code
    #[arg(long)]
    pub middle: bool,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Scenario config JSON
    #[arg(long)]
    pub config: PathBuf,
    /// parallel or sequential; overrides the config
    #[arg(long, value_parser = parse_mode)]
    pub mode: Option<RepairMode>,
    /// Output report JSON ("-" for stdout)
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Append a CSV summary row
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

fn env_or<T: std::str::FromStr>(var: &str, default: T) -> Result<T, CliError> {
    match std::env::var(var) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("{var}={v} is not a number"))),
        Err(_) => Ok(default),
    }
}

fn max_p(flag: Option<u32>) -> Result<u32, CliError> {
    match flag {
        Some(m) => Ok(m),
        None => env_or(ENV_MAX_P, DEFAULT_MAX_P),
    }
}

fn load_code(path: &Path) -> Result<EvaluationCode, CliError> {
    read_json::<CodeJson>(path)?.to_code()
}

/// Parses `argv` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = write!(out, "{}", e.render());
            return exit::OK;
        }
        Err(e) => {
            let rendered = e.render().to_string();
            eprintln!("{}", rendered.lines().next().unwrap_or("usage error"));
            return exit::USAGE;
        }
    };
    match execute(&cli.command, out) {
        Ok(code) => code,
        // A closed stdout (e.g. piped into `head`) is the reader's choice.
        Err(CliError::Io {
            ref path,
            ref source,
        }) if path == "-" && source.kind() == std::io::ErrorKind::BrokenPipe => exit::OK,
        Err(e) => {
            eprintln!("hlrc: {e}");
            e.exit_code()
        }
    }
}

pub fn execute(cmd: &Command, out: &mut dyn Write) -> Result<i32, CliError> {
    match cmd {
        Command::Params(a) => params(a, out),
        Command::Points(a) => points(a, out),
        Command::Verify(a) => verify(a, out),
        Command::Build(a) => build(a, out),
        Command::Encode(a) => encode(a, out),
        Command::Corrupt(a) => corrupt(a, out),
        Command::Recover(a) => recover(a, out),
        Command::Mindist(a) => mindist(a, out),
        Command::Simulate(a) => simulate(a, out),
    }
}

fn say(out: &mut dyn Write, text: std::fmt::Arguments) -> Result<(), CliError> {
    out.write_fmt(text)
        .and_then(|_| out.write_all(b"\n"))
        .map_err(|e| CliError::io(Path::new("-"), e))
}

macro_rules! say {
    ($out:expr, $($t:tt)*) => { say($out, format_args!($($t)*)) };
}

fn params(a: &ParamsArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let spec = a.code.spec()?;
    let report = hierarchy_params(&spec)?;
    if a.json {
        let code = build_code(&spec)?;
        out.write_all(to_json(&ParamsJson::new(code.describe(), &report)).as_bytes())
            .map_err(|e| CliError::io(Path::new("-"), e))?;
    } else {
        say!(out, "{report}")?;
    }
    Ok(exit::OK)
}

fn points(a: &PointsArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let cap = max_p(a.max_p)?;
    if a.surface.p > cap {
        return Err(CliError::Budget(format!(
            "p = {} exceeds the enumeration cap {cap}",
            a.surface.p
        )));
    }
    let surface = a.surface.surface()?;
    let ctx = &surface.ctx;
    let pts = enumerate_surface(&surface);
    let quiet = [&a.json, &a.csv]
        .into_iter()
        .flatten()
        .any(|p| is_stdout(p));
    if !quiet {
        say!(
            out,
            "{} p={}: {} points",
            surface.family,
            surface.p(),
            pts.len()
        )?;
    }
    if let Some(path) = &a.json {
        #[derive(serde::Serialize)]
        struct PointsJson {
            surface: formats::SurfaceJson,
            count: usize,
            points: Vec<[formats::Elem; 3]>,
        }
        let body = PointsJson {
            surface: formats::SurfaceJson::from_spec(&surface),
            count: pts.len(),
            points: pts
                .iter()
                .map(|p| {
                    [
                        formats::elem(ctx, p.x),
                        formats::elem(ctx, p.y),
                        formats::elem(ctx, p.z),
                    ]
                })
                .collect(),
        };
        emit(path, &to_json(&body), out)?;
    }
    if let Some(path) = &a.csv {
        let rows: Vec<PointCsvRow> = pts
            .iter()
            .enumerate()
            .map(|(index, p)| PointCsvRow {
                index,
                x: elem_cell(ctx, p.x),
                y: elem_cell(ctx, p.y),
                z: elem_cell(ctx, p.z),
            })
            .collect();
        write_csv(path, &rows, out)?;
    }
    Ok(exit::OK)
}

fn claim_text(f: &Finding) -> String {
    f.claims
        .iter()
        .map(|c| {
            let rel = match c.relation {
                Relation::Equal => "=",
                Relation::AtMost => "<=",
            };
            let verdict = if c.holds { "holds" } else { "fails" };
            format!("{} {rel} {} {verdict}", c.source, c.value)
        })
        .collect::<Vec<_>>()
        .join("; ")
}

fn verify(a: &VerifyArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let cap = max_p(a.max_p)?;
    let p = a.surface.p;
    let lambda = a.surface.lambda()?;
    let report = verify_family_counts(a.surface.family, p, lambda, cap).map_err(geometry_err)?;
    let ctx = FieldCtx::new(p, 2).map_err(|e| CliError::Spec(e.to_string()))?;
    let findings = vec![
        ex4_length_finding(p)?,
        ex5_lower_dimension_finding(p, a.rho1.unwrap_or((p * p) as usize), a.rho2)?,
    ];

    let quiet = [&a.json, &a.csv]
        .into_iter()
        .flatten()
        .any(|p| is_stdout(p));
    let mut sink = std::io::sink();
    let text: &mut dyn Write = if quiet { &mut sink } else { &mut *out };
    let formula: Vec<String> = report.total_formula.iter().map(u64::to_string).collect();
    say!(
        text,
        "{} p={}: {} points enumerated, closed form {{{}}}",
        report.family,
        p,
        report.total_enumerated,
        formula.join(", ")
    )?;
    for c in &report.checks {
        let tag = if c.passed { "PASS" } else { "FAIL" };
        say!(
            text,
            "{tag} {}: expected {}, observed {}",
            c.name,
            c.expected,
            c.observed
        )?;
    }
    for f in &findings {
        say!(
            text,
            "finding {}: observed {}; {}",
            f.id,
            f.observed,
            claim_text(f)
        )?;
    }

    if let Some(path) = &a.json {
        emit(
            path,
            &to_json(&CountReportJson::new(&report, &ctx, &findings)),
            out,
        )?;
    }
    if let Some(path) = &a.csv {
        let rows: Vec<GammaCsvRow> = report
            .per_gamma
            .iter()
            .map(|g| GammaCsvRow {
                gamma: elem_cell(&ctx, g.gamma),
                x_support: g.x_support,
                points: g.points,
                degenerate: g.degenerate,
            })
            .collect();
        write_csv(path, &rows, out)?;
    }

    let failed = !report.all_passed() || findings.iter().any(Finding::statement_failed);
    Ok(if failed { exit::MISMATCH } else { exit::OK })
}

fn build(a: &BuildArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let code = build_code(&a.code.spec()?)?;
    emit(&a.out, &to_json(&CodeJson::from_code(&code)), out)?;
    if a.out.as_os_str() != "-" {
        say!(out, "{}", code.describe())?;
    }
    Ok(exit::OK)
}

fn encode(a: &EncodeArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let code = load_code(&a.code)?;
    let message = match (&a.message, a.seed) {
        (Some(path), _) => read_json::<MessageJson>(path)?.to_message(&code)?,
        (None, Some(seed)) => random_message(&code, seed),
        (None, None) => unreachable!("clap requires one source"),
    };
    let word = code.encode(&message)?;
    emit(
        &a.out,
        &to_json(&WordJson::from_codeword(&code, &word)),
        out,
    )?;
    Ok(exit::OK)
}

fn corrupt(a: &CorruptArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let code = load_code(&a.code)?;
    let mut word = read_json::<WordJson>(&a.input)?.to_word(&code)?;
    let positions: Vec<usize> = if let Some(list) = &a.erase {
        let parsed = list
            .split(',')
            .filter(|s| !s.trim().is_empty())
            .map(|s| s.trim().parse::<usize>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| CliError::Usage(format!("--erase {list}: {e}")))?;
        if let Some(&bad) = parsed.iter().find(|&&i| i >= code.len()) {
            return Err(CliError::Spec(format!("position {bad} out of range")));
        }
        parsed
    } else {
        let scenario = FailureScenario {
            kind: a.kind.expect("clap requires a pattern"),
            count: a.count.expect("clap requires count"),
            seed: a.seed.expect("clap requires seed"),
        };
        let layout = build_layout(&code, a.nodes.unwrap_or(code.len()), a.layout)?;
        hlrc_core::sim::erasure_pattern(&layout, &code, &scenario)?
    };
    for &i in &positions {
        word.erase(i);
    }
    emit(&a.out, &to_json(&WordJson::from_word(&code, &word)), out)?;
    if a.out.as_os_str() != "-" {
        say!(
            out,
            "erased {} positions, {} erased in total",
            positions.len(),
            word.erasure_count()
        )?;
    }
    Ok(exit::OK)
}

fn recover(a: &RecoverArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let code = load_code(&a.code)?;
    let received = read_json::<WordJson>(&a.input)?.to_word(&code)?;
    // Every position on its own node: node counts only matter to `simulate`.
    let layout = build_layout(&code, code.len(), LayoutPolicy::Striped)?;
    let policy = RepairPolicy {
        max_level: a.policy,
    };
    let report = simulate_repair(&code, &layout, &received, policy, a.mode)?;
    let mut repaired = received.clone();
    for r in &report.per_position {
        repaired.symbols[r.position] = r.value;
    }
    emit(
        &a.out,
        &to_json(&WordJson::from_word(&code, &repaired)),
        out,
    )?;
    if let Some(path) = &a.report {
        emit(
            path,
            &to_json(&RepairReportJson::new(
                &code,
                &report,
                a.policy,
                mode_name(a.mode),
            )),
            out,
        )?;
    }
    let t = &report.totals;
    let h = t.level_histogram;
    if a.out.as_os_str() != "-" {
        say!(
            out,
            "erased {}, recovered {} (lower {}, middle {}, global {}), unrecoverable {}, symbols read {}",
            t.erased, t.recovered, h[0], h[1], h[2], t.unrecoverable, t.symbols_read
        )?;
    }
    if t.unrecoverable > 0 {
        eprintln!(
            "hlrc: {} positions unrecoverable with policy {}",
            t.unrecoverable, a.policy
        );
        return Ok(exit::RECOVERY);
    }
    Ok(exit::OK)
}

fn mindist(a: &MindistArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let spec = a.code.spec()?;
    let budget = match a.budget {
        Some(b) => b,
        None => env_or(ENV_ENUM_BUDGET, DEFAULT_DISTANCE_BUDGET)?,
    };
    let code = build_code(&spec)?;
    let bounds = hierarchy_params(&spec)?;
    let d = brute_force_min_distance(&code, budget)?;
    let ok = d >= bounds.d_lower;
    say!(
        out,
        "d = {d} (n = {}, k = {}); bound d >= {} {}",
        code.len(),
        code.dimension(),
        bounds.d_lower,
        if ok { "holds" } else { "FAILS" }
    )?;
    let mut middle_ok = true;
    if a.middle {
        let mut d1 = usize::MAX;
        for gid in 0..code.groups().len() {
            let sub = code.generator().select_columns(&code.locality_set(gid));
            d1 = d1.min(min_distance(code.ctx(), &sub, budget)?);
        }
        middle_ok = d1 >= bounds.d1;
        say!(
            out,
            "middle d1 = {d1} over {} groups; bound d1 >= {} {}",
            code.groups().len(),
            bounds.d1,
            if middle_ok { "holds" } else { "FAILS" }
        )?;
    }
    Ok(if ok && middle_ok {
        exit::OK
    } else {
        exit::MISMATCH
    })
}

fn simulate(a: &SimulateArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let cfg: ScenarioConfig = read_json(&a.config)?;
    if cfg.rng != "splitmix64" {
        return Err(CliError::Spec(format!(
            "unsupported rng `{}`; only splitmix64",
            cfg.rng
        )));
    }
    let family = parse_family(&cfg.family).map_err(CliError::Spec)?;
    let lambda = cfg
        .lambda
        .as_ref()
        .map(|c| c.iter().map(u32::to_string).collect::<Vec<_>>().join(","));
    let code_args = CodeArgs {
        surface: SurfaceArgs {
            family,
            p: cfg.p,
            lambda,
        },
        rho1: cfg.rho1,
        rho2: cfg.rho2,
        eta: cfg.eta,
        rho3: None,
        generic: false,
    };
    let code = build_code(&code_args.spec()?)?;
    let policy = parse_level(&cfg.policy).map_err(CliError::Spec)?;
    let kind = parse_kind(&cfg.scenario.kind).map_err(CliError::Spec)?;
    let layout_policy = match &cfg.layout {
        Some(l) => parse_layout(l).map_err(CliError::Spec)?,
        None => LayoutPolicy::Striped,
    };
    let mode = match (a.mode, &cfg.mode) {
        (Some(m), _) => m,
        (None, Some(m)) => parse_mode(m).map_err(CliError::Spec)?,
        (None, None) => RepairMode::Parallel,
    };
    let scenario = FailureScenario {
        kind,
        count: cfg.scenario.count,
        seed: cfg.scenario.seed,
    };

    let layout = build_layout(&code, cfg.nodes, layout_policy)?;
    let codeword = code.encode(&random_message(&code, scenario.seed))?;
    let received = inject_failures(&layout, &code, &scenario, &codeword)?;
    let report = simulate_repair(
        &code,
        &layout,
        &received,
        RepairPolicy { max_level: policy },
        mode,
    )?;
    let wrong = report.mismatches(&codeword);
    if wrong > 0 {
        return Err(CliError::Recovery(format!(
            "{wrong} repaired symbols differ from the original"
        )));
    }

    let json = RepairReportJson::new(&code, &report, policy, mode_name(mode));
    if let Some(path) = &a.out {
        emit(path, &to_json(&json), out)?;
    }
    let t = &report.totals;
    let h = t.level_histogram;
    if let Some(path) = &a.csv {
        append_csv(
            path,
            &SimSummaryRow {
                family: cfg.family.clone(),
                p: cfg.p,
                rho1: cfg.rho1,
                rho2: cfg.rho2,
                nodes: cfg.nodes,
                kind: kind.to_string(),
                count: scenario.count,
                seed: scenario.seed,
                policy: policy.to_string(),
                erased: t.erased,
                recovered: t.recovered,
                unrecoverable: t.unrecoverable,
                symbols_read: t.symbols_read,
                lower: h[0],
                middle: h[1],
                global: h[2],
                nodes_contacted: report.nodes_contacted,
            },
        )?;
    }
    if a.out.as_ref().is_none_or(|p| p.as_os_str() != "-") {
        say!(
            out,
            "{}: erased {}, recovered {} (lower {}, middle {}, global {}), unrecoverable {}, symbols read {}, nodes contacted {}",
            code.describe(),
            t.erased,
            t.recovered,
            h[0],
            h[1],
            h[2],
            t.unrecoverable,
            t.symbols_read,
            report.nodes_contacted
        )?;
    }
    Ok(exit::OK)
}
