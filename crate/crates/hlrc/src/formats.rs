//! JSON and CSV file formats.
//!
//! Field elements are coefficient arrays `[c0, c1, ..]` in the power basis
//! of the field's modulus. Generator matrix entries are the element index
//! `c0 + c1 p + c2 p^2`, which keeps `G` a plain integer matrix.

use std::fs;
use std::io::Write;
use std::path::Path;

use hlrc_core::code::{
    build_code, Claim, CodeSpec, Construction, EvaluationCode, Finding, FindingKind, ParamReport,
    Relation,
};
use hlrc_core::field::{FElem, FieldCtx};
use hlrc_core::geometry::{AffinePoint, BivariatePoly, CountReport, Family, SurfaceSpec, Term};
use hlrc_core::recovery::{Level, ReceivedWord};
use hlrc_core::sim::RepairReport;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub type Elem = Vec<u32>;

pub fn elem(ctx: &FieldCtx, a: FElem) -> Elem {
    ctx.coords(a)
}

pub fn parse_elem(ctx: &FieldCtx, coords: &[u32]) -> Result<FElem, CliError> {
    ctx.from_coords(coords)
        .map_err(|e| CliError::Format(format!("bad field element {coords:?}: {e}")))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldJson {
    pub p: u32,
    pub h: u32,
    pub modulus: Vec<u32>,
}

impl FieldJson {
    pub fn from_ctx(ctx: &FieldCtx) -> Self {
        FieldJson {
            p: ctx.p(),
            h: ctx.h(),
            modulus: ctx.modulus().to_vec(),
        }
    }

    pub fn to_ctx(&self) -> Result<FieldCtx, CliError> {
        let ctx = FieldCtx::new(self.p, self.h).map_err(|e| CliError::Spec(e.to_string()))?;
        if ctx.modulus() != self.modulus.as_slice() {
            return Err(CliError::Format(format!(
                "modulus {:?} is not the canonical {:?}",
                self.modulus,
                ctx.modulus()
            )));
        }
        Ok(ctx)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub x_exp: u32,
    pub z_exp: u32,
    pub coeff: Elem,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceJson {
    pub family: String,
    pub field: FieldJson,
    pub f: Vec<TermJson>,
    pub lambda: Elem,
}

impl SurfaceJson {
    pub fn from_spec(s: &SurfaceSpec) -> Self {
        let ctx = &s.ctx;
        SurfaceJson {
            family: s.family.to_string(),
            field: FieldJson::from_ctx(ctx),
            f: s.f
                .terms()
                .iter()
                .map(|t| TermJson {
                    x_exp: t.x_exp,
                    z_exp: t.z_exp,
                    coeff: elem(ctx, t.coeff),
                })
                .collect(),
            lambda: elem(ctx, s.lambda),
        }
    }

    pub fn to_spec(&self) -> Result<SurfaceSpec, CliError> {
        let ctx = self.field.to_ctx()?;
        let family: Family = self.family.parse().map_err(CliError::Format)?;
        let terms = self
            .f
            .iter()
            .map(|t| {
                Ok(Term {
                    x_exp: t.x_exp,
                    z_exp: t.z_exp,
                    coeff: parse_elem(&ctx, &t.coeff)?,
                })
            })
            .collect::<Result<Vec<_>, CliError>>()?;
        let f = BivariatePoly::new(&ctx, terms);
        let lambda = parse_elem(&ctx, &self.lambda)?;
        SurfaceSpec::from_parts(ctx, family, f, lambda).map_err(|e| CliError::Spec(e.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeSpecJson {
    pub construction: String,
    pub surface: SurfaceJson,
    pub eta: usize,
    pub nu: u32,
    pub rho1: usize,
    pub rho2: usize,
    pub rho3: usize,
    pub gamma: Vec<Elem>,
}

impl CodeSpecJson {
    pub fn from_spec(s: &CodeSpec) -> Self {
        let ctx = &s.surface.ctx;
        CodeSpecJson {
            construction: s.construction.to_string(),
            surface: SurfaceJson::from_spec(&s.surface),
            eta: s.eta,
            nu: s.nu,
            rho1: s.rho1,
            rho2: s.rho2,
            rho3: s.rho3,
            gamma: s.gamma.iter().map(|&g| elem(ctx, g)).collect(),
        }
    }

    /// Rebuilds and revalidates the spec.
    pub fn to_spec(&self) -> Result<CodeSpec, CliError> {
        let surface = self.surface.to_spec()?;
        let construction: Construction = self.construction.parse().map_err(CliError::Format)?;
        let gamma = self
            .gamma
            .iter()
            .map(|g| parse_elem(&surface.ctx, g))
            .collect::<Result<Vec<_>, _>>()?;
        let spec = CodeSpec {
            surface,
            construction,
            eta: self.eta,
            nu: self.nu,
            rho1: self.rho1,
            rho2: self.rho2,
            rho3: self.rho3,
            gamma,
        };
        spec.validate()?;
        Ok(spec)
    }
}

/// A built code. `T` lists points as `[x, y, z]`; `G` is row-major with one
/// row per basis monomial.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeJson {
    pub code_ref: String,
    pub spec: CodeSpecJson,
    pub n: usize,
    pub k: usize,
    pub basis: Vec<[u32; 3]>,
    #[serde(rename = "T")]
    pub points: Vec<[Elem; 3]>,
    #[serde(rename = "G")]
    pub generator: Vec<Vec<u32>>,
}

impl CodeJson {
    pub fn from_code(code: &EvaluationCode) -> Self {
        let ctx = code.ctx();
        let pt = |p: &AffinePoint| [elem(ctx, p.x), elem(ctx, p.y), elem(ctx, p.z)];
        CodeJson {
            code_ref: code.describe(),
            spec: CodeSpecJson::from_spec(code.spec()),
            n: code.len(),
            k: code.message_len(),
            basis: code
                .basis()
                .monomials()
                .iter()
                .map(|&(i, j, k)| [i, j, k])
                .collect(),
            points: code.points().iter().map(pt).collect(),
            generator: code
                .generator()
                .iter_rows()
                .map(|r| r.iter().map(|e| e.index()).collect())
                .collect(),
        }
    }

    /// Rebuilds the code from its spec and checks the stored tables.
    pub fn to_code(&self) -> Result<EvaluationCode, CliError> {
        let code = build_code(&self.spec.to_spec()?)?;
        if CodeJson::from_code(&code) != *self {
            return Err(CliError::Format(
                "stored basis, points or generator differ from the rebuilt code".into(),
            ));
        }
        Ok(code)
    }
}

/// A codeword or received word; erased symbols are `null`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WordJson {
    pub code_ref: String,
    pub symbols: Vec<Option<Elem>>,
}

impl WordJson {
    pub fn from_word(code: &EvaluationCode, word: &ReceivedWord) -> Self {
        WordJson {
            code_ref: code.describe(),
            symbols: word
                .symbols
                .iter()
                .map(|s| s.map(|e| elem(code.ctx(), e)))
                .collect(),
        }
    }

    pub fn from_codeword(code: &EvaluationCode, word: &[FElem]) -> Self {
        Self::from_word(code, &ReceivedWord::from_codeword(word))
    }

    pub fn to_word(&self, code: &EvaluationCode) -> Result<ReceivedWord, CliError> {
        check_ref(code, &self.code_ref)?;
        if self.symbols.len() != code.len() {
            return Err(CliError::Spec(format!(
                "word has {} symbols, code has length {}",
                self.symbols.len(),
                code.len()
            )));
        }
        let symbols = self
            .symbols
            .iter()
            .map(|s| s.as_ref().map(|c| parse_elem(code.ctx(), c)).transpose())
            .collect::<Result<Vec<_>, _>>()?;
        Ok(ReceivedWord::new(symbols))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MessageJson {
    pub code_ref: String,
    pub message: Vec<Elem>,
}

impl MessageJson {
    pub fn to_message(&self, code: &EvaluationCode) -> Result<Vec<FElem>, CliError> {
        check_ref(code, &self.code_ref)?;
        self.message
            .iter()
            .map(|c| parse_elem(code.ctx(), c))
            .collect()
    }
}

fn check_ref(code: &EvaluationCode, found: &str) -> Result<(), CliError> {
    let want = code.describe();
    if found != want {
        return Err(CliError::Spec(format!(
            "file belongs to code `{found}`, not `{want}`"
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamsJson {
    pub code_ref: String,
    pub construction: String,
    pub p: u32,
    pub n: usize,
    pub k: usize,
    pub d_lower: usize,
    pub n1: usize,
    pub s1: usize,
    pub d1: usize,
    pub n2: usize,
    pub s2: usize,
    pub d2: usize,
}

impl ParamsJson {
    pub fn new(code_ref: String, r: &ParamReport) -> Self {
        ParamsJson {
            code_ref,
            construction: r.construction.to_string(),
            p: r.p,
            n: r.n,
            k: r.k,
            d_lower: r.d_lower,
            n1: r.n1,
            s1: r.s1,
            d1: r.d1,
            n2: r.n2,
            s2: r.s2,
            d2: r.d2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GammaRowJson {
    pub gamma: Elem,
    pub x_support: usize,
    pub points: usize,
    pub degenerate: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckJson {
    pub name: String,
    pub expected: String,
    pub observed: String,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClaimJson {
    pub source: String,
    pub relation: String,
    pub value: i64,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FindingJson {
    pub id: String,
    pub kind: String,
    pub description: String,
    pub observed: i64,
    pub claims: Vec<ClaimJson>,
    pub gating: bool,
    pub statement_failed: bool,
}

impl FindingJson {
    pub fn new(f: &Finding) -> Self {
        let claim = |c: &Claim| ClaimJson {
            source: c.source.to_string(),
            relation: match c.relation {
                Relation::Equal => "=".into(),
                Relation::AtMost => "<=".into(),
            },
            value: c.value,
            holds: c.holds,
        };
        FindingJson {
            id: f.id.to_string(),
            kind: match f.kind {
                FindingKind::StatementVersusProof => "statement-vs-proof".into(),
                FindingKind::ConflictingStatements => "conflicting-statements".into(),
            },
            description: f.description.clone(),
            observed: f.observed,
            claims: f.claims.iter().map(claim).collect(),
            gating: f.gating_claim.is_some(),
            statement_failed: f.statement_failed(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountReportJson {
    pub family: String,
    pub p: u32,
    pub lambda: Option<Elem>,
    pub total_enumerated: u64,
    pub total_formula: Vec<u64>,
    pub per_gamma: Vec<GammaRowJson>,
    pub checks: Vec<CheckJson>,
    pub mismatches: Vec<String>,
    pub findings: Vec<FindingJson>,
}

impl CountReportJson {
    pub fn new(r: &CountReport, ctx: &FieldCtx, findings: &[Finding]) -> Self {
        CountReportJson {
            family: r.family.to_string(),
            p: r.p,
            lambda: r.lambda.map(|l| elem(ctx, l)),
            total_enumerated: r.total_enumerated,
            total_formula: r.total_formula.clone(),
            per_gamma: r
                .per_gamma
                .iter()
                .map(|g| GammaRowJson {
                    gamma: elem(ctx, g.gamma),
                    x_support: g.x_support,
                    points: g.points,
                    degenerate: g.degenerate,
                })
                .collect(),
            checks: r
                .checks
                .iter()
                .map(|c| CheckJson {
                    name: c.name.clone(),
                    expected: c.expected.clone(),
                    observed: c.observed.clone(),
                    passed: c.passed,
                })
                .collect(),
            mismatches: r.mismatches().map(|c| c.name.clone()).collect(),
            findings: findings.iter().map(FindingJson::new).collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct LevelCounts {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lower: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub middle: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub global: Option<usize>,
}

impl LevelCounts {
    fn slot(&mut self, level: Level) -> &mut Option<usize> {
        match level {
            Level::Lower => &mut self.lower,
            Level::Middle => &mut self.middle,
            Level::Global => &mut self.global,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepairTraceJson {
    pub position: usize,
    pub value: Option<Elem>,
    pub level: Option<String>,
    pub symbols_read_by_level: LevelCounts,
    pub success: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TotalsJson {
    pub erased: usize,
    pub recovered: usize,
    pub unrecoverable: usize,
    pub symbols_read: usize,
    pub level_histogram: LevelCounts,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepairReportJson {
    pub code_ref: String,
    pub policy: String,
    pub mode: String,
    pub totals: TotalsJson,
    pub nodes_contacted: usize,
    pub per_position: Vec<RepairTraceJson>,
}

impl RepairReportJson {
    pub fn new(code: &EvaluationCode, r: &RepairReport, policy: Level, mode: &str) -> Self {
        let ctx = code.ctx();
        let per_position = r
            .per_position
            .iter()
            .map(|pr| {
                let mut reads = LevelCounts::default();
                for a in &pr.trace.attempts {
                    *reads.slot(a.level) = Some(a.symbols_read);
                }
                RepairTraceJson {
                    position: pr.position,
                    value: pr.value.map(|v| elem(ctx, v)),
                    level: pr.trace.level().map(|l| l.to_string()),
                    symbols_read_by_level: reads,
                    success: pr.trace.success(),
                }
            })
            .collect();
        let h = r.totals.level_histogram;
        RepairReportJson {
            code_ref: code.describe(),
            policy: policy.to_string(),
            mode: mode.to_string(),
            totals: TotalsJson {
                erased: r.totals.erased,
                recovered: r.totals.recovered,
                unrecoverable: r.totals.unrecoverable,
                symbols_read: r.totals.symbols_read,
                level_histogram: LevelCounts {
                    lower: Some(h[0]),
                    middle: Some(h[1]),
                    global: Some(h[2]),
                },
            },
            nodes_contacted: r.nodes_contacted,
            per_position,
        }
    }
}

fn default_policy() -> String {
    "global".into()
}

fn default_rng() -> String {
    "splitmix64".into()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScenarioJson {
    pub kind: String,
    pub count: usize,
    pub seed: u64,
}

/// Simulation input. `eta` and `lambda` only apply to `ex5l`; `layout` is
/// `striped` (default) or `fiber-packed`; `mode` is `parallel` (default) or
/// `sequential`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub family: String,
    pub p: u32,
    pub rho1: usize,
    pub rho2: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<Elem>,
    pub nodes: usize,
    pub scenario: ScenarioJson,
    #[serde(default = "default_policy")]
    pub policy: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub layout: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<String>,
    #[serde(default = "default_rng")]
    pub rng: String,
}

/// One CSV row summarizing a simulation, for batch sweeps.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimSummaryRow {
    pub family: String,
    pub p: u32,
    pub rho1: usize,
    pub rho2: usize,
    pub nodes: usize,
    pub kind: String,
    pub count: usize,
    pub seed: u64,
    pub policy: String,
    pub erased: usize,
    pub recovered: usize,
    pub unrecoverable: usize,
    pub symbols_read: usize,
    pub lower: usize,
    pub middle: usize,
    pub global: usize,
    pub nodes_contacted: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GammaCsvRow {
    pub gamma: String,
    pub x_support: usize,
    pub points: usize,
    pub degenerate: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointCsvRow {
    pub index: usize,
    pub x: String,
    pub y: String,
    pub z: String,
}

/// Coefficients joined by spaces, for CSV cells.
pub fn elem_cell(ctx: &FieldCtx, a: FElem) -> String {
    ctx.coords(a)
        .iter()
        .map(|c| c.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| CliError::Format(format!("{}: {e}", path.display())))
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("formats serialize infallibly");
    s.push('\n');
    s
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    fs::write(path, to_json(value)).map_err(|e| CliError::io(path, e))
}

/// Writes all rows with a header to `path`, or to `out` when `path` is `-`.
pub fn write_csv<T: Serialize>(
    path: &Path,
    rows: &[T],
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let sink: Box<dyn Write + '_> = if is_stdout(path) {
        Box::new(out)
    } else {
        Box::new(fs::File::create(path).map_err(|e| CliError::io(path, e))?)
    };
    let mut w = csv::Writer::from_writer(sink);
    for r in rows {
        w.serialize(r)
            .map_err(|e| CliError::Csv(path.display().to_string(), e))?;
    }
    w.flush().map_err(|e| CliError::io(path, e))
}

/// Appends one row, writing the header only when the file is new or empty.
pub fn append_csv<T: Serialize>(path: &Path, row: &T) -> Result<(), CliError> {
    let fresh = fs::metadata(path).map(|m| m.len() == 0).unwrap_or(true);
    let file = fs::OpenOptions::new()
        .create(true)
        .append(true)
        .open(path)
        .map_err(|e| CliError::io(path, e))?;
    let mut w = csv::WriterBuilder::new()
        .has_headers(fresh)
        .from_writer(file);
    w.serialize(row)
        .map_err(|e| CliError::Csv(path.display().to_string(), e))?;
    w.flush().map_err(|e| CliError::io(path, e))
}

pub fn is_stdout(path: &Path) -> bool {
    path.as_os_str() == "-"
}

/// Writes to `path`, or to `out` when `path` is `-`.
pub fn emit(path: &Path, text: &str, out: &mut dyn Write) -> Result<(), CliError> {
    if is_stdout(path) {
        out.write_all(text.as_bytes())
            .map_err(|e| CliError::io(path, e))
    } else {
        fs::write(path, text).map_err(|e| CliError::io(path, e))
    }
}
