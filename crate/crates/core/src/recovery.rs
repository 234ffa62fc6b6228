//! Three-level erasure recovery.
//!
//! * Lower: a fiber (`p` points sharing `(x, z)`) carries a polynomial in `y`
//!   of degree `<= p - rho2`, so any `p - rho2 + 1` known symbols rebuild it.
//! * Middle: on a middle group the codeword is `g(x, y) = sum_j g_j(a) y^j`
//!   where `a` is the column coordinate. Columns with enough known symbols
//!   give the values `g_j(a)`; `D + 1` such columns rebuild every `g_j`.
//! * Global: exact linear solve for the message from every known symbol.
//!
//! Only erasures are modelled. Knowing *which* symbols are erased is free;
//! reading a symbol's value is what the access counts measure.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;
use core::cell::{OnceCell, RefCell};
use core::fmt;

use crate::code::EvaluationCode;
use crate::field::{interpolate_univariate, FElem, FieldError, UniPoly};
use crate::matrix::SolveError;

/// Read access to a possibly damaged word.
pub trait SymbolSource {
    fn len(&self) -> usize;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Erasure status; does not count as reading the symbol.
    fn is_erased(&self, pos: usize) -> bool;

    /// The symbol value, or `None` when erased.
    fn read(&self, pos: usize) -> Option<FElem>;
}

/// A word as received over an erasure channel.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ReceivedWord {
    pub symbols: Vec<Option<FElem>>,
}

impl ReceivedWord {
    pub fn new(symbols: Vec<Option<FElem>>) -> Self {
        ReceivedWord { symbols }
    }

    pub fn from_codeword(word: &[FElem]) -> Self {
        ReceivedWord {
            symbols: word.iter().copied().map(Some).collect(),
        }
    }

    pub fn erase(&mut self, pos: usize) {
        self.symbols[pos] = None;
    }

    pub fn erased_positions(&self) -> Vec<usize> {
        (0..self.symbols.len())
            .filter(|&i| self.symbols[i].is_none())
            .collect()
    }

    pub fn erasure_count(&self) -> usize {
        self.symbols.iter().filter(|s| s.is_none()).count()
    }
}

impl SymbolSource for ReceivedWord {
    fn len(&self) -> usize {
        self.symbols.len()
    }

    fn is_erased(&self, pos: usize) -> bool {
        self.symbols[pos].is_none()
    }

    fn read(&self, pos: usize) -> Option<FElem> {
        self.symbols[pos]
    }
}

/// Wrapper recording every position whose value was read.
pub struct AccessLog<'a, S: SymbolSource + ?Sized> {
    inner: &'a S,
    reads: RefCell<BTreeSet<usize>>,
}

impl<'a, S: SymbolSource + ?Sized> AccessLog<'a, S> {
    pub fn new(inner: &'a S) -> Self {
        AccessLog {
            inner,
            reads: RefCell::new(BTreeSet::new()),
        }
    }

    /// Distinct positions read so far, ascending.
    pub fn reads(&self) -> Vec<usize> {
        self.reads.borrow().iter().copied().collect()
    }

    pub fn read_count(&self) -> usize {
        self.reads.borrow().len()
    }
}

impl<S: SymbolSource + ?Sized> SymbolSource for AccessLog<'_, S> {
    fn len(&self) -> usize {
        self.inner.len()
    }

    fn is_erased(&self, pos: usize) -> bool {
        self.inner.is_erased(pos)
    }

    fn read(&self, pos: usize) -> Option<FElem> {
        self.reads.borrow_mut().insert(pos);
        self.inner.read(pos)
    }
}

/// Recovery level, ordered from most to least local.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Level {
    Lower,
    Middle,
    Global,
}

impl Level {
    pub const ALL: [Level; 3] = [Level::Lower, Level::Middle, Level::Global];

    pub fn as_str(self) -> &'static str {
        match self {
            Level::Lower => "lower",
            Level::Middle => "middle",
            Level::Global => "global",
        }
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl core::str::FromStr for Level {
    type Err = alloc::string::String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "lower" => Ok(Level::Lower),
            "middle" => Ok(Level::Middle),
            "global" => Ok(Level::Global),
            other => Err(alloc::format!("unknown level `{other}`")),
        }
    }
}

/// Where a repair group comes from in the code's index.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupRef {
    Fiber(usize),
    Middle(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepairGroup {
    pub level: Level,
    pub positions: Vec<usize>,
    pub geometry: GroupRef,
}

/// The lower and middle repair groups of a position.
pub fn repair_groups(code: &EvaluationCode, pos: usize) -> [RepairGroup; 2] {
    let info = code.positions()[pos];
    [
        RepairGroup {
            level: Level::Lower,
            positions: code.fibers()[info.fiber].clone(),
            geometry: GroupRef::Fiber(info.fiber),
        },
        RepairGroup {
            level: Level::Middle,
            positions: code.groups()[info.group].positions.clone(),
            geometry: GroupRef::Middle(info.group),
        },
    ]
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RecoveryError {
    LengthMismatch {
        expected: usize,
        got: usize,
    },
    PositionOutOfRange(usize),
    NotErased(usize),
    InsufficientLowerData {
        position: usize,
        known: usize,
        needed: usize,
    },
    InsufficientMiddleData {
        group: usize,
        good_columns: usize,
        needed: usize,
    },
    /// Known symbols disagree with every codeword of the recovering code.
    InconsistentSamples,
    AmbiguousErasurePattern {
        rank: usize,
        unknowns: usize,
    },
    UnrecoverablePosition {
        position: usize,
        trace: RepairTrace,
    },
}

impl fmt::Display for RecoveryError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RecoveryError::LengthMismatch { expected, got } => {
                write!(f, "word has length {got}, code has length {expected}")
            }
            RecoveryError::PositionOutOfRange(p) => write!(f, "position {p} out of range"),
            RecoveryError::NotErased(p) => write!(f, "position {p} is not erased"),
            RecoveryError::InsufficientLowerData {
                position,
                known,
                needed,
            } => write!(
                f,
                "fiber of position {position} has {known} known symbols, needs {needed}"
            ),
            RecoveryError::InsufficientMiddleData {
                group,
                good_columns,
                needed,
            } => write!(
                f,
                "middle group {group} has {good_columns} recoverable columns, needs {needed}"
            ),
            RecoveryError::InconsistentSamples => {
                write!(f, "known symbols are inconsistent with the code")
            }
            RecoveryError::AmbiguousErasurePattern { rank, unknowns } => {
                write!(f, "known positions have rank {rank} < dimension {unknowns}")
            }
            RecoveryError::UnrecoverablePosition { position, .. } => {
                write!(
                    f,
                    "position {position} is unrecoverable at every permitted level"
                )
            }
        }
    }
}

impl core::error::Error for RecoveryError {}

impl From<FieldError> for RecoveryError {
    fn from(e: FieldError) -> Self {
        match e {
            FieldError::InconsistentSamples => RecoveryError::InconsistentSamples,
            // Node distinctness and sample counts are guaranteed by the callers.
            other => unreachable!("interpolation precondition violated: {other}"),
        }
    }
}

fn check_len(
    code: &EvaluationCode,
    src: &(impl SymbolSource + ?Sized),
) -> Result<(), RecoveryError> {
    if src.len() != code.len() {
        return Err(RecoveryError::LengthMismatch {
            expected: code.len(),
            got: src.len(),
        });
    }
    Ok(())
}

/// Rebuilds the symbol at `pos` from its fiber.
///
/// Reads exactly `p - rho2 + 1` symbols: the first known ones of the fiber
/// other than `pos`. `pos` itself need not be erased.
pub fn recover_lower(
    code: &EvaluationCode,
    src: &(impl SymbolSource + ?Sized),
    pos: usize,
) -> Result<FElem, RecoveryError> {
    check_len(code, src)?;
    if pos >= code.len() {
        return Err(RecoveryError::PositionOutOfRange(pos));
    }
    let needed = code.lower_degree() + 1;
    let fiber = &code.fibers()[code.positions()[pos].fiber];
    let known: Vec<usize> = fiber
        .iter()
        .copied()
        .filter(|&i| i != pos && !src.is_erased(i))
        .collect();
    if known.len() < needed {
        return Err(RecoveryError::InsufficientLowerData {
            position: pos,
            known: known.len(),
            needed,
        });
    }
    let points = code.points();
    let samples: Vec<(FElem, FElem)> = known[..needed]
        .iter()
        .map(|&i| (points[i].y, src.read(i).expect("known symbol")))
        .collect();
    let poly = interpolate_univariate(code.ctx(), &samples, code.lower_degree())?;
    Ok(poly.eval(code.ctx(), points[pos].y))
}

/// Fills every erased position of middle group `group` by layered
/// interpolation and returns `(position, value)` pairs in position order.
///
/// Columns are the fibers of the group, keyed by the group's column axis.
/// The lexicographically smallest `D + 1` recoverable columns determine the
/// coefficient polynomials; every other known symbol of the group is then
/// read and checked against the result.
pub fn recover_middle(
    code: &EvaluationCode,
    src: &(impl SymbolSource + ?Sized),
    group: usize,
) -> Result<Vec<(usize, FElem)>, RecoveryError> {
    check_len(code, src)?;
    let ctx = code.ctx();
    let g = &code.groups()[group];
    let erased: Vec<usize> = g
        .positions
        .iter()
        .copied()
        .filter(|&i| src.is_erased(i))
        .collect();
    if erased.is_empty() {
        return Ok(Vec::new());
    }

    let points = code.points();
    let y_degree = code.lower_degree();
    let needed_known = y_degree + 1;
    let axis = g.column_axis;

    // Columns in ascending order of their coordinate.
    let mut columns: Vec<(FElem, Vec<usize>)> = Vec::new();
    for &i in &g.positions {
        let a = axis.coordinate(&points[i]);
        match columns.binary_search_by(|(c, _)| c.cmp(&a)) {
            Ok(at) => columns[at].1.push(i),
            Err(at) => columns.insert(at, (a, vec![i])),
        }
    }
    let good: Vec<&(FElem, Vec<usize>)> = columns
        .iter()
        .filter(|(_, col)| col.iter().filter(|&&i| !src.is_erased(i)).count() >= needed_known)
        .collect();
    let needed_columns = g.column_degree + 1;
    if good.len() < needed_columns {
        return Err(RecoveryError::InsufficientMiddleData {
            group,
            good_columns: good.len(),
            needed: needed_columns,
        });
    }

    // coeffs[j] holds (a, g_j(a)) for the chosen columns.
    let mut coeffs: Vec<Vec<(FElem, FElem)>> =
        vec![Vec::with_capacity(needed_columns); y_degree + 1];
    for (a, col) in &good[..needed_columns] {
        let samples: Vec<(FElem, FElem)> = col
            .iter()
            .copied()
            .filter(|&i| !src.is_erased(i))
            .take(needed_known)
            .map(|i| (points[i].y, src.read(i).expect("known symbol")))
            .collect();
        let poly = interpolate_univariate(ctx, &samples, y_degree)?;
        for (j, c) in coeffs.iter_mut().enumerate() {
            c.push((*a, poly.coeff(j)));
        }
    }
    let g_j: Vec<UniPoly> = coeffs
        .iter()
        .map(|samples| interpolate_univariate(ctx, samples, g.column_degree))
        .collect::<Result<_, _>>()?;

    let eval = |i: usize| -> FElem {
        let a = axis.coordinate(&points[i]);
        let y = points[i].y;
        g_j.iter()
            .rev()
            .fold(FElem::ZERO, |acc, gj| ctx.mul_add(gj.eval(ctx, a), acc, y))
    };

    for &i in &g.positions {
        if !src.is_erased(i) && src.read(i) != Some(eval(i)) {
            return Err(RecoveryError::InconsistentSamples);
        }
    }
    Ok(erased.into_iter().map(|i| (i, eval(i))).collect())
}

/// Recovers the whole codeword from every known symbol.
pub fn recover_global(
    code: &EvaluationCode,
    src: &(impl SymbolSource + ?Sized),
) -> Result<Vec<FElem>, RecoveryError> {
    check_len(code, src)?;
    let known: Vec<usize> = (0..code.len()).filter(|&i| !src.is_erased(i)).collect();
    let values: Vec<FElem> = known.iter().map(|&i| src.read(i).expect("known")).collect();
    let system = code.generator().select_columns(&known).transpose();
    let message = system.solve(code.ctx(), &values).map_err(|e| match e {
        SolveError::Underdetermined { rank, unknowns } => {
            RecoveryError::AmbiguousErasurePattern { rank, unknowns }
        }
        SolveError::Inconsistent => RecoveryError::InconsistentSamples,
    })?;
    Ok(code.encode(&message).expect("message length matches basis"))
}

/// Highest level a repair may escalate to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RepairPolicy {
    pub max_level: Level,
}

impl Default for RepairPolicy {
    fn default() -> Self {
        RepairPolicy {
            max_level: Level::Global,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LevelAttempt {
    pub level: Level,
    pub symbols_read: usize,
    pub success: bool,
}

/// What one repair did: each attempted level with its read count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepairTrace {
    pub position: usize,
    pub attempts: Vec<LevelAttempt>,
}

impl RepairTrace {
    /// Level that produced the value, if any.
    pub fn level(&self) -> Option<Level> {
        self.attempts.iter().find(|a| a.success).map(|a| a.level)
    }

    pub fn success(&self) -> bool {
        self.level().is_some()
    }

    pub fn symbols_read(&self) -> usize {
        self.attempts.iter().map(|a| a.symbols_read).sum()
    }

    pub fn symbols_read_at(&self, level: Level) -> Option<usize> {
        self.attempts
            .iter()
            .find(|a| a.level == level)
            .map(|a| a.symbols_read)
    }
}

/// Cached middle or global result: the recovered values and the reads it took.
type Cached<T> = (Result<T, RecoveryError>, usize);
type MiddleCache = RefCell<Vec<Option<Cached<Vec<(usize, FElem)>>>>>;

/// Repairs against one fixed received word, sharing middle and global
/// results between positions. Read counts do not depend on caching: a cached
/// level reports the reads its computation made.
pub struct RepairSession<'a, S: SymbolSource + ?Sized> {
    code: &'a EvaluationCode,
    src: &'a S,
    middle: MiddleCache,
    global: OnceCell<Cached<Vec<FElem>>>,
}

impl<'a, S: SymbolSource + ?Sized> RepairSession<'a, S> {
    pub fn new(code: &'a EvaluationCode, src: &'a S) -> Self {
        RepairSession {
            code,
            src,
            middle: RefCell::new(vec![None; code.groups().len()]),
            global: OnceCell::new(),
        }
    }

    fn middle(&self, group: usize) -> Cached<Vec<(usize, FElem)>> {
        if let Some(hit) = &self.middle.borrow()[group] {
            return hit.clone();
        }
        let log = AccessLog::new(self.src);
        let out = (recover_middle(self.code, &log, group), log.read_count());
        self.middle.borrow_mut()[group] = Some(out.clone());
        out
    }

    fn global(&self) -> &Cached<Vec<FElem>> {
        self.global.get_or_init(|| {
            let log = AccessLog::new(self.src);
            let out = recover_global(self.code, &log);
            (out, log.read_count())
        })
    }

    /// Tries lower, then middle, then global, stopping at the policy cap.
    pub fn repair(
        &self,
        pos: usize,
        policy: RepairPolicy,
    ) -> Result<(FElem, RepairTrace), RecoveryError> {
        check_len(self.code, self.src)?;
        if pos >= self.code.len() {
            return Err(RecoveryError::PositionOutOfRange(pos));
        }
        if !self.src.is_erased(pos) {
            return Err(RecoveryError::NotErased(pos));
        }
        let mut trace = RepairTrace {
            position: pos,
            attempts: Vec::new(),
        };
        for level in Level::ALL {
            if level > policy.max_level {
                break;
            }
            let (value, reads) = match level {
                Level::Lower => {
                    let log = AccessLog::new(self.src);
                    let v = recover_lower(self.code, &log, pos).ok();
                    (v, log.read_count())
                }
                Level::Middle => {
                    let group = self.code.positions()[pos].group;
                    let (fills, reads) = self.middle(group);
                    let v = fills
                        .ok()
                        .and_then(|f| f.iter().find(|(i, _)| *i == pos).map(|&(_, v)| v));
                    (v, reads)
                }
                Level::Global => {
                    let (word, reads) = self.global();
                    (word.as_ref().ok().map(|w| w[pos]), *reads)
                }
            };
            trace.attempts.push(LevelAttempt {
                level,
                symbols_read: reads,
                success: value.is_some(),
            });
            if let Some(v) = value {
                return Ok((v, trace));
            }
        }
        Err(RecoveryError::UnrecoverablePosition {
            position: pos,
            trace,
        })
    }
}

/// Repairs one erased position, escalating as the policy allows.
pub fn repair(
    code: &EvaluationCode,
    received: &(impl SymbolSource + ?Sized),
    pos: usize,
    policy: RepairPolicy,
) -> Result<(FElem, RepairTrace), RecoveryError> {
    RepairSession::new(code, received).repair(pos, policy)
}
