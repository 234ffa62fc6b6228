//! Deterministic storage-repair simulation.
//!
//! Codeword positions are placed on storage nodes, a seeded failure scenario
//! erases symbols, and every erased position is repaired with the
//! hierarchical recovery, recording which level succeeded and how many
//! symbols it read.
//!
//! All randomness comes from SplitMix64 seeded with the scenario seed. A
//! sample of `count` distinct items out of `len` is the first `count` slots
//! of a partial Fisher-Yates shuffle of `0..len`, where step `i` swaps slot
//! `i` with slot `i + next_u64() % (len - i)`; the sample is then sorted.

use alloc::vec::Vec;
use core::fmt;

use rand_core::{Rng, SeedableRng};
use rand_xoshiro::SplitMix64;

use crate::code::EvaluationCode;
use crate::field::FElem;
use crate::recovery::{
    Level, ReceivedWord, RecoveryError, RepairPolicy, RepairSession, RepairTrace, SymbolSource,
};

/// Seed offset for the message stream, so that the erasure pattern and the
/// simulated data are independent.
pub const MESSAGE_STREAM: u64 = 0x9e37_79b9_7f4a_7c15;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SimError {
    TooFewNodes { nodes: usize, needed: usize },
    InvalidScenario(&'static str),
    LengthMismatch { expected: usize, got: usize },
}

impl fmt::Display for SimError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SimError::TooFewNodes { nodes, needed } => {
                write!(
                    f,
                    "{nodes} nodes cannot hold a fiber of {needed} symbols apart"
                )
            }
            SimError::InvalidScenario(why) => write!(f, "invalid scenario: {why}"),
            SimError::LengthMismatch { expected, got } => {
                write!(f, "word has length {got}, code has length {expected}")
            }
        }
    }
}

impl core::error::Error for SimError {}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LayoutPolicy {
    /// Position `i` goes to node `i mod nodes`. Fibers are contiguous, so
    /// the `p` symbols of a fiber land on `p` distinct nodes.
    #[default]
    Striped,
    /// Fiber `f` goes whole to node `f mod nodes`; a single node failure
    /// wipes out entire fibers.
    FiberPacked,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeLayout {
    pub node_count: usize,
    pub assignment: Vec<usize>,
}

impl NodeLayout {
    pub fn positions_on(&self, node: usize) -> impl Iterator<Item = usize> + '_ {
        self.assignment
            .iter()
            .enumerate()
            .filter(move |(_, &n)| n == node)
            .map(|(i, _)| i)
    }
}

pub fn build_layout(
    code: &EvaluationCode,
    node_count: usize,
    policy: LayoutPolicy,
) -> Result<NodeLayout, SimError> {
    let p = code.spec().p();
    if node_count < p {
        return Err(SimError::TooFewNodes {
            nodes: node_count,
            needed: p,
        });
    }
    let assignment = match policy {
        LayoutPolicy::Striped => (0..code.len()).map(|i| i % node_count).collect(),
        LayoutPolicy::FiberPacked => code
            .positions()
            .iter()
            .map(|info| info.fiber % node_count)
            .collect(),
    };
    Ok(NodeLayout {
        node_count,
        assignment,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScenarioKind {
    /// `count` distinct nodes fail; all their symbols are erased.
    RandomNodes,
    /// `count` distinct positions are erased.
    RandomSymbols,
    /// One middle group is drawn; its first `count` positions are erased.
    TargetedGroup,
}

impl ScenarioKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ScenarioKind::RandomNodes => "random_nodes",
            ScenarioKind::RandomSymbols => "random_symbols",
            ScenarioKind::TargetedGroup => "targeted_group",
        }
    }
}

impl fmt::Display for ScenarioKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl core::str::FromStr for ScenarioKind {
    type Err = alloc::string::String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "random_nodes" => Ok(ScenarioKind::RandomNodes),
            "random_symbols" => Ok(ScenarioKind::RandomSymbols),
            "targeted_group" => Ok(ScenarioKind::TargetedGroup),
            other => Err(alloc::format!("unknown scenario kind `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FailureScenario {
    pub kind: ScenarioKind,
    pub count: usize,
    pub seed: u64,
}

/// `count` distinct values from `0..len`, ascending.
pub fn sample_distinct(rng: &mut SplitMix64, len: usize, count: usize) -> Vec<usize> {
    assert!(count <= len);
    let mut pool: Vec<usize> = (0..len).collect();
    for i in 0..count {
        let j = i + (rng.next_u64() % (len - i) as u64) as usize;
        pool.swap(i, j);
    }
    pool.truncate(count);
    pool.sort_unstable();
    pool
}

/// Positions erased by `scenario`, ascending.
pub fn erasure_pattern(
    layout: &NodeLayout,
    code: &EvaluationCode,
    scenario: &FailureScenario,
) -> Result<Vec<usize>, SimError> {
    if layout.assignment.len() != code.len() {
        return Err(SimError::LengthMismatch {
            expected: code.len(),
            got: layout.assignment.len(),
        });
    }
    let mut rng = SplitMix64::seed_from_u64(scenario.seed);
    let count = scenario.count;
    match scenario.kind {
        ScenarioKind::RandomNodes => {
            if count > layout.node_count {
                return Err(SimError::InvalidScenario("more failed nodes than nodes"));
            }
            let mut failed = alloc::vec![false; layout.node_count];
            for n in sample_distinct(&mut rng, layout.node_count, count) {
                failed[n] = true;
            }
            Ok((0..code.len())
                .filter(|&i| failed[layout.assignment[i]])
                .collect())
        }
        ScenarioKind::RandomSymbols => {
            if count > code.len() {
                return Err(SimError::InvalidScenario("more erasures than positions"));
            }
            Ok(sample_distinct(&mut rng, code.len(), count))
        }
        ScenarioKind::TargetedGroup => {
            let groups = code.groups();
            let g = &groups[(rng.next_u64() % groups.len() as u64) as usize];
            if count > g.positions.len() {
                return Err(SimError::InvalidScenario(
                    "more erasures than group positions",
                ));
            }
            Ok(g.positions[..count].to_vec())
        }
    }
}

/// Erases the scenario's positions from `codeword`.
pub fn inject_failures(
    layout: &NodeLayout,
    code: &EvaluationCode,
    scenario: &FailureScenario,
    codeword: &[FElem],
) -> Result<ReceivedWord, SimError> {
    if codeword.len() != code.len() {
        return Err(SimError::LengthMismatch {
            expected: code.len(),
            got: codeword.len(),
        });
    }
    let mut word = ReceivedWord::from_codeword(codeword);
    for i in erasure_pattern(layout, code, scenario)? {
        word.erase(i);
    }
    Ok(word)
}

/// A message drawn uniformly (up to modulo bias) from SplitMix64 seeded
/// with `seed ^ MESSAGE_STREAM`, one draw per coordinate.
pub fn random_message(code: &EvaluationCode, seed: u64) -> Vec<FElem> {
    let mut rng = SplitMix64::seed_from_u64(seed ^ MESSAGE_STREAM);
    let q = code.ctx().size() as u64;
    (0..code.message_len())
        .map(|_| {
            code.ctx()
                .element((rng.next_u64() % q) as u32)
                .expect("index below q")
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RepairMode {
    /// Every repair sees the original erasure pattern.
    #[default]
    Parallel,
    /// Positions are repaired in ascending order and each success is written
    /// back before the next repair.
    Sequential,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PositionRepair {
    pub position: usize,
    pub value: Option<FElem>,
    pub trace: RepairTrace,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RepairTotals {
    pub erased: usize,
    pub recovered: usize,
    pub unrecoverable: usize,
    pub symbols_read: usize,
    /// Successful repairs per level, indexed lower, middle, global.
    pub level_histogram: [usize; 3],
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RepairReport {
    /// Sorted by position.
    pub per_position: Vec<PositionRepair>,
    pub totals: RepairTotals,
    /// Distinct nodes holding at least one symbol read by some repair.
    pub nodes_contacted: usize,
}

impl RepairReport {
    /// Number of recovered values that differ from `original`.
    pub fn mismatches(&self, original: &[FElem]) -> usize {
        self.per_position
            .iter()
            .filter(|r| r.value.is_some_and(|v| v != original[r.position]))
            .count()
    }

    pub fn count_at(&self, level: Level) -> usize {
        self.totals.level_histogram[level as usize]
    }
}

/// Repairs every erased position of `received` and aggregates the traces.
/// Unrecoverable positions are counted, never raised.
pub fn simulate_repair(
    code: &EvaluationCode,
    layout: &NodeLayout,
    received: &ReceivedWord,
    policy: RepairPolicy,
    mode: RepairMode,
) -> Result<RepairReport, SimError> {
    if received.len() != code.len() || layout.assignment.len() != code.len() {
        return Err(SimError::LengthMismatch {
            expected: code.len(),
            got: received.len(),
        });
    }
    let erased = received.erased_positions();
    let mut per_position = Vec::with_capacity(erased.len());
    let mut touched = alloc::vec![false; layout.node_count];

    let mut record = |pos: usize, out: Result<(FElem, RepairTrace), RecoveryError>| {
        let (value, trace) = match out {
            Ok((v, t)) => (Some(v), t),
            Err(RecoveryError::UnrecoverablePosition { trace, .. }) => (None, trace),
            Err(other) => unreachable!("repair of an erased in-range position: {other}"),
        };
        per_position.push(PositionRepair {
            position: pos,
            value,
            trace,
        });
    };

    match mode {
        RepairMode::Parallel => {
            let session = RepairSession::new(code, received);
            for &pos in &erased {
                record(pos, session.repair(pos, policy));
            }
        }
        RepairMode::Sequential => {
            let mut word = received.clone();
            for &pos in &erased {
                let out = RepairSession::new(code, &word).repair(pos, policy);
                if let Ok((v, _)) = out {
                    word.symbols[pos] = Some(v);
                }
                record(pos, out);
            }
        }
    }

    let mut totals = RepairTotals {
        erased: erased.len(),
        ..RepairTotals::default()
    };
    for r in &per_position {
        totals.symbols_read += r.trace.symbols_read();
        match r.trace.level() {
            Some(level) => {
                totals.recovered += 1;
                totals.level_histogram[level as usize] += 1;
            }
            None => totals.unrecoverable += 1,
        }
    }
    for r in &per_position {
        for node in nodes_read(code, layout, received, r) {
            touched[node] = true;
        }
    }
    Ok(RepairReport {
        per_position,
        totals,
        nodes_contacted: touched.iter().filter(|&&t| t).count(),
    })
}

/// Nodes read by the successful level of a repair, derived from the
/// positions that level reads: the first known fiber symbols for lower, the
/// known symbols of the middle group, or every known symbol for global.
fn nodes_read<'a>(
    code: &'a EvaluationCode,
    layout: &'a NodeLayout,
    received: &'a ReceivedWord,
    r: &PositionRepair,
) -> Vec<usize> {
    let info = code.positions()[r.position];
    let reads: Vec<usize> = match r.trace.level() {
        Some(Level::Lower) => code.fibers()[info.fiber]
            .iter()
            .copied()
            .filter(|&i| !received.is_erased(i))
            .take(code.lower_degree() + 1)
            .collect(),
        Some(Level::Middle) => code.groups()[info.group]
            .positions
            .iter()
            .copied()
            .filter(|&i| !received.is_erased(i))
            .collect(),
        Some(Level::Global) => (0..code.len())
            .filter(|&i| !received.is_erased(i))
            .collect(),
        None => Vec::new(),
    };
    reads.into_iter().map(|i| layout.assignment[i]).collect()
}
