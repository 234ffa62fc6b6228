use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use super::{build_basis, build_code, build_evaluation_set, CodeError, CodeSpec, Construction};
use crate::geometry::curve_fiber;

/// Hierarchical parameters `((n1, s1, d1), (n2, s2, d2))` plus the full code.
///
/// `n`, `k` and `n1` are measured on the constructed point set and basis; the
/// dimension bounds `s1`, `s2` and the distance bounds come from the
/// construction's closed forms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParamReport {
    pub construction: Construction,
    pub p: u32,
    pub n: usize,
    pub k: usize,
    /// Lower bound on the minimum distance of the full code.
    pub d_lower: usize,
    /// Length of the largest middle code.
    pub n1: usize,
    pub s1: usize,
    pub d1: usize,
    pub n2: usize,
    pub s2: usize,
    pub d2: usize,
}

impl fmt::Display for ParamReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "construction {} over F_{}^2", self.construction, self.p)?;
        writeln!(f, "level   length  dim<=  dist>=")?;
        writeln!(f, "full    {:<7} {:<6} {}", self.n, self.k, self.d_lower)?;
        writeln!(f, "middle  {:<7} {:<6} {}", self.n1, self.s1, self.d1)?;
        write!(f, "lower   {:<7} {:<6} {}", self.n2, self.s2, self.d2)
    }
}

pub fn hierarchy_params(spec: &CodeSpec) -> Result<ParamReport, CodeError> {
    spec.validate()?;
    let p = spec.p();
    let (rho1, rho2) = (spec.rho1, spec.rho2);
    let points = build_evaluation_set(spec)?;
    let k = build_basis(spec)?.len();

    let n1 = match spec.construction {
        Construction::Ex5 => {
            let z0 = points.iter().filter(|pt| pt.z.is_zero()).count();
            z0.max(points.len() - z0)
        }
        _ => {
            let mut best = 0;
            let mut run = 0;
            for (i, pt) in points.iter().enumerate() {
                run = if i > 0 && points[i - 1].z == pt.z {
                    run + 1
                } else {
                    1
                };
                best = best.max(run);
            }
            best
        }
    };

    let s2 = p - rho2 + 1;
    let (s1, d1, d_lower) = match spec.construction {
        Construction::Ex5 => {
            let d = (rho1 * rho2).min(p * (rho1 + rho2) - p * p);
            ((p * p - rho1 + 1) * s2, d, d)
        }
        Construction::Ex4 => {
            let d = (rho1 + rho2 - 3) * p + rho1 + rho2;
            ((spec.eta - rho1 + 1) * s2, rho1 * rho2, d)
        }
        Construction::Generic | Construction::Ex5Lambda => {
            let bezout = spec.nu as i64 * (spec.eta - rho1 + p - rho2) as i64;
            let mut smallest = i64::MAX;
            for &g in &spec.gamma {
                smallest = smallest.min(curve_fiber(&spec.surface, g)?.points.len() as i64);
            }
            let d = (smallest - bezout).max(1) as usize;
            ((spec.eta - rho1 + 1) * s2, rho1 * rho2, d)
        }
    };

    Ok(ParamReport {
        construction: spec.construction,
        p: p as u32,
        n: points.len(),
        k,
        d_lower,
        n1,
        s1,
        d1,
        n2: p,
        s2,
        d2: rho2,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FindingKind {
    /// A theorem statement and a line of its proof give different values.
    StatementVersusProof,
    /// Two theorem statements give different values for the same quantity.
    ConflictingStatements,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Equal,
    AtMost,
}

/// One published value for a quantity and whether enumeration supports it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Claim {
    pub source: &'static str,
    pub relation: Relation,
    pub value: i64,
    pub holds: bool,
}

impl Claim {
    fn new(source: &'static str, relation: Relation, value: i64, observed: i64) -> Self {
        let holds = match relation {
            Relation::Equal => observed == value,
            Relation::AtMost => observed <= value,
        };
        Claim {
            source,
            relation,
            value,
            holds,
        }
    }
}

/// A numeric disagreement between published formulas, settled by
/// enumeration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Finding {
    pub id: &'static str,
    pub kind: FindingKind,
    pub description: String,
    pub observed: i64,
    pub claims: Vec<Claim>,
    /// Whether a failed claim counts as a failed closed-form check. Only the
    /// single formula a theorem statement commits to is gating.
    pub gating_claim: Option<usize>,
}

impl Finding {
    /// True when the gating claim exists and enumeration contradicts it.
    pub fn statement_failed(&self) -> bool {
        self.gating_claim.is_some_and(|i| !self.claims[i].holds)
    }
}

/// Length of the box code on the `ex4` surface (all points with `z != 0`)
/// against the two published expressions.
pub fn ex4_length_finding(p: u32) -> Result<Finding, CodeError> {
    let spec = CodeSpec::ex4(p, 2, 2)?;
    let observed = build_evaluation_set(&spec)?.len() as i64;
    let q = p as i64;
    let statement = 2 * q.pow(4) - 3 * q.pow(3) + 2 * q * q - q;
    let proof = 2 * q.pow(4) - 3 * q.pow(3) - 2 * q - 2;
    Ok(Finding {
        id: "ex4-length",
        kind: FindingKind::StatementVersusProof,
        description: format!(
            "length of the ex4 code at p = {p}: statement 2p^4-3p^3+2p^2-p, proof line 2p^4-3p^3-2p-2"
        ),
        observed,
        claims: vec![
            Claim::new("statement", Relation::Equal, statement, observed),
            Claim::new("proof", Relation::Equal, proof, observed),
        ],
        gating_claim: Some(0),
    })
}

/// Dimension of the fiber codes of the union-basis code on the `ex5`
/// surface, against `p - rho2` (union-basis statement) and `p - rho2 + 1`
/// (generic statement).
pub fn ex5_lower_dimension_finding(p: u32, rho1: usize, rho2: usize) -> Result<Finding, CodeError> {
    let code = build_code(&CodeSpec::ex5(p, rho1, rho2)?)?;
    let observed = code
        .fibers()
        .iter()
        .map(|f| code.punctured_generator(f).rows())
        .max()
        .unwrap_or(0) as i64;
    let s2 = (p as usize - rho2) as i64;
    Ok(Finding {
        id: "ex5-lower-dimension",
        kind: FindingKind::ConflictingStatements,
        description: format!(
            "lower-code dimension of the ex5 code at p = {p}, rho1 = {rho1}, rho2 = {rho2}: at most p-rho2 versus p-rho2+1"
        ),
        observed,
        claims: vec![
            Claim::new("union-basis statement", Relation::AtMost, s2, observed),
            Claim::new("generic statement", Relation::AtMost, s2 + 1, observed),
        ],
        gating_claim: None,
    })
}
