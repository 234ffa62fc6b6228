//! Evaluation codes `C(V, T)` on Artin-Schreier surfaces.
//!
//! A code is fixed by a [`CodeSpec`]: the evaluation set `T` is a union of
//! curve fibers (or, for the union-basis construction, the whole surface)
//! in canonical `(z, x, y)` order, and `V` is spanned by monomials listed in
//! lexicographic `(i, j, k)` order for `x^i y^j z^k`. Row `r` of the
//! generator matrix evaluates monomial `r` at every point of `T`.

mod distance;
mod params;
mod spec;

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

pub use distance::{brute_force_min_distance, min_distance, DEFAULT_DISTANCE_BUDGET};
pub use params::{
    ex4_length_finding, ex5_lower_dimension_finding, hierarchy_params, Claim, Finding, FindingKind,
    ParamReport, Relation,
};
pub use spec::{CodeSpec, Construction, Validation};

use crate::field::{FElem, FieldCtx};
use crate::geometry::{enumerate_surface, AffinePoint, GeometryError};
use crate::matrix::Matrix;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CodeError {
    Geometry(GeometryError),
    InvalidCodeSpec(String),
    EmptyEvaluationSet,
    DimensionMismatch {
        expected: usize,
        got: usize,
    },
    /// `q^k` messages exceed the budget.
    EnumerationBudgetExceeded {
        messages: u128,
        budget: u128,
    },
    EmptyCode,
}

impl fmt::Display for CodeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CodeError::Geometry(e) => write!(f, "{e}"),
            CodeError::InvalidCodeSpec(msg) => write!(f, "invalid code spec: {msg}"),
            CodeError::EmptyEvaluationSet => write!(f, "evaluation set is empty"),
            CodeError::DimensionMismatch { expected, got } => {
                write!(f, "expected a vector of length {expected}, got {got}")
            }
            CodeError::EnumerationBudgetExceeded { messages, budget } => {
                write!(
                    f,
                    "{messages} messages exceed the enumeration budget {budget}"
                )
            }
            CodeError::EmptyCode => write!(f, "code has dimension 0"),
        }
    }
}

impl core::error::Error for CodeError {}

impl From<GeometryError> for CodeError {
    fn from(e: GeometryError) -> Self {
        CodeError::Geometry(e)
    }
}

impl From<crate::field::FieldError> for CodeError {
    fn from(e: crate::field::FieldError) -> Self {
        CodeError::Geometry(e.into())
    }
}

/// Exponent triple `(i, j, k)` of `x^i y^j z^k`.
pub type Monomial = (u32, u32, u32);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialBasis {
    monomials: Vec<Monomial>,
}

impl MonomialBasis {
    /// Sorts and deduplicates.
    pub fn new(mut monomials: Vec<Monomial>) -> Self {
        monomials.sort_unstable();
        monomials.dedup();
        MonomialBasis { monomials }
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    /// Values of every monomial at `pt`, in basis order.
    pub fn evaluate(&self, ctx: &FieldCtx, pt: &AffinePoint) -> Vec<FElem> {
        self.monomials
            .iter()
            .map(|&(i, j, k)| {
                ctx.mul(
                    ctx.mul(ctx.pow(pt.x, i as u64), ctx.pow(pt.y, j as u64)),
                    ctx.pow(pt.z, k as u64),
                )
            })
            .collect()
    }
}

pub fn build_basis(spec: &CodeSpec) -> Result<MonomialBasis, CodeError> {
    spec.validate()?;
    let p = spec.p() as u32;
    let y_max = p - spec.rho2 as u32;
    let mut monomials = Vec::new();
    match spec.construction {
        Construction::Ex5 => {
            let other_max = p * p - spec.rho1 as u32;
            for j in 0..=y_max {
                for e in 0..=other_max {
                    monomials.push((e, j, 0));
                    monomials.push((0, j, e));
                }
            }
        }
        _ => {
            let x_max = (spec.eta - spec.rho1) as u32;
            for i in 0..=x_max {
                for j in 0..=y_max {
                    for k in 0..=spec.rho3 as u32 {
                        monomials.push((i, j, k));
                    }
                }
            }
        }
    }
    Ok(MonomialBasis::new(monomials))
}

pub fn build_evaluation_set(spec: &CodeSpec) -> Result<Vec<AffinePoint>, CodeError> {
    let all = enumerate_surface(&spec.surface);
    let points: Vec<AffinePoint> = match spec.construction {
        Construction::Ex5 => all,
        _ => all
            .into_iter()
            .filter(|pt| spec.gamma.binary_search(&pt.z).is_ok())
            .collect(),
    };
    if points.is_empty() {
        return Err(CodeError::EmptyEvaluationSet);
    }
    Ok(points)
}

/// Variable indexing the columns of the layered interpolation in a group.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Z,
}

impl Axis {
    pub fn coordinate(self, pt: &AffinePoint) -> FElem {
        match self {
            Axis::X => pt.x,
            Axis::Z => pt.z,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupKind {
    /// The curve `Z_gamma` in the plane `z = gamma`.
    Curve(FElem),
    /// The plane `z = 0` (union-basis code); owns the points with `x = z = 0`.
    PlaneZ0,
    /// The plane `x = 0` minus the line `z = 0` (union-basis code).
    PlaneX0,
}

/// A middle repair group and how to interpolate over it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MiddleGroup {
    pub kind: GroupKind,
    pub positions: Vec<usize>,
    pub column_axis: Axis,
    /// Degree bound of each coefficient `g_j` along the column axis.
    pub column_degree: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PositionInfo {
    pub point: AffinePoint,
    /// Index into [`EvaluationCode::fibers`]: positions sharing `(x, z)`.
    pub fiber: usize,
    /// Index into [`EvaluationCode::groups`].
    pub group: usize,
}

#[derive(Debug, Clone)]
pub struct EvaluationCode {
    spec: CodeSpec,
    points: Vec<AffinePoint>,
    basis: MonomialBasis,
    generator: Matrix,
    positions: Vec<PositionInfo>,
    fibers: Vec<Vec<usize>>,
    groups: Vec<MiddleGroup>,
}

pub fn build_code(spec: &CodeSpec) -> Result<EvaluationCode, CodeError> {
    let basis = build_basis(spec)?;
    let points = build_evaluation_set(spec)?;
    let ctx = &spec.surface.ctx;
    let p = spec.p();

    let mut generator = Matrix::zeros(basis.len(), points.len());
    for (c, pt) in points.iter().enumerate() {
        for (r, v) in basis.evaluate(ctx, pt).into_iter().enumerate() {
            generator.set(r, c, v);
        }
    }

    let mut fibers: Vec<Vec<usize>> = Vec::new();
    let mut fiber_of = vec![0usize; points.len()];
    for (i, pt) in points.iter().enumerate() {
        let same = i > 0 && points[i - 1].x == pt.x && points[i - 1].z == pt.z;
        if !same {
            fibers.push(Vec::with_capacity(p));
        }
        fibers.last_mut().expect("pushed").push(i);
        fiber_of[i] = fibers.len() - 1;
    }

    let mut groups: Vec<MiddleGroup> = Vec::new();
    let mut group_of = vec![0usize; points.len()];
    match spec.construction {
        Construction::Ex5 => {
            let degree = p * p - spec.rho1;
            groups.push(MiddleGroup {
                kind: GroupKind::PlaneZ0,
                positions: Vec::new(),
                column_axis: Axis::X,
                column_degree: degree,
            });
            groups.push(MiddleGroup {
                kind: GroupKind::PlaneX0,
                positions: Vec::new(),
                column_axis: Axis::Z,
                column_degree: degree,
            });
            for (i, pt) in points.iter().enumerate() {
                let g = if pt.z.is_zero() { 0 } else { 1 };
                groups[g].positions.push(i);
                group_of[i] = g;
            }
            groups.retain(|g| !g.positions.is_empty());
            for (gid, g) in groups.iter().enumerate() {
                for &i in &g.positions {
                    group_of[i] = gid;
                }
            }
        }
        _ => {
            for (i, pt) in points.iter().enumerate() {
                if i == 0 || points[i - 1].z != pt.z {
                    groups.push(MiddleGroup {
                        kind: GroupKind::Curve(pt.z),
                        positions: Vec::new(),
                        column_axis: Axis::X,
                        column_degree: spec.eta - spec.rho1,
                    });
                }
                groups.last_mut().expect("pushed").positions.push(i);
                group_of[i] = groups.len() - 1;
            }
        }
    }

    let positions = points
        .iter()
        .enumerate()
        .map(|(i, &point)| PositionInfo {
            point,
            fiber: fiber_of[i],
            group: group_of[i],
        })
        .collect();

    Ok(EvaluationCode {
        spec: spec.clone(),
        points,
        basis,
        generator,
        positions,
        fibers,
        groups,
    })
}

impl EvaluationCode {
    pub fn spec(&self) -> &CodeSpec {
        &self.spec
    }

    pub fn ctx(&self) -> &FieldCtx {
        &self.spec.surface.ctx
    }

    pub fn points(&self) -> &[AffinePoint] {
        &self.points
    }

    pub fn basis(&self) -> &MonomialBasis {
        &self.basis
    }

    pub fn generator(&self) -> &Matrix {
        &self.generator
    }

    pub fn positions(&self) -> &[PositionInfo] {
        &self.positions
    }

    pub fn fibers(&self) -> &[Vec<usize>] {
        &self.fibers
    }

    pub fn groups(&self) -> &[MiddleGroup] {
        &self.groups
    }

    /// Length `n`.
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Number of basis monomials, the dimension when evaluation is injective.
    pub fn message_len(&self) -> usize {
        self.basis.len()
    }

    /// Degree bound in `y` of every codeword restricted to a fiber.
    pub fn lower_degree(&self) -> usize {
        self.spec.p() - self.spec.rho2
    }

    /// Rank of the generator matrix.
    pub fn dimension(&self) -> usize {
        self.generator.rank(self.ctx())
    }

    pub fn encode(&self, message: &[FElem]) -> Result<Vec<FElem>, CodeError> {
        if message.len() != self.basis.len() {
            return Err(CodeError::DimensionMismatch {
                expected: self.basis.len(),
                got: message.len(),
            });
        }
        Ok(self.generator.left_mul(self.ctx(), message))
    }

    /// Generator rows restricted to `positions` and reduced to a basis.
    /// Full locality set of a middle group: its positions, plus the shared
    /// line `x = z = 0` for the `x = 0` plane, which the partition hands to
    /// the `z = 0` group. Sorted.
    pub fn locality_set(&self, group: usize) -> Vec<usize> {
        let g = &self.groups[group];
        match g.kind {
            GroupKind::PlaneX0 => (0..self.points.len())
                .filter(|&i| self.points[i].x.is_zero())
                .collect(),
            _ => g.positions.clone(),
        }
    }

    pub fn punctured_generator(&self, positions: &[usize]) -> Matrix {
        self.generator
            .select_columns(positions)
            .row_basis(self.ctx())
    }

    /// Identifier used to bind words to a code, e.g.
    /// `ex4 p=3 eta=3 rho1=2 rho2=2 rho3=3 n=96 k=16`.
    pub fn describe(&self) -> String {
        let s = &self.spec;
        let mut out = format!(
            "{} p={} eta={} rho1={} rho2={} rho3={} n={} k={}",
            s.construction,
            s.p(),
            s.eta,
            s.rho1,
            s.rho2,
            s.rho3,
            self.len(),
            self.message_len()
        );
        if s.surface.family.uses_lambda() {
            out.push_str(&format!(" lambda={}", s.surface.lambda.index()));
        }
        out
    }
}

pub fn dimension(code: &EvaluationCode) -> usize {
    code.dimension()
}

pub fn encode(code: &EvaluationCode, message: &[FElem]) -> Result<Vec<FElem>, CodeError> {
    code.encode(message)
}
