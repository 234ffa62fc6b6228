use alloc::vec;
use alloc::vec::Vec;

use super::{CodeError, EvaluationCode};
use crate::field::{FElem, FieldCtx};
use crate::matrix::Matrix;

/// Default cap on the number of messages enumerated.
pub const DEFAULT_DISTANCE_BUDGET: u128 = 100_000_000;

/// Exact minimum distance of the code by enumerating the message space.
pub fn brute_force_min_distance(code: &EvaluationCode, budget: u128) -> Result<usize, CodeError> {
    min_distance(code.ctx(), code.generator(), budget)
}

/// Exact minimum Hamming weight over the nonzero vectors of the row space of
/// `generator`.
///
/// The rows are first reduced to a basis of rank `r`; the budget applies to
/// `q^r`. Only messages whose leading nonzero coordinate is one are visited,
/// since scaling preserves weight.
pub fn min_distance(ctx: &FieldCtx, generator: &Matrix, budget: u128) -> Result<usize, CodeError> {
    let basis = generator.row_basis(ctx);
    let k = basis.rows();
    if k == 0 {
        return Err(CodeError::EmptyCode);
    }
    let q = ctx.size() as u128;
    let messages = (0..k).try_fold(1u128, |acc, _| acc.checked_mul(q));
    match messages {
        Some(m) if m <= budget => {}
        other => {
            return Err(CodeError::EnumerationBudgetExceeded {
                messages: other.unwrap_or(u128::MAX),
                budget,
            })
        }
    }

    let n = basis.cols();
    let scalars: Vec<FElem> = ctx.elements().collect();
    // partial[d] holds the codeword built from rows lead..d-1.
    let mut partial: Vec<Vec<FElem>> = vec![vec![FElem::ZERO; n]; k + 1];
    let mut best = n;
    for lead in 0..k {
        partial[lead + 1].copy_from_slice(basis.row(lead));
        best = best.min(search(ctx, &basis, &scalars, &mut partial, lead + 1, best));
    }
    Ok(best)
}

fn weight(v: &[FElem]) -> usize {
    v.iter().filter(|s| !s.is_zero()).count()
}

fn search(
    ctx: &FieldCtx,
    basis: &Matrix,
    scalars: &[FElem],
    partial: &mut [Vec<FElem>],
    depth: usize,
    mut best: usize,
) -> usize {
    if depth == basis.rows() {
        return best.min(weight(&partial[depth]));
    }
    for &c in scalars {
        let (head, tail) = partial.split_at_mut(depth + 1);
        let src = &head[depth];
        let dst = &mut tail[0];
        let row = basis.row(depth);
        for ((d, &s), &r) in dst.iter_mut().zip(src.iter()).zip(row.iter()) {
            *d = ctx.mul_add(s, c, r);
        }
        best = search(ctx, basis, scalars, partial, depth + 1, best);
        if best == 1 {
            break;
        }
    }
    best
}
