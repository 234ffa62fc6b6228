use hlrc_core::code::{
    brute_force_min_distance, build_code, hierarchy_params, min_distance, CodeError, CodeSpec,
    EvaluationCode, DEFAULT_DISTANCE_BUDGET,
};
use hlrc_core::field::{FElem, FieldCtx};
use hlrc_core::geometry::{Family, SurfaceSpec};
use hlrc_core::matrix::Matrix;
use proptest::prelude::*;

fn message(code: &EvaluationCode, idx: &[u32]) -> Vec<FElem> {
    let q = code.ctx().size();
    idx.iter()
        .take(code.message_len())
        .map(|&i| code.ctx().element(i % q).unwrap())
        .collect()
}

// Direct evaluation of sum m_t x^a y^b z^c, independent of the generator.
fn evaluate_directly(code: &EvaluationCode, msg: &[FElem]) -> Vec<FElem> {
    let ctx = code.ctx();
    code.points()
        .iter()
        .map(|pt| {
            code.basis()
                .monomials()
                .iter()
                .zip(msg)
                .fold(FElem::ZERO, |acc, (&(a, b, c), &m)| {
                    let mono = ctx.mul(
                        ctx.mul(ctx.pow(pt.x, a as u64), ctx.pow(pt.y, b as u64)),
                        ctx.pow(pt.z, c as u64),
                    );
                    ctx.mul_add(acc, m, mono)
                })
        })
        .collect()
}

fn specs() -> Vec<CodeSpec> {
    vec![
        CodeSpec::ex4(3, 2, 2).unwrap(),
        CodeSpec::ex4(3, 3, 2).unwrap(),
        CodeSpec::ex5(3, 5, 2).unwrap(),
        CodeSpec::ex5_lambda(3, None, 4, 2, 2).unwrap(),
        CodeSpec::ex4(5, 3, 3).unwrap(),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn encoding_is_polynomial_evaluation(which in 0usize..5, idx in proptest::collection::vec(any::<u32>(), 160)) {
        let code = build_code(&specs()[which]).unwrap();
        let msg = message(&code, &idx);
        prop_assert_eq!(code.encode(&msg).unwrap(), evaluate_directly(&code, &msg));
    }

    #[test]
    fn puncturing_commutes_with_encoding(which in 0usize..5, idx in proptest::collection::vec(any::<u32>(), 160), keep in any::<u64>()) {
        let code = build_code(&specs()[which]).unwrap();
        let msg = message(&code, &idx);
        let word = code.encode(&msg).unwrap();
        let cols: Vec<usize> = (0..code.len()).filter(|i| keep >> (i % 64) & 1 == 1).collect();
        let sub = code.generator().select_columns(&cols);
        let punctured: Vec<FElem> = cols.iter().map(|&i| word[i]).collect();
        prop_assert_eq!(sub.left_mul(code.ctx(), &msg), punctured);
    }
}

#[test]
fn ex4_parameters_match_formulas() {
    let code = build_code(&CodeSpec::ex4(3, 2, 2).unwrap()).unwrap();
    assert_eq!(
        (code.len(), code.message_len(), code.dimension()),
        (96, 16, 16)
    );
    assert_eq!(
        code.describe(),
        "ex4 p=3 eta=3 rho1=2 rho2=2 rho3=3 n=96 k=16"
    );
    let params = hierarchy_params(code.spec()).unwrap();
    assert_eq!((params.n2, params.s2, params.d2), (3, 2, 2));
    assert_eq!((params.s1, params.d1, params.d_lower), (4, 4, 7));
    assert!(params.n1 <= 15);
}

#[test]
fn fibers_and_groups_partition_positions() {
    for spec in specs() {
        let code = build_code(&spec).unwrap();
        let mut seen = vec![0u8; code.len()];
        for f in code.fibers() {
            assert_eq!(f.len(), spec.p());
            for &i in f {
                seen[i] += 1;
            }
        }
        assert!(seen.iter().all(|&c| c == 1));
        let mut seen = vec![0u8; code.len()];
        for (gid, g) in code.groups().iter().enumerate() {
            for &i in &g.positions {
                seen[i] += 1;
                assert_eq!(code.positions()[i].group, gid);
            }
        }
        assert!(seen.iter().all(|&c| c == 1));
    }
}

#[test]
fn min_distance_agrees_with_naive_enumeration() {
    let code = build_code(&CodeSpec::ex4(3, 3, 3).unwrap()).unwrap();
    let ctx = code.ctx();
    let g = code.generator();
    let q = ctx.size();
    let mut naive = usize::MAX;
    let mut msg = vec![FElem::ZERO; g.rows()];
    for m in 1..q.pow(g.rows() as u32) {
        let mut r = m;
        for c in msg.iter_mut() {
            *c = ctx.element(r % q).unwrap();
            r /= q;
        }
        let w = g
            .left_mul(ctx, &msg)
            .iter()
            .filter(|v| !v.is_zero())
            .count();
        naive = naive.min(w);
    }
    assert_eq!(
        brute_force_min_distance(&code, DEFAULT_DISTANCE_BUDGET).unwrap(),
        naive
    );
}

#[test]
fn distance_is_invariant_under_column_permutation() {
    let code = build_code(&CodeSpec::ex4(3, 3, 3).unwrap()).unwrap();
    let n = code.len();
    let perm: Vec<usize> = (0..n).map(|i| (i * 7 + 3) % n).collect();
    let permuted = code.generator().select_columns(&perm);
    let d0 = min_distance(code.ctx(), code.generator(), DEFAULT_DISTANCE_BUDGET).unwrap();
    let d1 = min_distance(code.ctx(), &permuted, DEFAULT_DISTANCE_BUDGET).unwrap();
    assert_eq!(d0, d1);
}

#[test]
fn weight_distribution_survives_permutation() {
    let ctx = FieldCtx::new(3, 2).unwrap();
    let e = |i| ctx.element(i).unwrap();
    let g = Matrix::from_rows(vec![
        vec![e(1), e(0), e(2), e(4), e(0)],
        vec![e(0), e(1), e(3), e(0), e(7)],
    ]);
    let weights = |m: &Matrix| {
        let mut w = Vec::new();
        for a in ctx.elements() {
            for b in ctx.elements() {
                w.push(
                    m.left_mul(&ctx, &[a, b])
                        .iter()
                        .filter(|v| !v.is_zero())
                        .count(),
                );
            }
        }
        w.sort_unstable();
        w
    };
    let permuted = g.select_columns(&[4, 2, 0, 3, 1]);
    assert_eq!(weights(&g), weights(&permuted));
}

#[test]
fn enumeration_budget_is_enforced() {
    let code = build_code(&CodeSpec::ex4(3, 2, 2).unwrap()).unwrap();
    match brute_force_min_distance(&code, 1000) {
        Err(CodeError::EnumerationBudgetExceeded { .. }) => {}
        other => panic!("expected budget error, got {other:?}"),
    }
}

#[test]
fn invalid_specs_are_rejected() {
    assert!(CodeSpec::ex4(3, 1, 2).is_err());
    assert!(CodeSpec::ex4(3, 2, 4).is_err());
    assert!(CodeSpec::ex5(3, 10, 2).is_err());
}

#[test]
fn generic_construction_builds_on_named_surfaces() {
    let surface = SurfaceSpec::family(Family::Ex4, 3, None).unwrap();
    let spec = CodeSpec::generic(surface, 3, 2, 2, 3).unwrap();
    let code = build_code(&spec).unwrap();
    assert_eq!(code.dimension(), code.message_len());
    assert!(code.groups().iter().all(|g| g.positions.len() % 3 == 0));
}
