use hlrc_core::code::{build_code, CodeSpec, EvaluationCode};
use hlrc_core::field::FElem;
use hlrc_core::recovery::{
    recover_global, recover_lower, recover_middle, repair, repair_groups, AccessLog, Level,
    ReceivedWord, RecoveryError, RepairPolicy, RepairSession,
};
use hlrc_core::sim::{
    build_layout, inject_failures, random_message, simulate_repair, FailureScenario, LayoutPolicy,
    RepairMode, ScenarioKind,
};
use proptest::prelude::*;

fn word(code: &EvaluationCode, seed: u64) -> Vec<FElem> {
    code.encode(&random_message(code, seed)).unwrap()
}

fn ex4() -> EvaluationCode {
    build_code(&CodeSpec::ex4(3, 2, 2).unwrap()).unwrap()
}

#[test]
fn lower_repair_reads_only_its_fiber() {
    let code = ex4();
    let w = word(&code, 1);
    for pos in (0..code.len()).step_by(5) {
        let mut rx = ReceivedWord::from_codeword(&w);
        rx.erase(pos);
        let log = AccessLog::new(&rx);
        assert_eq!(recover_lower(&code, &log, pos).unwrap(), w[pos]);
        let fiber = &code.fibers()[code.positions()[pos].fiber];
        assert_eq!(log.read_count(), code.lower_degree() + 1);
        assert!(log.reads().iter().all(|i| fiber.contains(i) && *i != pos));
    }
}

#[test]
fn middle_repair_reads_only_its_group() {
    let code = ex4();
    let w = word(&code, 2);
    for (gid, g) in code.groups().iter().enumerate() {
        let mut rx = ReceivedWord::from_codeword(&w);
        rx.erase(g.positions[0]);
        rx.erase(g.positions[1]);
        let log = AccessLog::new(&rx);
        let fills = recover_middle(&code, &log, gid).unwrap();
        assert_eq!(
            fills,
            vec![
                (g.positions[0], w[g.positions[0]]),
                (g.positions[1], w[g.positions[1]])
            ]
        );
        assert!(log.reads().iter().all(|i| g.positions.contains(i)));
    }
}

#[test]
fn escalation_stops_at_the_first_sufficient_level() {
    let code = ex4();
    let w = word(&code, 3);
    let fiber = code.fibers()[4].clone();
    let mut rx = ReceivedWord::from_codeword(&w);
    for &i in &fiber {
        rx.erase(i);
    }
    let (v, trace) = repair(&code, &rx, fiber[0], RepairPolicy::default()).unwrap();
    assert_eq!(v, w[fiber[0]]);
    assert_eq!(trace.level(), Some(Level::Middle));
    assert_eq!(trace.attempts.len(), 2);
    assert!(!trace.attempts[0].success);

    let lower_only = RepairPolicy {
        max_level: Level::Lower,
    };
    match repair(&code, &rx, fiber[0], lower_only) {
        Err(RecoveryError::UnrecoverablePosition { trace, .. }) => {
            assert_eq!(trace.attempts.len(), 1);
        }
        other => panic!("expected failure, got {other:?}"),
    }
}

#[test]
fn global_solve_handles_what_middle_cannot() {
    let code = ex4();
    let w = word(&code, 4);
    // Two erasures in every column of the first curve leave no column
    // that lower interpolation can finish.
    let mut rx = ReceivedWord::from_codeword(&w);
    for f in code
        .fibers()
        .iter()
        .filter(|f| code.positions()[f[0]].group == 0)
    {
        rx.erase(f[0]);
        rx.erase(f[1]);
    }
    assert!(recover_middle(&code, &rx, 0).is_err());
    assert_eq!(recover_global(&code, &rx).unwrap(), w);
}

#[test]
fn too_many_erasures_are_ambiguous() {
    let code = ex4();
    let w = word(&code, 5);
    let mut rx = ReceivedWord::from_codeword(&w);
    for i in 0..code.len() - code.dimension() + 1 {
        rx.erase(i);
    }
    assert!(matches!(
        recover_global(&code, &rx),
        Err(RecoveryError::AmbiguousErasurePattern { .. })
    ));
}

#[test]
fn argument_errors() {
    let code = ex4();
    let rx = ReceivedWord::from_codeword(&word(&code, 6));
    assert!(matches!(
        repair(&code, &rx, 0, RepairPolicy::default()),
        Err(RecoveryError::NotErased(0))
    ));
    assert!(matches!(
        repair(&code, &rx, code.len(), RepairPolicy::default()),
        Err(RecoveryError::PositionOutOfRange(_))
    ));
    let short = ReceivedWord::new(vec![None; 3]);
    assert!(matches!(
        recover_global(&code, &short),
        Err(RecoveryError::LengthMismatch { .. })
    ));
}

#[test]
fn repair_groups_are_nested_for_curve_codes() {
    let code = ex4();
    for pos in 0..code.len() {
        let [lower, middle] = repair_groups(&code, pos);
        assert!(lower.positions.iter().all(|i| middle.positions.contains(i)));
    }
}

#[test]
fn ex5_repairs_on_both_planes() {
    let code = build_code(&CodeSpec::ex5(3, 5, 2).unwrap()).unwrap();
    let w = word(&code, 7);
    for gid in 0..code.groups().len() {
        let g = &code.groups()[gid];
        let mut rx = ReceivedWord::from_codeword(&w);
        for &i in &code.fibers()[code.positions()[g.positions[0]].fiber] {
            rx.erase(i);
        }
        let session = RepairSession::new(&code, &rx);
        let (v, trace) = session
            .repair(g.positions[0], RepairPolicy::default())
            .unwrap();
        assert_eq!(v, w[g.positions[0]]);
        assert_eq!(trace.level(), Some(Level::Middle));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    // Raising the policy ceiling never loses a repair, never changes a
    // value, and never lowers the level that succeeds.
    #[test]
    fn level_monotonicity(seed in any::<u64>(), count in 1usize..30) {
        let code = ex4();
        let w = word(&code, seed);
        let layout = build_layout(&code, code.len(), LayoutPolicy::Striped).unwrap();
        let sc = FailureScenario { kind: ScenarioKind::RandomSymbols, count, seed };
        let rx = inject_failures(&layout, &code, &sc, &w).unwrap();
        let mut prev: Option<Vec<Option<Level>>> = None;
        for level in Level::ALL {
            let report = simulate_repair(&code, &layout, &rx, RepairPolicy { max_level: level }, RepairMode::Parallel).unwrap();
            prop_assert_eq!(report.mismatches(&w), 0);
            let levels: Vec<Option<Level>> = report.per_position.iter().map(|r| r.trace.level()).collect();
            if let Some(prev) = &prev {
                for (a, b) in prev.iter().zip(&levels) {
                    if let Some(a) = a {
                        prop_assert_eq!(Some(*a), *b);
                    }
                }
            }
            prev = Some(levels);
        }
    }

    #[test]
    fn sequential_mode_repairs_at_least_as_much(seed in any::<u64>(), count in 1usize..40) {
        let code = ex4();
        let w = word(&code, seed);
        let layout = build_layout(&code, code.len(), LayoutPolicy::Striped).unwrap();
        let sc = FailureScenario { kind: ScenarioKind::RandomSymbols, count, seed };
        let rx = inject_failures(&layout, &code, &sc, &w).unwrap();
        let policy = RepairPolicy { max_level: Level::Middle };
        let par = simulate_repair(&code, &layout, &rx, policy, RepairMode::Parallel).unwrap();
        let seq = simulate_repair(&code, &layout, &rx, policy, RepairMode::Sequential).unwrap();
        prop_assert!(seq.totals.recovered >= par.totals.recovered);
        prop_assert_eq!(seq.mismatches(&w), 0);
    }
}
