use ventadd::builders::bind_offset;
use ventadd::ir::GateKind;
use ventadd::parallel::Execution;
use ventadd::sim::{verify_builder, verify_circuit, BranchMode, FailureKind, InputSet, SimConfig, VerifyOptions};
use ventadd::{AdderSpec, BuilderId, CarryIn, Error, OffsetConstant};

#[test]
fn streaming_width_two() {
    let r = verify_builder(BuilderId::Stream, 2, &VerifyOptions::default()).unwrap();
    assert!(r.passed());
    assert_eq!(r.cases, 4 * 4 * 2);
}

#[test]
fn three_clean_width_four_exhaustive() {
    let opts = VerifyOptions {
        branches: BranchMode::Enumerate,
        ..VerifyOptions::default()
    };
    let r = verify_builder(BuilderId::Add3c, 4, &opts).unwrap();
    assert!(r.passed(), "{:?}", r.failures);
    assert_eq!(r.cases, 16 * 16 * 2);
    assert!(r.min_overlap.unwrap() > 1.0 - 1e-9);
}

#[test]
fn controlled_variants_verify() {
    for builder in BuilderId::ALL {
        for mode in [CarryIn::Qubit, CarryIn::Const(false), CarryIn::Const(true)] {
            let opts = VerifyOptions {
                carry_in: mode,
                controlled: true,
                ..VerifyOptions::default()
            };
            let n = builder.min_n().max(4);
            let r = verify_builder(builder, n, &opts).unwrap();
            assert!(r.passed(), "{builder} {mode:?}: {:?}", r.failures);
        }
    }
}

#[test]
fn dropped_z_names_a_branch() {
    let sym = BuilderId::Add3c.build(&AdderSpec::new(4)).unwrap().circuit;
    let c = bind_offset(&sym, &OffsetConstant::new(5, 4).unwrap()).unwrap();
    let z = c
        .instructions()
        .iter()
        .position(|i| i.kind == GateKind::Z && i.condition.is_some())
        .unwrap();
    let opts = VerifyOptions::default();
    assert!(verify_circuit(&c, BuilderId::Add3c, 5, None, &opts).unwrap().passed());
    let r = verify_circuit(&c.without_instruction(z), BuilderId::Add3c, 5, None, &opts).unwrap();
    assert!(!r.passed());
    // basis states cannot see a phase; only the superposition check fails
    assert!(r.failures.iter().all(|f| f.kind == FailureKind::Phase));
    assert!(r.failures[0].detail.starts_with("branch r="));
}

#[test]
fn dropped_toffoli_is_a_function_failure() {
    let sym = BuilderId::Add2c.build(&AdderSpec::new(4)).unwrap().circuit;
    let c = bind_offset(&sym, &OffsetConstant::new(11, 4).unwrap()).unwrap();
    let t = c.instructions().iter().position(|i| i.control_arity() == 2).unwrap();
    let r = verify_circuit(
        &c.without_instruction(t),
        BuilderId::Add2c,
        11,
        None,
        &VerifyOptions::default(),
    )
    .unwrap();
    assert!(!r.passed());
    assert!(r.failures[0].input.is_some());
    assert!(matches!(
        r.failures[0].kind,
        FailureKind::Function | FailureKind::Ancilla
    ));
}

#[test]
fn sequential_and_parallel_agree() {
    let base = VerifyOptions {
        dirty: InputSet::Sample(5),
        phase_offsets: InputSet::Sample(3),
        seed: 11,
        ..VerifyOptions::default()
    };
    let seq = verify_builder(
        BuilderId::Add2c,
        5,
        &VerifyOptions {
            execution: Execution::Sequential,
            ..base.clone()
        },
    )
    .unwrap();
    let par = verify_builder(
        BuilderId::Add2c,
        5,
        &VerifyOptions {
            execution: Execution::Parallel,
            ..base
        },
    )
    .unwrap();
    assert_eq!(seq, par);
    assert!(seq.passed());
}

#[test]
fn seeded_sampling_is_reproducible() {
    // 9 vents, so Auto samples branches
    let opts = VerifyOptions {
        offsets: Some(vec![0, 1234, 2047]),
        targets: InputSet::Sample(24),
        phase_offsets: InputSet::Sample(0),
        seed: 5,
        ..VerifyOptions::default()
    };
    let a = verify_builder(BuilderId::Stream, 11, &opts).unwrap();
    let b = verify_builder(BuilderId::Stream, 11, &opts).unwrap();
    assert_eq!(a, b);
    assert!(a.passed());
    assert_eq!(a.cases, 3 * 24 * 2);
    assert_eq!(a.branches, a.cases * 64);
    assert_eq!(a.phase_branches, 0);
}

#[test]
fn budget_is_enforced() {
    let err = verify_builder(BuilderId::Stream, 30, &VerifyOptions::default()).unwrap_err();
    assert_eq!(
        err,
        Error::BudgetExceeded {
            qubits: 33,
            budget: SimConfig::default().max_qubits
        }
    );
    let tight = VerifyOptions {
        config: SimConfig {
            max_qubits: 8,
            enumeration_cap: 12,
        },
        ..VerifyOptions::default()
    };
    assert!(matches!(
        verify_builder(BuilderId::Add3c, 5, &tight),
        Err(Error::BudgetExceeded { qubits: 9, budget: 8 })
    ));
}

#[test]
fn enumeration_cap_surfaces() {
    let opts = VerifyOptions {
        branches: BranchMode::Enumerate,
        offsets: Some(vec![3]),
        targets: InputSet::Sample(2),
        phase_offsets: InputSet::Sample(0),
        config: SimConfig {
            max_qubits: 22,
            enumeration_cap: 4,
        },
        ..VerifyOptions::default()
    };
    assert!(matches!(
        verify_builder(BuilderId::Stream, 8, &opts),
        Err(Error::EnumerationCap {
            measurements: 6,
            cap: 4
        })
    ));
}
