use proptest::prelude::*;
use ventadd::ir::lower_parity_controls;
use ventadd::resources::{count, count_builder, linearity_check, DEFAULT_SPREAD_BOUND};
use ventadd::{AdderSpec, BuilderId};

/// Implementation-pinned Toffoli counts at n = 16. These come from this
/// construction, not from any published constant.
const GOLDEN_TOFFOLIS_N16: [(BuilderId, usize); 4] = [
    (BuilderId::Stream, 15),
    (BuilderId::CarryXor, 29),
    (BuilderId::Add2c, 42),
    (BuilderId::Add3c, 56),
];

#[test]
fn golden_counts_at_16() {
    for (b, t) in GOLDEN_TOFFOLIS_N16 {
        let r = count_builder(b, &AdderSpec::new(16), None, false).unwrap();
        assert_eq!(r.toffoli_count, t, "{b}");
        assert_eq!(r.measure_count, if b == BuilderId::CarryXor { 0 } else { 14 }, "{b}");
    }
}

#[test]
fn closed_forms() {
    for n in 4..=40 {
        let t = |b| count_builder(b, &AdderSpec::new(n), None, false).unwrap().toffoli_count;
        assert_eq!(t(BuilderId::Stream), n as usize - 1);
        assert_eq!(t(BuilderId::CarryXor), 2 * n as usize - 3);
        assert_eq!(t(BuilderId::Add2c), 3 * n as usize - 6);
        // the closed form settles from n = 6; below that the halves are too short to vent
        let add3c = match n {
            4 => 9,
            5 => 14,
            _ => 4 * n as usize - if n % 2 == 0 { 8 } else { 7 },
        };
        assert_eq!(t(BuilderId::Add3c), add3c, "n={n}");
    }
}

#[test]
fn ancilla_budgets() {
    let r = count_builder(BuilderId::Add2c, &AdderSpec::new(6), None, false).unwrap();
    assert_eq!((r.clean_ancillae, r.dirty_ancillae), (2, 4));
    assert!(r.toffoli_count <= 3 * 6);
    let r = count_builder(BuilderId::Add3c, &AdderSpec::new(9), None, false).unwrap();
    assert_eq!((r.clean_ancillae, r.dirty_ancillae), (3, 0));
}

#[test]
fn linearity_examples() {
    assert!(linearity_check(BuilderId::Stream, 2..=24, 1, DEFAULT_SPREAD_BOUND)
        .unwrap()
        .passed());
    assert!(linearity_check(BuilderId::Add3c, 4..=24, 4, DEFAULT_SPREAD_BOUND)
        .unwrap()
        .passed());
    let wrong = linearity_check(BuilderId::Add3c, 4..=24, 3, DEFAULT_SPREAD_BOUND).unwrap();
    assert!(!wrong.passed());
    assert_eq!(wrong.spread, 20 - 1);
}

#[test]
fn report_serializes() {
    let r = count_builder(BuilderId::Add3c, &AdderSpec::new(9), Some(279), true).unwrap();
    let v: serde_json::Value = serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
    assert_eq!(v["builder"], "add3c");
    assert_eq!(v["offset"], 279);
    assert_eq!(v["controlled"], true);
}

proptest! {
    #[test]
    fn binding_only_removes_gates(which in 0usize..4, n in 4u32..=20, raw_d in any::<u64>(), controlled in any::<bool>()) {
        let b = BuilderId::ALL[which];
        let spec = AdderSpec::new(n);
        let sym = count_builder(b, &spec, None, false).unwrap();
        let bound = count_builder(b, &spec, Some(raw_d & ((1 << n) - 1)), controlled).unwrap();
        prop_assert_eq!(bound.toffoli_count, sym.toffoli_count);
        prop_assert!(bound.x_count <= sym.x_count);
        prop_assert!(bound.cx_count <= sym.cx_count + sym.x_count);
        prop_assert_eq!(bound.clean_ancillae, sym.clean_ancillae);
        prop_assert_eq!(bound.dirty_ancillae, sym.dirty_ancillae);
    }

    #[test]
    fn toffolis_survive_lowering(which in 0usize..4, n in 4u32..=12, raw_d in any::<u64>()) {
        let b = BuilderId::ALL[which];
        let c = b.synthesize(&AdderSpec::new(n), Some(raw_d & ((1 << n) - 1)), true).unwrap().circuit;
        prop_assert_eq!(count(&lower_parity_controls(&c)).toffoli_count, count(&c).toffoli_count);
    }
}
