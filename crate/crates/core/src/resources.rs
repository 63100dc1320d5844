//! Gate counts, ancilla budgets, depth and structural lints.

use std::fmt::Write as _;

use serde::Serialize;

use crate::builders::{AdderSpec, BuilderId};
use crate::error::{Error, Result};
use crate::ir::{Circuit, GateKind, Role};

/// Counts for one circuit. On a symbolic circuit every offset-conditioned gate
/// is counted, so the numbers are the worst case over `d`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ResourceReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub builder: Option<BuilderId>,
    pub n: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub offset: Option<u64>,
    pub controlled: bool,
    /// Gates with two controls; a parity control counts as one.
    pub toffoli_count: usize,
    pub cx_count: usize,
    pub cz_count: usize,
    pub x_count: usize,
    pub z_count: usize,
    pub measure_count: usize,
    pub clean_ancillae: u32,
    pub dirty_ancillae: u32,
    pub qubits: usize,
    pub depth: usize,
}

pub fn count(circuit: &Circuit) -> ResourceReport {
    let mut r = ResourceReport {
        builder: None,
        n: circuit.offset_width(),
        offset: circuit.bound_offset(),
        controlled: circuit.layout().span(Role::Control).is_some(),
        toffoli_count: 0,
        cx_count: 0,
        cz_count: 0,
        x_count: 0,
        z_count: 0,
        measure_count: 0,
        clean_ancillae: circuit.layout().len_of(Role::Clean),
        dirty_ancillae: circuit.layout().len_of(Role::Dirty),
        qubits: circuit.qubit_count(),
        depth: depth(circuit),
    };
    for ins in circuit.instructions() {
        let slot = match (ins.kind, ins.control_arity()) {
            (GateKind::MeasureXReset, _) => &mut r.measure_count,
            (_, 2) => &mut r.toffoli_count,
            (GateKind::X, 1) => &mut r.cx_count,
            (GateKind::Z, 1) => &mut r.cz_count,
            (GateKind::X, _) => &mut r.x_count,
            (GateKind::Z, _) => &mut r.z_count,
        };
        *slot += 1;
    }
    r
}

/// Count the symbolic circuit of `builder`, or its bound or controlled form at `offset`.
pub fn count_builder(
    builder: BuilderId,
    spec: &AdderSpec,
    offset: Option<u64>,
    controlled: bool,
) -> Result<ResourceReport> {
    let s = builder.synthesize(spec, offset, controlled)?;
    Ok(ResourceReport {
        builder: Some(builder),
        ..count(&s.circuit)
    })
}

/// Greedy ASAP layering on qubit overlap. Classical dependencies on records
/// are not tracked.
pub fn depth(circuit: &Circuit) -> usize {
    let mut free = vec![0usize; circuit.qubit_count()];
    let mut depth = 0;
    for ins in circuit.instructions() {
        let layer = ins.touched().map(|q| free[q.index()]).max().unwrap_or(0) + 1;
        for q in ins.touched() {
            free[q.index()] = layer;
        }
        depth = depth.max(layer);
    }
    depth
}

/// How well `toffoli_count = slope * n + c` holds over a range of widths.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FitReport {
    pub builder: BuilderId,
    pub slope: i64,
    /// `(n, toffoli_count, toffoli_count - slope * n)`.
    pub points: Vec<(u32, usize, i64)>,
    pub spread: i64,
    pub bound: i64,
}

impl FitReport {
    pub fn passed(&self) -> bool {
        self.spread <= self.bound
    }
}

pub const DEFAULT_SPREAD_BOUND: i64 = 16;

/// Fit Toffoli counts of `builder` at the worst-case offset `d = 2^n - 1` over
/// `ns` against `slope`; [`BuilderId::slope`] is the nominal one.
pub fn linearity_check(
    builder: BuilderId,
    ns: impl IntoIterator<Item = u32>,
    slope: i64,
    bound: i64,
) -> Result<FitReport> {
    let mut points = Vec::new();
    for n in ns {
        let worst = crate::arith::mask(n);
        let t = count_builder(builder, &AdderSpec::new(n), Some(worst), false)?.toffoli_count;
        points.push((n, t, t as i64 - slope * n as i64));
    }
    let lo = points.iter().map(|p| p.2).min().unwrap_or(0);
    let hi = points.iter().map(|p| p.2).max().unwrap_or(0);
    Ok(FitReport {
        builder,
        slope,
        points,
        spread: hi - lo,
        bound,
    })
}

/// Indices of instructions that target the carry-in qubit.
pub fn carry_in_targets(circuit: &Circuit) -> Result<Vec<usize>> {
    let span = circuit
        .layout()
        .span(Role::CarryIn)
        .ok_or(Error::MissingSpan("carry_in"))?;
    Ok(circuit
        .instructions()
        .iter()
        .enumerate()
        .filter(|(_, i)| span.contains(i.target))
        .map(|(k, _)| k)
        .collect())
}

/// True when the carry-in qubit is only ever used as a control.
pub fn lint_carry_in_control_only(circuit: &Circuit) -> Result<bool> {
    Ok(carry_in_targets(circuit)?.is_empty())
}

/// Counts over a range of widths, one row per `n`.
pub fn sweep(
    builder: BuilderId,
    ns: impl IntoIterator<Item = u32>,
    template: &AdderSpec,
    offset: Option<u64>,
    controlled: bool,
) -> Result<Vec<ResourceReport>> {
    ns.into_iter()
        .map(|n| {
            let d = offset.map(|d| d & crate::arith::mask(n));
            count_builder(builder, &AdderSpec { n, ..*template }, d, controlled)
        })
        .collect()
}

/// Fixed-width text table of reports.
pub fn format_table(rows: &[ResourceReport]) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{:<9} {:>3} {:>8} {:>5} {:>5} {:>5} {:>5} {:>5} {:>5} {:>5} {:>6} {:>6}",
        "builder", "n", "toffoli", "cx", "cz", "x", "z", "vents", "clean", "dirty", "qubits", "depth"
    );
    for r in rows {
        let _ = writeln!(
            s,
            "{:<9} {:>3} {:>8} {:>5} {:>5} {:>5} {:>5} {:>5} {:>5} {:>5} {:>6} {:>6}",
            r.builder.map_or("-", BuilderId::name),
            r.n,
            r.toffoli_count,
            r.cx_count,
            r.cz_count,
            r.x_count,
            r.z_count,
            r.measure_count,
            r.clean_ancillae,
            r.dirty_ancillae,
            r.qubits,
            r.depth
        );
    }
    s
}
