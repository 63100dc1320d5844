//! Verification of synthesized circuits against a classical reference model.
//!
//! Two checks run per offset:
//! - function: every selected basis input, every selected branch, must land on
//!   exactly the basis state the model predicts, ancillae restored
//! - phase: a uniform superposition over all free registers must come out equal
//!   to the model's image up to a global sign, branch by branch
//!
//! The phase check is what catches missing or misplaced phase corrections,
//! since a per-input sign error is invisible on basis states.

use std::collections::BTreeSet;

use serde::Serialize;

use super::{mix64, BranchPolicy, Prepared, SimConfig};
use crate::arith::{carry, mask, reference_add, OffsetConstant};
use crate::builders::{apply_control, bind_offset, AdderSpec, BuilderId, CarryIn, VentLedger};
use crate::error::{Error, Result};
use crate::ir::{Circuit, Qubit, RegisterLayout, Role};
use crate::parallel::{map_reduce, Execution};

/// At most this many failures are kept in a report; the count is always exact.
pub const MAX_REPORTED_FAILURES: usize = 16;

/// `Auto` enumerates branches up to this many vents and samples beyond.
pub const AUTO_ENUMERATE_VENTS: usize = 8;
pub const AUTO_SAMPLE_BRANCHES: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InputSet {
    All,
    /// Up to this many distinct values, chosen by the seed.
    Sample(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BranchMode {
    Auto,
    Enumerate,
    Sample(usize),
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerifyOptions {
    pub carry_in: CarryIn,
    pub controlled: bool,
    /// Offsets to check; `None` means all `2^n`.
    pub offsets: Option<Vec<u64>>,
    pub targets: InputSet,
    pub dirty: InputSet,
    pub branches: BranchMode,
    /// Which of the checked offsets also get the superposition phase check.
    pub phase_offsets: InputSet,
    pub seed: u64,
    /// Minimum accepted overlap is `1 - tolerance`.
    pub tolerance: f64,
    pub config: SimConfig,
    pub execution: Execution,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            carry_in: CarryIn::Qubit,
            controlled: false,
            offsets: None,
            targets: InputSet::All,
            dirty: InputSet::All,
            branches: BranchMode::Auto,
            phase_offsets: InputSet::All,
            seed: 0,
            tolerance: 1e-9,
            config: SimConfig::default(),
            execution: Execution::default(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FailureKind {
    /// The target register holds the wrong value.
    Function,
    /// Target correct, but an ancilla, carry-in or control was not restored.
    Ancilla,
    /// Branch probabilities do not sum to one.
    Weight,
    /// The superposition check failed.
    Phase,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Failure {
    pub offset: u64,
    pub kind: FailureKind,
    /// The basis input, for function failures.
    pub input: Option<u64>,
    pub records: Vec<bool>,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct VerificationReport {
    /// Basis inputs checked.
    pub cases: u64,
    /// Branches checked across all basis inputs.
    pub branches: u64,
    /// Branches checked by the superposition test.
    pub phase_branches: u64,
    /// Lowest overlap seen by the superposition test.
    pub min_overlap: Option<f64>,
    pub failure_count: u64,
    pub failures: Vec<Failure>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.failure_count == 0
    }

    /// Associative and commutative, so parallel and sequential runs agree.
    pub fn merge(mut self, other: Self) -> Self {
        self.cases += other.cases;
        self.branches += other.branches;
        self.phase_branches += other.phase_branches;
        self.min_overlap = match (self.min_overlap, other.min_overlap) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        self.failure_count += other.failure_count;
        self.failures.extend(other.failures);
        self.failures.sort();
        self.failures.truncate(MAX_REPORTED_FAILURES);
        self
    }

    fn fail(&mut self, f: Failure) {
        self.failure_count += 1;
        self.failures.push(f);
        if self.failures.len() > 4 * MAX_REPORTED_FAILURES {
            self.failures.sort();
            self.failures.truncate(MAX_REPORTED_FAILURES);
        }
    }

    fn tidy(mut self) -> Self {
        self.failures.sort();
        self.failures.truncate(MAX_REPORTED_FAILURES);
        self
    }
}

fn merge_results(a: Result<VerificationReport>, b: Result<VerificationReport>) -> Result<VerificationReport> {
    Ok(a?.merge(b?))
}

/// Verify `builder` at width `n` over the offsets and inputs selected by `opts`.
///
/// Each offset gets its own bound (or controlled) circuit. The qubit budget in
/// `opts.config` applies up front, whether or not the phase check runs.
pub fn verify_builder(builder: BuilderId, n: u32, opts: &VerifyOptions) -> Result<VerificationReport> {
    let spec = AdderSpec::new(n).carry_in(opts.carry_in);
    let built = builder.build(&spec)?;
    let qubits = built.circuit.qubit_count() + opts.controlled as usize;
    if qubits > opts.config.max_qubits {
        return Err(Error::BudgetExceeded {
            qubits,
            budget: opts.config.max_qubits,
        });
    }
    let offsets = match &opts.offsets {
        Some(v) => v.clone(),
        None => (0..1u64 << n).collect(),
    };
    for &d in &offsets {
        OffsetConstant::new(d, n)?;
    }
    let phase_idx: BTreeSet<u64> = select(opts.phase_offsets, offsets.len() as u64, opts.seed ^ 0x5048_4153)
        .into_iter()
        .collect();
    let items: Vec<(usize, u64)> = offsets.iter().copied().enumerate().collect();
    let ledger = built.ledger.as_ref();
    map_reduce(
        opts.execution,
        &items,
        |&(i, d)| {
            let k = OffsetConstant::new(d, n)?;
            let circuit = if opts.controlled {
                apply_control(&built.circuit, &k)?
            } else {
                bind_offset(&built.circuit, &k)?
            };
            check_offset(&circuit, builder, d, ledger, opts, phase_idx.contains(&(i as u64)))
        },
        || Ok(VerificationReport::default()),
        merge_results,
    )
    .map(VerificationReport::tidy)
}

/// Verify one circuit as an instance of `builder` at offset `offset`.
///
/// The circuit may be symbolic, bound to `offset`, or controlled; the model
/// is read off its layout. `ledger` is required for the bare streaming adder,
/// whose vented phases the model then accounts for. The phase check runs
/// unless `opts.phase_offsets` is `Sample(0)`.
pub fn verify_circuit(
    circuit: &Circuit,
    builder: BuilderId,
    offset: u64,
    ledger: Option<&VentLedger>,
    opts: &VerifyOptions,
) -> Result<VerificationReport> {
    let phase = opts.phase_offsets != InputSet::Sample(0);
    check_offset(circuit, builder, offset, ledger, opts, phase).map(VerificationReport::tidy)
}

/// Classical image of the ideal operation on basis states.
struct Model<'a> {
    builder: BuilderId,
    n: u32,
    offset: u64,
    carry_const: Option<bool>,
    layout: &'a RegisterLayout,
    ledger: Option<&'a VentLedger>,
}

impl Model<'_> {
    /// The `(e, c)` actually added for a basis input: `target + e + c`.
    fn addend(&self, basis: u64) -> (u64, bool) {
        let on = self.layout.span(Role::Control).is_none() || self.layout.read(Role::Control, basis) == 1;
        match self.carry_const {
            Some(b) => {
                let e = (self.offset + b as u64) & mask(self.n);
                (if on { e } else { 0 }, false)
            }
            None => (
                if on { self.offset } else { 0 },
                self.layout.read(Role::CarryIn, basis) == 1,
            ),
        }
    }

    fn carries(&self, basis: u64) -> u64 {
        let (e, c) = self.addend(basis);
        carry(self.layout.read(Role::Target, basis), e, c, self.n).bits()
    }

    fn image(&self, basis: u64) -> u64 {
        let x = self.layout.read(Role::Target, basis);
        let (e, c) = self.addend(basis);
        let shifted = carry(x, e, c, self.n).shifted();
        let g = self.layout.read(Role::Dirty, basis);
        match self.builder {
            BuilderId::CarryXor => self.layout.write(Role::Dirty, g ^ (shifted & mask(self.n - 1)), basis),
            BuilderId::Stream if self.layout.len_of(Role::Dirty) > 0 => {
                let b = self.layout.write(Role::Target, reference_add(x, e, c, self.n), basis);
                self.layout.write(Role::Dirty, g ^ (shifted & mask(self.n - 2)), b)
            }
            _ => self.layout.write(Role::Target, reference_add(x, e, c, self.n), basis),
        }
    }

    fn phase_odd(&self, basis: u64, records: &[bool]) -> bool {
        self.ledger
            .is_some_and(|l| l.pending_phase_odd(records, self.carries(basis)))
    }
}

fn check_offset(
    circuit: &Circuit,
    builder: BuilderId,
    d: u64,
    ledger: Option<&VentLedger>,
    opts: &VerifyOptions,
    phase: bool,
) -> Result<VerificationReport> {
    if builder == BuilderId::Stream && ledger.is_none() {
        return Err(Error::Parse("the streaming adder model needs its vent ledger".into()));
    }
    let prepared = Prepared::new(circuit, Some(d))?;
    let layout = circuit.layout();
    let model = Model {
        builder,
        n: circuit.offset_width(),
        offset: d,
        carry_const: circuit.carry_in_const(),
        layout,
        ledger,
    };
    let n = model.n;
    let seed = mix64(opts.seed ^ mix64(d));
    let policy_for = |salt: u64| match opts.branches {
        BranchMode::Enumerate => BranchPolicy::EnumerateAll,
        BranchMode::Auto if prepared.measurements() <= AUTO_ENUMERATE_VENTS => BranchPolicy::EnumerateAll,
        BranchMode::Auto => BranchPolicy::SeededSample {
            seed: mix64(seed ^ salt),
            count: AUTO_SAMPLE_BRANCHES,
        },
        BranchMode::Sample(count) => BranchPolicy::SeededSample {
            seed: mix64(seed ^ salt),
            count,
        },
    };

    let targets = select(opts.targets, 1u64 << n, seed ^ 1);
    let dirty_len = layout.len_of(Role::Dirty);
    let dirty = select(opts.dirty, 1u64 << dirty_len, seed ^ 2);
    let carry_ins: &[u64] = if model.carry_const.is_some() { &[0] } else { &[0, 1] };
    let controls: &[u64] = if layout.span(Role::Control).is_some() {
        &[0, 1]
    } else {
        &[0]
    };

    let mut report = map_reduce(
        opts.execution,
        &targets,
        |&x| -> Result<VerificationReport> {
            let mut rep = VerificationReport::default();
            for &c in carry_ins {
                for &ctl in controls {
                    for &g in &dirty {
                        let mut b = layout.write(Role::Target, x, 0);
                        b = layout.write(Role::CarryIn, c, b);
                        b = layout.write(Role::Control, ctl, b);
                        b = layout.write(Role::Dirty, g, b);
                        check_basis(&prepared, &model, b, &policy_for(b), opts, &mut rep)?;
                    }
                }
            }
            Ok(rep)
        },
        || Ok(VerificationReport::default()),
        merge_results,
    )?;

    if phase {
        report = report.merge(check_phase(&prepared, &model, &policy_for(u64::MAX), opts)?);
    }
    Ok(report)
}

fn check_basis(
    prepared: &Prepared,
    model: &Model,
    basis: u64,
    policy: &BranchPolicy,
    opts: &VerifyOptions,
    rep: &mut VerificationReport,
) -> Result<()> {
    let branches = prepared.run_basis(basis, policy, &opts.config)?;
    let expected = model.image(basis);
    rep.cases += 1;
    rep.branches += branches.len() as u64;
    let mut total = 0.0;
    for br in &branches {
        total += br.weight;
        if br.index != expected {
            let wrong_target = model.layout.read(Role::Target, br.index) != model.layout.read(Role::Target, expected);
            rep.fail(Failure {
                offset: model.offset,
                kind: if wrong_target {
                    FailureKind::Function
                } else {
                    FailureKind::Ancilla
                },
                input: Some(basis),
                records: br.records.clone(),
                detail: format!("expected basis {expected:#x}, got {:#x}", br.index),
            });
        }
    }
    if *policy == BranchPolicy::EnumerateAll && (total - 1.0).abs() > opts.tolerance {
        rep.fail(Failure {
            offset: model.offset,
            kind: FailureKind::Weight,
            input: Some(basis),
            records: Vec::new(),
            detail: format!("branch weights sum to {total}"),
        });
    }
    Ok(())
}

/// Qubits of the registers a superposition input ranges over.
fn free_qubits(model: &Model) -> Vec<Qubit> {
    let mut roles = vec![Role::Target, Role::Dirty, Role::Control];
    if model.carry_const.is_none() {
        roles.push(Role::CarryIn);
    }
    roles.into_iter().flat_map(|r| model.layout.qubits(r)).collect()
}

/// Scatter the bits of `v` onto `qubits`.
fn deposit(v: u64, qubits: &[Qubit]) -> u64 {
    qubits
        .iter()
        .enumerate()
        .fold(0, |acc, (i, q)| acc | (((v >> i) & 1) << q.0))
}

fn check_phase(
    prepared: &Prepared,
    model: &Model,
    policy: &BranchPolicy,
    opts: &VerifyOptions,
) -> Result<VerificationReport> {
    let free = free_qubits(model);
    let dim = 1usize << model.layout.qubit_count();
    let support: Vec<u64> = (0..1u64 << free.len()).map(|v| deposit(v, &free)).collect();
    let amp = (support.len() as f64).sqrt().recip();
    let mut input = vec![0.0; dim];
    for &b in &support {
        input[b as usize] = amp;
    }
    let branches = prepared.run_dense(&input, policy, &opts.config)?;
    let mut rep = VerificationReport::default();
    for br in &branches {
        let mut reference = vec![0.0; dim];
        for &b in &support {
            let sign = if model.phase_odd(b, &br.records) { -amp } else { amp };
            reference[model.image(b) as usize] += sign;
        }
        let ov = super::overlap(&reference, &br.amplitudes)?;
        rep.phase_branches += 1;
        rep.min_overlap = Some(rep.min_overlap.map_or(ov, |m: f64| m.min(ov)));
        if ov < 1.0 - opts.tolerance {
            let named: String = br.records.iter().map(|&r| if r { '1' } else { '0' }).collect();
            rep.fail(Failure {
                offset: model.offset,
                kind: FailureKind::Phase,
                input: None,
                records: br.records.clone(),
                detail: format!("branch r={named}: overlap {ov:.12}"),
            });
        }
    }
    Ok(rep)
}

/// The values `0..space` (all), or up to `k` distinct ones chosen by `seed`.
fn select(set: InputSet, space: u64, seed: u64) -> Vec<u64> {
    match set {
        InputSet::Sample(k) if (k as u64) < space => {
            let mut chosen = BTreeSet::new();
            let mut i = 0u64;
            while chosen.len() < k {
                chosen.insert(mix64(seed ^ mix64(i)) % space);
                i += 1;
            }
            chosen.into_iter().collect()
        }
        _ => (0..space).collect(),
    }
}
