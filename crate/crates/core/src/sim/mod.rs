//! Real state-vector simulation of vented circuits.
//!
//! Qubit `i` is bit `i` of the basis index. Every gate in the IR is real, so
//! amplitudes are `f64`. Measurements split the run into branches, selected by a
//! [`BranchPolicy`]. Two backends share one driver: a dense state vector and a
//! signed basis state, which suffices for computational-basis inputs since X, Z
//! and venting map a basis state to a signed basis state.

mod resolve;
pub mod verify;

use crate::arith::{bit_at, OffsetConstant};
use crate::builders::effective_offset;
use crate::error::{Error, Result};
use crate::ir::{Circuit, GateKind};
use resolve::Resolved;

pub use crate::parallel::Execution;
pub use verify::{
    verify_builder, verify_circuit, BranchMode, Failure, FailureKind, InputSet, VerificationReport, VerifyOptions,
};

/// Branches with probability below this are treated as impossible.
pub const PROBABILITY_FLOOR: f64 = 1e-12;

/// Environment variable overriding [`SimConfig::default`]'s qubit budget.
pub const BUDGET_ENV: &str = "VENTADD_SIM_BUDGET";

pub const DEFAULT_QUBIT_BUDGET: usize = 22;
pub const DEFAULT_ENUMERATION_CAP: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SimConfig {
    /// Largest qubit count the dense backend accepts.
    pub max_qubits: usize,
    /// Largest measurement count [`BranchPolicy::EnumerateAll`] accepts.
    pub enumeration_cap: usize,
}

impl Default for SimConfig {
    fn default() -> Self {
        let max_qubits = std::env::var(BUDGET_ENV)
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .unwrap_or(DEFAULT_QUBIT_BUDGET);
        Self {
            max_qubits,
            enumeration_cap: DEFAULT_ENUMERATION_CAP,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BranchPolicy {
    /// Every measurement outcome sequence with nonzero probability, in
    /// lexicographic order of the records.
    EnumerateAll,
    /// `count` single-path runs; outcomes are a hash of `(seed, run, instruction)`.
    SeededSample { seed: u64, count: usize },
    /// One run with record `j` forced to `outcomes[j]`.
    Forced(Vec<bool>),
}

/// One branch of a dense run. `amplitudes` is normalised; `weight` is the branch probability.
#[derive(Clone, Debug, PartialEq)]
pub struct SimState {
    pub amplitudes: Vec<f64>,
    pub records: Vec<bool>,
    pub weight: f64,
}

/// One branch of a basis run: the state is `(-1)^negative |index>`.
#[derive(Clone, Debug, PartialEq)]
pub struct BasisBranch {
    pub index: u64,
    pub negative: bool,
    pub records: Vec<bool>,
    pub weight: f64,
}

/// The dense vector of the basis state `|index>` on `qubits` qubits.
pub fn basis_state(qubits: usize, index: u64) -> Vec<f64> {
    let mut v = vec![0.0; 1 << qubits];
    v[index as usize] = 1.0;
    v
}

/// Dense simulation from `initial` (length `2^qubits`).
///
/// `offset` supplies `d` for a symbolic circuit; for a bound circuit it may be
/// omitted or must match the bound value.
pub fn run(
    circuit: &Circuit,
    initial: &[f64],
    offset: Option<u64>,
    policy: &BranchPolicy,
    config: &SimConfig,
) -> Result<Vec<SimState>> {
    let p = Prepared::new(circuit, offset)?;
    p.run_dense(initial, policy, config)
}

/// Basis-state simulation from `|index>`. No dense budget applies.
pub fn run_basis(
    circuit: &Circuit,
    index: u64,
    offset: Option<u64>,
    policy: &BranchPolicy,
    config: &SimConfig,
) -> Result<Vec<BasisBranch>> {
    let p = Prepared::new(circuit, offset)?;
    p.run_basis(index, policy, config)
}

/// The ideal map `|x> -> |x + d + carry_in mod 2^n>` on an `n`-qubit state.
pub fn reference_unitary_apply(n: u32, d: &OffsetConstant, carry_in: bool, state: &[f64]) -> Result<Vec<f64>> {
    let dim = 1usize << n;
    if state.len() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            actual: state.len(),
        });
    }
    if d.width() != n {
        return Err(Error::WidthMismatch {
            circuit: n,
            offset: d.width(),
        });
    }
    let mut out = vec![0.0; dim];
    for (x, &a) in state.iter().enumerate() {
        out[crate::arith::reference_add(x as u64, d.value(), carry_in, n) as usize] = a;
    }
    Ok(out)
}

/// `|<a|b>|`.
pub fn overlap(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            expected: a.len(),
            actual: b.len(),
        });
    }
    Ok(a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>().abs())
}

/// True when normalised states `a` and `b` agree up to a sign: `|<a|b>| >= 1 - tol`.
pub fn equal_up_to_global_phase(a: &[f64], b: &[f64], tol: f64) -> Result<bool> {
    Ok(overlap(a, b)? >= 1.0 - tol)
}

/// splitmix64 finaliser.
pub(crate) fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn sampled_outcome(seed: u64, run: usize, instruction: usize) -> bool {
    mix64(mix64(seed ^ mix64(run as u64)) ^ instruction as u64) & 1 == 1
}

trait Backend: Clone {
    fn apply(&mut self, g: &Resolved);
    /// Post-measurement state for `outcome` on qubit `q`, and its probability.
    fn vent(&self, q: u32, outcome: bool) -> (Self, f64);
}

#[derive(Clone)]
struct Dense(Vec<f64>);

impl Backend for Dense {
    fn apply(&mut self, g: &Resolved) {
        let t = 1usize << g.target;
        let a = &mut self.0;
        match g.kind {
            GateKind::X => {
                for i in 0..a.len() {
                    if i & t == 0 && g.fires(i as u64) {
                        a.swap(i, i | t);
                    }
                }
            }
            GateKind::Z => {
                for (i, v) in a.iter_mut().enumerate() {
                    if i & t != 0 && g.fires(i as u64) {
                        *v = -*v;
                    }
                }
            }
            GateKind::MeasureXReset => unreachable!("measurements are handled by the driver"),
        }
    }

    fn vent(&self, q: u32, outcome: bool) -> (Self, f64) {
        let t = 1usize << q;
        let sign = if outcome { -1.0 } else { 1.0 };
        let a = &self.0;
        let mut out = vec![0.0; a.len()];
        let mut p = 0.0;
        for i in (0..a.len()).filter(|i| i & t == 0) {
            let v = std::f64::consts::FRAC_1_SQRT_2 * (a[i] + sign * a[i | t]);
            out[i] = v;
            p += v * v;
        }
        if p > 0.0 {
            let s = p.sqrt().recip();
            out.iter_mut().for_each(|v| *v *= s);
        }
        (Dense(out), p)
    }
}

#[derive(Clone, Copy)]
struct Signed {
    index: u64,
    negative: bool,
}

impl Backend for Signed {
    fn apply(&mut self, g: &Resolved) {
        let t = 1u64 << g.target;
        if !g.fires(self.index) {
            return;
        }
        match g.kind {
            GateKind::X => self.index ^= t,
            GateKind::Z => self.negative ^= self.index & t != 0,
            GateKind::MeasureXReset => unreachable!("measurements are handled by the driver"),
        }
    }

    fn vent(&self, q: u32, outcome: bool) -> (Self, f64) {
        let v = bit_at(self.index, q);
        let next = Signed {
            index: self.index & !(1u64 << q),
            negative: self.negative ^ (outcome && v),
        };
        (next, 0.5)
    }
}

/// A validated circuit with its offset resolved, ready to run repeatedly.
pub(crate) struct Prepared<'a> {
    circuit: &'a Circuit,
    bits: Option<u64>,
    measurements: usize,
}

impl<'a> Prepared<'a> {
    pub(crate) fn new(circuit: &'a Circuit, offset: Option<u64>) -> Result<Self> {
        let violations = circuit.validate();
        if !violations.is_empty() {
            return Err(Error::InvalidCircuit(violations));
        }
        let bits = match (circuit.bound_offset(), offset) {
            (Some(bound), Some(d)) if bound != d => return Err(Error::OffsetMismatch { bound, supplied: d }),
            (Some(_), _) => None,
            (None, Some(d)) => {
                OffsetConstant::new(d, circuit.offset_width())?;
                Some(effective_offset(circuit, d))
            }
            (None, None) if circuit.is_symbolic() => return Err(Error::UnresolvedOffset),
            (None, None) => None,
        };
        let measurements = circuit
            .instructions()
            .iter()
            .filter(|i| i.kind == GateKind::MeasureXReset)
            .count();
        Ok(Self {
            circuit,
            bits,
            measurements,
        })
    }

    pub(crate) fn measurements(&self) -> usize {
        self.measurements
    }

    pub(crate) fn run_dense(
        &self,
        initial: &[f64],
        policy: &BranchPolicy,
        config: &SimConfig,
    ) -> Result<Vec<SimState>> {
        let q = self.circuit.qubit_count();
        if q > config.max_qubits {
            return Err(Error::BudgetExceeded {
                qubits: q,
                budget: config.max_qubits,
            });
        }
        if initial.len() != 1usize << q {
            return Err(Error::DimensionMismatch {
                expected: 1 << q,
                actual: initial.len(),
            });
        }
        let out = self.drive(Dense(initial.to_vec()), policy, config)?;
        Ok(out
            .into_iter()
            .map(|(s, records, weight)| SimState {
                amplitudes: s.0,
                records,
                weight,
            })
            .collect())
    }

    pub(crate) fn run_basis(&self, index: u64, policy: &BranchPolicy, config: &SimConfig) -> Result<Vec<BasisBranch>> {
        let q = self.circuit.qubit_count();
        if q > 63 {
            return Err(Error::BudgetExceeded { qubits: q, budget: 63 });
        }
        let init = Signed { index, negative: false };
        let out = self.drive(init, policy, config)?;
        Ok(out
            .into_iter()
            .map(|(s, records, weight)| BasisBranch {
                index: s.index,
                negative: s.negative,
                records,
                weight,
            })
            .collect())
    }

    /// Run unitary instructions from `pc` until the next measurement (returned) or the end.
    fn advance<B: Backend>(&self, state: &mut B, records: &[bool], mut pc: usize) -> Result<Option<usize>> {
        let bits = self.bits.map(|b| move |k: u32| bit_at(b, k));
        let bits_ref = bits.as_ref().map(|f| f as &dyn Fn(u32) -> bool);
        let ins = self.circuit.instructions();
        while pc < ins.len() {
            if ins[pc].kind == GateKind::MeasureXReset {
                return Ok(Some(pc));
            }
            if let Some(g) = Resolved::new(&ins[pc], records, bits_ref)? {
                state.apply(&g);
            }
            pc += 1;
        }
        Ok(None)
    }

    fn drive<B: Backend>(
        &self,
        init: B,
        policy: &BranchPolicy,
        config: &SimConfig,
    ) -> Result<Vec<(B, Vec<bool>, f64)>> {
        let ins = self.circuit.instructions();
        let mut done = Vec::new();
        match policy {
            BranchPolicy::EnumerateAll => {
                if self.measurements > config.enumeration_cap {
                    return Err(Error::EnumerationCap {
                        measurements: self.measurements,
                        cap: config.enumeration_cap,
                    });
                }
                let mut stack = vec![(0usize, init, Vec::new(), 1.0f64)];
                while let Some((pc, mut state, records, weight)) = stack.pop() {
                    match self.advance(&mut state, &records, pc)? {
                        None => done.push((state, records, weight)),
                        Some(m) => {
                            let q = ins[m].target.0;
                            // push 1 before 0 so the 0 branch is finished first
                            for outcome in [true, false] {
                                let (next, p) = state.vent(q, outcome);
                                if p > PROBABILITY_FLOOR {
                                    let mut r = records.clone();
                                    r.push(outcome);
                                    stack.push((m + 1, next, r, weight * p));
                                }
                            }
                        }
                    }
                }
            }
            BranchPolicy::SeededSample { seed, count } => {
                for run in 0..*count {
                    let pick = |m: usize, _: usize| Some(sampled_outcome(*seed, run, m));
                    done.push(self.single_path(&init, pick, false)?);
                }
            }
            BranchPolicy::Forced(outcomes) => {
                let pick = |_: usize, j: usize| outcomes.get(j).copied();
                done.push(self.single_path(&init, pick, true)?);
            }
        }
        Ok(done)
    }

    /// Follow one branch. `pick(instruction, record)` proposes an outcome; when
    /// it has zero probability a strict run fails and a sampled run flips it.
    fn single_path<B: Backend>(
        &self,
        init: &B,
        pick: impl Fn(usize, usize) -> Option<bool>,
        strict: bool,
    ) -> Result<(B, Vec<bool>, f64)> {
        let ins = self.circuit.instructions();
        let mut state = init.clone();
        let mut records = Vec::with_capacity(self.measurements);
        let mut weight = 1.0;
        let mut pc = 0;
        while let Some(m) = self.advance(&mut state, &records, pc)? {
            let q = ins[m].target.0;
            let want = pick(m, records.len()).ok_or(Error::ImpossibleBranch { instruction: m })?;
            let (mut next, mut p) = state.vent(q, want);
            let mut outcome = want;
            if p <= PROBABILITY_FLOOR {
                if strict {
                    return Err(Error::ImpossibleBranch { instruction: m });
                }
                outcome = !want;
                (next, p) = state.vent(q, outcome);
            }
            state = next;
            records.push(outcome);
            weight *= p;
            pc = m + 1;
        }
        Ok((state, records, weight))
    }
}
