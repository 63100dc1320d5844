//! Synthesis of the vented adders as symbolic-offset circuits.
//!
//! Every builder emits a circuit whose offset bits `d_k` are left symbolic.
//! [`bind_offset`] specialises a circuit to a concrete offset and
//! [`apply_control`] turns it into a controlled adder by routing every set
//! offset bit through a fresh control qubit.

mod carry_xor;
mod composite;
mod emit;
mod offset;
mod streaming;

use std::fmt;
use std::str::FromStr;

pub(crate) use offset::effective_offset;
pub use offset::{apply_control, bind_offset};

use crate::arith::MAX_WIDTH;
use crate::error::{Error, Result};
use crate::ir::{Circuit, RegisterLayout, Role};
use emit::Emitter;

/// How the carry input enters the addition.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum CarryIn {
    /// A quantum input qubit, used only as a control.
    #[default]
    Qubit,
    /// A classical bit folded into the offset. The `carry_in` wire is kept
    /// (its Toffolis are what make control substitution free) and must be |0>.
    Const(bool),
}

impl CarryIn {
    fn as_const(self) -> Option<bool> {
        match self {
            CarryIn::Qubit => None,
            CarryIn::Const(b) => Some(b),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct AdderSpec {
    pub n: u32,
    pub carry_in: CarryIn,
    /// Streaming adder only: xor each carry into a dirty span before venting it.
    pub merged_carry_xor: bool,
}

impl AdderSpec {
    pub fn new(n: u32) -> Self {
        Self {
            n,
            carry_in: CarryIn::Qubit,
            merged_carry_xor: false,
        }
    }

    pub fn carry_in(mut self, c: CarryIn) -> Self {
        self.carry_in = c;
        self
    }

    pub fn merged(mut self, on: bool) -> Self {
        self.merged_carry_xor = on;
        self
    }
}

/// Vent records in emission order, each paired with the carry index `k` it deleted.
///
/// A record that reads 1 leaves a pending phase flip by `c_k`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VentLedger {
    pub entries: Vec<(u32, u32)>,
}

impl VentLedger {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub(crate) fn max_carry_index(&self) -> u32 {
        self.entries.iter().map(|&(_, k)| k).max().unwrap_or(0)
    }

    /// The pending phase sign `(-1)^(sum of r_j * c_k)` for a branch.
    pub fn pending_phase_odd(&self, records: &[bool], carries: u64) -> bool {
        self.entries
            .iter()
            .filter(|&&(r, _)| records[r as usize])
            .fold(false, |acc, &(_, k)| acc ^ ((carries >> k) & 1 == 1))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BuilderId {
    Stream,
    CarryXor,
    Add2c,
    Add3c,
}

impl BuilderId {
    pub const ALL: [BuilderId; 4] = [
        BuilderId::Stream,
        BuilderId::CarryXor,
        BuilderId::Add2c,
        BuilderId::Add3c,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BuilderId::Stream => "stream",
            BuilderId::CarryXor => "carryxor",
            BuilderId::Add2c => "add2c",
            BuilderId::Add3c => "add3c",
        }
    }

    pub fn min_n(self) -> u32 {
        match self {
            BuilderId::Stream | BuilderId::CarryXor => 2,
            BuilderId::Add2c => 3,
            BuilderId::Add3c => 4,
        }
    }

    /// Toffolis per target bit.
    pub fn slope(self) -> i64 {
        match self {
            BuilderId::Stream => 1,
            BuilderId::CarryXor => 2,
            BuilderId::Add2c => 3,
            BuilderId::Add3c => 4,
        }
    }

    /// True for the builders whose output is a complete adder.
    pub fn is_adder(self) -> bool {
        !matches!(self, BuilderId::CarryXor)
    }

    pub fn build(self, spec: &AdderSpec) -> Result<Synthesized> {
        match self {
            BuilderId::Stream => {
                let (circuit, ledger) = build_streaming_adder(spec)?;
                Ok(Synthesized {
                    circuit,
                    ledger: Some(ledger),
                })
            }
            BuilderId::CarryXor => build_carry_xor(spec).map(Synthesized::plain),
            BuilderId::Add2c => build_adder_2clean_ndirty(spec).map(Synthesized::plain),
            BuilderId::Add3c => build_adder_3clean(spec).map(Synthesized::plain),
        }
    }

    /// Build, then either bind to `offset` or (with `controlled`) apply control at `offset`.
    pub fn synthesize(self, spec: &AdderSpec, offset: Option<u64>, controlled: bool) -> Result<Synthesized> {
        let built = self.build(spec)?;
        let circuit = match (offset, controlled) {
            (None, false) => built.circuit,
            (None, true) => return Err(Error::UnresolvedOffset),
            (Some(v), ctl) => {
                let d = crate::arith::OffsetConstant::new(v, spec.n)?;
                if ctl {
                    apply_control(&built.circuit, &d)?
                } else {
                    bind_offset(&built.circuit, &d)?
                }
            }
        };
        Ok(Synthesized {
            circuit,
            ledger: built.ledger,
        })
    }
}

impl fmt::Display for BuilderId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BuilderId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|b| b.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown builder {s:?}")))
    }
}

/// A builder's circuit plus, for the bare streaming adder, its vent ledger.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Synthesized {
    pub circuit: Circuit,
    pub ledger: Option<VentLedger>,
}

impl Synthesized {
    fn plain(circuit: Circuit) -> Self {
        Self { circuit, ledger: None }
    }
}

fn check_width(builder: BuilderId, n: u32) -> Result<()> {
    if n < builder.min_n() {
        return Err(Error::WidthTooSmall {
            builder: builder.name(),
            n,
            min: builder.min_n(),
        });
    }
    if n > MAX_WIDTH {
        return Err(Error::WidthOutOfRange {
            width: n,
            max: MAX_WIDTH,
        });
    }
    Ok(())
}

fn finish(layout: RegisterLayout, e: Emitter, spec: &AdderSpec) -> Circuit {
    Circuit::new(layout, e.into_ops(), spec.n).with_carry_in_const(spec.carry_in.as_const())
}

/// Vented streaming adder: 2 clean ancillae, `n - 1` Toffolis, `n - 2` vents.
///
/// Leaves `target = (target + d + carry_in) mod 2^n` with one pending phase flip
/// by `c_k` for every ledger entry whose record reads 1. With
/// `merged_carry_xor`, carries `c_1..c_{n-2}` are also xored into an `n - 2`
/// qubit dirty span.
pub fn build_streaming_adder(spec: &AdderSpec) -> Result<(Circuit, VentLedger)> {
    check_width(BuilderId::Stream, spec.n)?;
    let n = spec.n;
    let dirty_len = if spec.merged_carry_xor { n - 2 } else { 0 };
    let layout = RegisterLayout::sequential(&[
        (Role::Clean, 2),
        (Role::Dirty, dirty_len),
        (Role::CarryIn, 1),
        (Role::Target, n),
    ]);
    let clean = layout.qubits(Role::Clean);
    let dirty = layout.qubits(Role::Dirty);
    let target = layout.qubits(Role::Target);
    let carry_in = layout.qubits(Role::CarryIn)[0];

    let mut e = Emitter::default();
    let ledger = streaming::emit_streaming(
        &mut e,
        &streaming::StreamPlan {
            target: &target,
            carry_in,
            offset_base: 0,
            holders: [clean[0], clean[1]],
            carry_out: None,
            merged: spec.merged_carry_xor.then_some(dirty.as_slice()),
        },
    );
    Ok((finish(layout, e, spec), ledger))
}

/// `dirty ^= floor(carry(target, d, carry_in) / 2)` over `n - 1` dirty qubits.
///
/// Only target bits `0..n-1` influence the result; the top target bit is untouched.
pub fn build_carry_xor(spec: &AdderSpec) -> Result<Circuit> {
    check_width(BuilderId::CarryXor, spec.n)?;
    let n = spec.n;
    let layout = RegisterLayout::sequential(&[(Role::Dirty, n - 1), (Role::CarryIn, 1), (Role::Target, n)]);
    let dirty = layout.qubits(Role::Dirty);
    let target = layout.qubits(Role::Target);
    let carry_in = layout.qubits(Role::CarryIn)[0];
    let mut e = Emitter::default();
    carry_xor::emit_carry_xor(&mut e, &target[..n as usize - 1], carry_in, &dirty, 0, false);
    Ok(finish(layout, e, spec))
}

/// Adder with 2 clean and `n - 2` dirty ancillae, `3n - 6` Toffolis.
pub fn build_adder_2clean_ndirty(spec: &AdderSpec) -> Result<Circuit> {
    check_width(BuilderId::Add2c, spec.n)?;
    let n = spec.n;
    let layout = RegisterLayout::sequential(&[
        (Role::Clean, 2),
        (Role::Dirty, n - 2),
        (Role::CarryIn, 1),
        (Role::Target, n),
    ]);
    let clean = layout.qubits(Role::Clean);
    let dirty = layout.qubits(Role::Dirty);
    let target = layout.qubits(Role::Target);
    let carry_in = layout.qubits(Role::CarryIn)[0];
    let mut e = Emitter::default();
    composite::emit_adder_2clean(&mut e, &target, carry_in, [clean[0], clean[1]], &dirty);
    Ok(finish(layout, e, spec))
}

/// Adder with 3 clean ancillae and no dirty ones, `4n - O(1)` Toffolis.
pub fn build_adder_3clean(spec: &AdderSpec) -> Result<Circuit> {
    check_width(BuilderId::Add3c, spec.n)?;
    let layout = RegisterLayout::sequential(&[(Role::Clean, 3), (Role::CarryIn, 1), (Role::Target, spec.n)]);
    let clean = layout.qubits(Role::Clean);
    let target = layout.qubits(Role::Target);
    let carry_in = layout.qubits(Role::CarryIn)[0];
    let mut e = Emitter::default();
    composite::emit_adder_3clean(&mut e, &target, carry_in, [clean[0], clean[1], clean[2]]);
    Ok(finish(layout, e, spec))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ir::GateKind;

    #[test]
    fn width_minimums() {
        for b in BuilderId::ALL {
            let err = b.build(&AdderSpec::new(b.min_n() - 1)).unwrap_err();
            assert!(matches!(err, Error::WidthTooSmall { .. }), "{b}");
            assert!(b.build(&AdderSpec::new(b.min_n())).is_ok(), "{b}");
        }
        assert!(matches!(
            BuilderId::Stream.build(&AdderSpec::new(64)),
            Err(Error::WidthOutOfRange { .. })
        ));
    }

    #[test]
    fn layouts_match_ancilla_budgets() {
        let (s, ledger) = build_streaming_adder(&AdderSpec::new(6)).unwrap();
        assert_eq!(s.layout().len_of(Role::Clean), 2);
        assert_eq!(s.qubit_count(), 9);
        assert_eq!(ledger.len(), 4);
        assert_eq!(ledger.entries, vec![(0, 1), (1, 2), (2, 3), (3, 4)]);

        let c = build_carry_xor(&AdderSpec::new(6)).unwrap();
        assert_eq!(c.layout().len_of(Role::Dirty), 5);
        assert_eq!(c.record_count(), 0);

        let a2 = build_adder_2clean_ndirty(&AdderSpec::new(6)).unwrap();
        assert_eq!(a2.layout().len_of(Role::Clean), 2);
        assert_eq!(a2.layout().len_of(Role::Dirty), 4);

        let a3 = build_adder_3clean(&AdderSpec::new(9)).unwrap();
        assert_eq!(a3.layout().len_of(Role::Clean), 3);
        assert_eq!(a3.layout().len_of(Role::Dirty), 0);
        assert_eq!(a3.qubit_count(), 13);
    }

    #[test]
    fn builder_outputs_validate() {
        for b in BuilderId::ALL {
            for n in b.min_n()..=12 {
                let c = b.build(&AdderSpec::new(n)).unwrap().circuit;
                assert!(c.validate().is_empty(), "{b} n={n}: {:?}", c.validate());
            }
        }
        let c = build_adder_3clean(&AdderSpec::new(9)).unwrap();
        let bound = bind_offset(&c, &crate::arith::OffsetConstant::new(279, 9).unwrap()).unwrap();
        assert!(bound.validate().is_empty());
    }

    #[test]
    fn merged_streaming_writes_dirty_span() {
        let (c, _) = build_streaming_adder(&AdderSpec::new(6).merged(true)).unwrap();
        assert_eq!(c.layout().len_of(Role::Dirty), 4);
        let dirty = c.layout().span(Role::Dirty).unwrap().clone();
        let writes = c
            .instructions()
            .iter()
            .filter(|i| i.kind == GateKind::X && dirty.contains(i.target))
            .count();
        assert_eq!(writes, 4);
    }

    #[test]
    fn builder_names_round_trip() {
        for b in BuilderId::ALL {
            assert_eq!(b.name().parse::<BuilderId>().unwrap(), b);
        }
        assert!("cuccaro".parse::<BuilderId>().is_err());
    }

    #[test]
    fn pending_phase_parity() {
        let ledger = VentLedger {
            entries: vec![(0, 1), (1, 2)],
        };
        assert!(ledger.pending_phase_odd(&[true, false], 0b010));
        assert!(!ledger.pending_phase_odd(&[true, true], 0b110));
        assert!(!ledger.pending_phase_odd(&[false, false], 0b110));
    }
}
