use crate::error::Result;
use crate::ir::{GateKind, Instruction};

/// An instruction with its classical expressions evaluated for one branch.
pub(crate) struct Resolved {
    pub kind: GateKind,
    pub target: u32,
    ctrl_mask: u64,
    ctrl_want: u64,
    groups: Vec<(u64, bool)>,
}

impl Resolved {
    /// `None` when the classical condition is false.
    pub fn new(ins: &Instruction, records: &[bool], bits: Option<&dyn Fn(u32) -> bool>) -> Result<Option<Self>> {
        if let Some(cond) = &ins.condition {
            if !cond.eval(records, bits)? {
                return Ok(None);
            }
        }
        let mut ctrl_mask = 0;
        let mut ctrl_want = 0;
        for c in &ins.controls {
            let m = 1u64 << c.qubit.0;
            ctrl_mask |= m;
            if c.polarity.eval(records, bits)? {
                ctrl_want |= m;
            }
        }
        let mut groups = Vec::with_capacity(ins.parity.len());
        for p in &ins.parity {
            let m = p.qubits.iter().fold(0u64, |acc, q| acc | 1 << q.0);
            groups.push((m, p.polarity.eval(records, bits)?));
        }
        Ok(Some(Self {
            kind: ins.kind,
            target: ins.target.0,
            ctrl_mask,
            ctrl_want,
            groups,
        }))
    }

    pub fn fires(&self, index: u64) -> bool {
        index & self.ctrl_mask == self.ctrl_want
            && self
                .groups
                .iter()
                .all(|&(m, pol)| ((index & m).count_ones() & 1 == 1) == pol)
    }
}
