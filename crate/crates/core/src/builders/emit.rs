use crate::ir::{ClassicalExpr, Control, GateKind, Instruction, Qubit};

/// Accumulates instructions and hands out measurement record indices.
#[derive(Default)]
pub(crate) struct Emitter {
    pub ops: Vec<Instruction>,
    records: u32,
}

impl Emitter {
    pub fn into_ops(self) -> Vec<Instruction> {
        self.ops
    }

    /// `X` on `q` when `cond` holds. Dropped when `cond` is identically 0.
    pub fn x_if(&mut self, q: Qubit, cond: ClassicalExpr) {
        match cond.as_constant() {
            Some(false) => {}
            Some(true) => self.ops.push(Instruction::gate(GateKind::X, q)),
            None => self.ops.push(Instruction::gate(GateKind::X, q).conditioned(cond)),
        }
    }

    pub fn z_if(&mut self, q: Qubit, cond: ClassicalExpr) {
        match cond.as_constant() {
            Some(false) => {}
            Some(true) => self.ops.push(Instruction::gate(GateKind::Z, q)),
            None => self.ops.push(Instruction::gate(GateKind::Z, q).conditioned(cond)),
        }
    }

    pub fn cx(&mut self, c: Control, t: Qubit) {
        self.ops.push(Instruction::gate(GateKind::X, t).controlled(c));
    }

    pub fn ccx(&mut self, a: Control, b: Control, t: Qubit) {
        self.ops
            .push(Instruction::gate(GateKind::X, t).controlled(a).controlled(b));
    }

    /// Measure `q` in the X basis and reset it; returns the record index.
    pub fn vent(&mut self, q: Qubit) -> u32 {
        let r = self.records;
        self.records += 1;
        self.ops.push(Instruction::measure_x_reset(q, r));
        r
    }
}

/// `d_k` as an expression.
pub(crate) fn d(k: u32) -> ClassicalExpr {
    ClassicalExpr::offset_bit(k)
}

/// `1 ^ d_k`: the polarity of a control that is inverted when `d_k` is set.
pub(crate) fn inv(k: u32) -> ClassicalExpr {
    ClassicalExpr::one().xor_offset(k)
}
