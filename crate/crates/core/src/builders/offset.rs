use crate::arith::{bit_at, mask, OffsetConstant};
use crate::error::{Error, Result};
use crate::ir::{Circuit, ClassicalExpr, Control, Instruction, ParityControl, Role};

/// The value the symbolic `d_k` bits stand for once `d` is supplied.
pub(crate) fn effective_offset(circuit: &Circuit, d: u64) -> u64 {
    match circuit.carry_in_const {
        Some(true) => (d + 1) & mask(circuit.offset_width),
        _ => d,
    }
}

fn check_bindable(circuit: &Circuit, d: &OffsetConstant) -> Result<u64> {
    if circuit.offset.is_some() {
        return Err(Error::AlreadyBound);
    }
    if d.width() != circuit.offset_width {
        return Err(Error::WidthMismatch {
            circuit: circuit.offset_width,
            offset: d.width(),
        });
    }
    Ok(effective_offset(circuit, d.value()))
}

/// Parity of the offset bits an expression references, and the expression with them removed.
fn split(e: &ClassicalExpr, eff: u64) -> (bool, ClassicalExpr) {
    let parity = e.offsets().iter().fold(false, |acc, &k| acc ^ bit_at(eff, k));
    (parity, e.bind_offsets(|_| false))
}

/// Specialise a symbolic circuit to the offset `d`.
///
/// Every `d_k` is replaced by its value. Gates whose condition becomes
/// identically false are removed, so gate counts track the bits of `d`.
pub fn bind_offset(circuit: &Circuit, d: &OffsetConstant) -> Result<Circuit> {
    let eff = check_bindable(circuit, d)?;
    let bits = |k: u32| bit_at(eff, k);
    let mut out = Vec::with_capacity(circuit.instructions.len());
    for ins in &circuit.instructions {
        let mut ins = ins.clone();
        for c in &mut ins.controls {
            c.polarity = c.polarity.bind_offsets(bits);
        }
        for p in &mut ins.parity {
            p.polarity = p.polarity.bind_offsets(bits);
        }
        if let Some(cond) = ins.condition.take() {
            let cond = cond.bind_offsets(bits);
            match cond.as_constant() {
                Some(false) => continue,
                Some(true) => {}
                None => ins.condition = Some(cond),
            }
        }
        out.push(ins);
    }
    Ok(Circuit {
        instructions: out,
        offset: Some(d.value()),
        ..circuit.clone()
    })
}

/// Controlled variant at offset `d`: `target += control * d` (plus the carry-in).
///
/// Each `d_k` with `d_k = 0` becomes 0 and each `d_k` with `d_k = 1` becomes a
/// use of a new `control` qubit appended to the layout:
/// - a gate conditioned on `d_k` gains `control` as a quantum control
/// - a control inverted by `d_k` becomes a parity control over itself and `control`
///
/// Neither rewrite adds a Toffoli as long as offset-conditioned gates carry no
/// other quantum controls, which holds for every builder here. A gate that
/// would end up with more than two controls is rejected.
///
/// A constant carry-in is folded into the offset and so is controlled as
/// well; a quantum `carry_in` qubit is not, and is still added when `control = 0`.
pub fn apply_control(circuit: &Circuit, d: &OffsetConstant) -> Result<Circuit> {
    let eff = check_bindable(circuit, d)?;
    if circuit.layout.span(Role::Control).is_some() {
        return Err(Error::AlreadyBound);
    }
    let mut layout = circuit.layout.clone();
    let ctrl = layout.push(Role::Control, 1);

    let mut out = Vec::with_capacity(circuit.instructions.len());
    for (idx, ins) in circuit.instructions.iter().enumerate() {
        let mut next = Instruction {
            controls: Vec::new(),
            parity: Vec::new(),
            condition: None,
            ..ins.clone()
        };
        for c in &ins.controls {
            let (via_control, pol) = split(&c.polarity, eff);
            if via_control {
                next.parity.push(ParityControl {
                    qubits: vec![c.qubit, ctrl],
                    polarity: pol,
                });
            } else {
                next.controls.push(Control::with_polarity(c.qubit, pol));
            }
        }
        for p in &ins.parity {
            let (via_control, pol) = split(&p.polarity, eff);
            let mut qubits = p.qubits.clone();
            if via_control {
                qubits.push(ctrl);
            }
            next.parity.push(ParityControl { qubits, polarity: pol });
        }
        if let Some(cond) = &ins.condition {
            let (via_control, rest) = split(cond, eff);
            if via_control {
                // rest ^ control == 1  <=>  control == !rest
                next.controls.push(Control::with_polarity(ctrl, rest.negate()));
            } else {
                match rest.as_constant() {
                    Some(false) => continue,
                    Some(true) => {}
                    None => next.condition = Some(rest),
                }
            }
        }
        if next.control_arity() > 2 {
            return Err(Error::ControlPromotion { instruction: idx });
        }
        out.push(next);
    }
    Ok(Circuit {
        layout,
        instructions: out,
        offset_width: circuit.offset_width,
        offset: Some(d.value()),
        carry_in_const: circuit.carry_in_const,
    })
}
