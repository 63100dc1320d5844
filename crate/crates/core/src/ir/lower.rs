use super::circuit::{Circuit, Control, GateKind, Instruction};

/// Rewrite every parity-control group as CNOT conjugation onto a pivot qubit.
///
/// For a group `{p, q1, .., qk}` the gate is preceded by `CX(qi -> p)` for each
/// other member, controlled on `p` with the group's polarity, and followed by
/// the same CNOTs in reverse. The pivot is the group's first qubit that the
/// instruction does not use elsewhere. Classical conditions on the gate are
/// left on the gate itself; the fan-in CNOTs are unconditional, so the
/// rewrite is an exact identity on every branch.
///
/// The input is assumed valid; see [`Circuit::validate`].
pub fn lower_parity_controls(circuit: &Circuit) -> Circuit {
    let mut out = Vec::with_capacity(circuit.instructions.len());
    for ins in &circuit.instructions {
        if ins.parity.is_empty() {
            out.push(ins.clone());
            continue;
        }
        let mut fan = Vec::new();
        let mut gate = Instruction {
            parity: Vec::new(),
            ..ins.clone()
        };
        for (g, group) in ins.parity.iter().enumerate() {
            let pivot = ins
                .parity_pivot(g)
                .expect("parity group without a free pivot; validate the circuit first");
            for &q in group.qubits.iter().filter(|&&q| q != pivot) {
                fan.push(Instruction::gate(GateKind::X, pivot).controlled(Control::on(q)));
            }
            gate.controls
                .push(Control::with_polarity(pivot, group.polarity.clone()));
        }
        out.extend(fan.iter().cloned());
        out.push(gate);
        out.extend(fan.into_iter().rev());
    }
    Circuit {
        instructions: out,
        ..circuit.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ir::{ClassicalExpr, ParityControl, Qubit, RegisterLayout, Role};

    #[test]
    fn no_parity_is_identity() {
        let layout = RegisterLayout::sequential(&[(Role::Target, 2)]);
        let c = Circuit::new(
            layout,
            vec![Instruction::gate(GateKind::X, Qubit(1)).controlled(Control::on(Qubit(0)))],
            2,
        );
        assert_eq!(lower_parity_controls(&c), c);
    }

    #[test]
    fn single_group_fans_onto_first_qubit() {
        let layout = RegisterLayout::sequential(&[(Role::Target, 3)]);
        let ins = Instruction::gate(GateKind::X, Qubit(2)).parity_controlled(ParityControl {
            qubits: vec![Qubit(0), Qubit(1)],
            polarity: ClassicalExpr::one(),
        });
        let lowered = lower_parity_controls(&Circuit::new(layout, vec![ins], 3));
        let cx10 = Instruction::gate(GateKind::X, Qubit(0)).controlled(Control::on(Qubit(1)));
        assert_eq!(
            lowered.instructions(),
            &[
                cx10.clone(),
                Instruction::gate(GateKind::X, Qubit(2)).controlled(Control::on(Qubit(0))),
                cx10,
            ]
        );
    }

    #[test]
    fn pivot_skips_shared_qubits() {
        let layout = RegisterLayout::sequential(&[(Role::Target, 4)]);
        let ins = Instruction::gate(GateKind::X, Qubit(3))
            .parity_controlled(ParityControl {
                qubits: vec![Qubit(2), Qubit(0)],
                polarity: ClassicalExpr::one(),
            })
            .parity_controlled(ParityControl {
                qubits: vec![Qubit(2), Qubit(1)],
                polarity: ClassicalExpr::zero(),
            });
        assert_eq!(ins.parity_pivot(0), Some(Qubit(0)));
        assert_eq!(ins.parity_pivot(1), Some(Qubit(1)));
        let lowered = lower_parity_controls(&Circuit::new(layout, vec![ins], 4));
        assert_eq!(lowered.instructions().len(), 5);
        assert_eq!(lowered.instructions()[2].controls.len(), 2);
    }
}
