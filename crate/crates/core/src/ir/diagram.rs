//! Plain-text column diagrams: one row per qubit, one column per instruction.
//!
//! Cell glyphs:
//! - `X`, `Z` gate targets; a condition is appended as `X^d3` or `Z^(1^r2)`
//! - `M>r4` X-basis measure-and-reset into record 4
//! - `@` control on |1>, `o` control on |0>; an inversion is appended, `@^d0`
//! - `Pa`, `Pb` members of the first and second parity group (same suffix rule)
//! - `|` wire crossed by the column's vertical line

use super::circuit::{Circuit, GateKind};
use super::expr::ClassicalExpr;

pub fn render(circuit: &Circuit) -> String {
    let q = circuit.qubit_count();
    let labels: Vec<String> = (0..q as u32).map(|i| circuit.layout.label(super::Qubit(i))).collect();
    let label_w = labels.iter().map(String::len).max().unwrap_or(0);
    let mut rows: Vec<String> = labels.iter().map(|l| format!("{l:>label_w$}: ")).collect();

    for ins in &circuit.instructions {
        let mut cells: Vec<Option<String>> = vec![None; q];
        let target = match ins.kind {
            GateKind::MeasureXReset => format!("M>r{}", ins.record.unwrap_or(0)),
            kind => format!("{}{}", kind.name(), suffix(ins.condition.as_ref())),
        };
        cells[ins.target.index()] = Some(target);
        for c in &ins.controls {
            cells[c.qubit.index()] = Some(control_glyph("@", "o", &c.polarity));
        }
        for (g, p) in ins.parity.iter().enumerate() {
            let tag = if g == 0 { "Pa" } else { "Pb" };
            for (i, m) in p.qubits.iter().enumerate() {
                let glyph = if i == 0 {
                    control_glyph(tag, &tag.to_lowercase(), &p.polarity)
                } else {
                    tag.to_string()
                };
                cells[m.index()] = Some(glyph);
            }
        }
        let used: Vec<usize> = (0..q).filter(|&i| cells[i].is_some()).collect();
        let (lo, hi) = (used[0], *used.last().unwrap());
        let width = cells.iter().flatten().map(String::len).max().unwrap_or(1);
        for (i, row) in rows.iter_mut().enumerate() {
            let cell = match &cells[i] {
                Some(s) => s.clone(),
                None if i > lo && i < hi => "|".to_string(),
                None => String::new(),
            };
            row.push('-');
            row.push_str(&cell);
            row.push_str(&"-".repeat(width - cell.len()));
        }
    }
    let mut out = String::new();
    for row in rows {
        out.push_str(row.trim_end());
        out.push_str("-\n");
    }
    out
}

fn suffix(cond: Option<&ClassicalExpr>) -> String {
    match cond {
        None => String::new(),
        Some(e) if e.is_atomic() => format!("^{e}"),
        Some(e) => format!("^({e})"),
    }
}

fn control_glyph(on: &str, off: &str, polarity: &ClassicalExpr) -> String {
    let base = if polarity.constant_part() { on } else { off };
    if polarity.is_constant() {
        return base.to_string();
    }
    let free = polarity.clone().xor_constant(polarity.constant_part());
    format!("{base}{}", suffix(Some(&free)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ir::{Control, Instruction, Qubit, RegisterLayout, Role};

    #[test]
    fn renders_rows_per_qubit() {
        let layout = RegisterLayout::sequential(&[(Role::Clean, 1), (Role::CarryIn, 1), (Role::Target, 2)]);
        let ins = vec![
            Instruction::gate(GateKind::X, Qubit(3)).conditioned(ClassicalExpr::offset_bit(1)),
            Instruction::gate(GateKind::X, Qubit(0))
                .controlled(Control::with_polarity(Qubit(1), ClassicalExpr::one().xor_offset(0)))
                .controlled(Control::on(Qubit(2))),
            Instruction::measure_x_reset(Qubit(0), 0),
        ];
        let text = render(&Circuit::new(layout, ins, 2));
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 4);
        assert!(lines[0].starts_with(" _clean0: "));
        assert!(lines[0].contains("X") && lines[0].contains("M>r0"));
        assert!(lines[1].starts_with("carry_in: ") && lines[1].contains("@^d0"));
        assert!(lines[3].contains("X^d1"));
    }
}
