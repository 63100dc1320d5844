//! Versioned JSON document format for circuits.
//!
//! ```text
//! { "version": 1, "n": 6, "offset": 43, "carry_in_const": null,
//!   "layout": [{"name": "clean", "start": 0, "len": 2}, ...],
//!   "instructions": [{"kind": "X", "target": 3,
//!                     "qcontrols": [{"qubit": 2, "polarity": "1^d0"}],
//!                     "parity_groups": [{"qubits": [1, 9], "polarity": "1"}],
//!                     "condition": "r3", "record": null}, ...] }
//! ```
//! Expressions use the `1^r3^d5` text form of [`ClassicalExpr`].

use serde::{Deserialize, Serialize};

use super::circuit::{Circuit, Control, GateKind, Instruction, ParityControl, Qubit, RegisterLayout, Role, Span};
use super::expr::ClassicalExpr;
use crate::error::{Error, Result};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct CircuitDoc {
    version: u32,
    n: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    offset: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    carry_in_const: Option<u8>,
    layout: Vec<SpanDoc>,
    instructions: Vec<InstructionDoc>,
}

#[derive(Serialize, Deserialize)]
struct SpanDoc {
    name: String,
    start: u32,
    len: u32,
}

#[derive(Serialize, Deserialize)]
struct InstructionDoc {
    kind: String,
    target: u32,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    qcontrols: Vec<ControlDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    parity_groups: Vec<ParityDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    condition: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    record: Option<u32>,
}

#[derive(Serialize, Deserialize)]
struct ControlDoc {
    qubit: u32,
    polarity: String,
}

#[derive(Serialize, Deserialize)]
struct ParityDoc {
    qubits: Vec<u32>,
    polarity: String,
}

pub fn to_json(circuit: &Circuit) -> String {
    let doc = CircuitDoc {
        version: FORMAT_VERSION,
        n: circuit.offset_width,
        offset: circuit.offset,
        carry_in_const: circuit.carry_in_const.map(u8::from),
        layout: circuit
            .layout
            .spans()
            .iter()
            .map(|s| SpanDoc {
                name: s.role.name().to_string(),
                start: s.start,
                len: s.len,
            })
            .collect(),
        instructions: circuit.instructions.iter().map(instruction_doc).collect(),
    };
    serde_json::to_string_pretty(&doc).expect("circuit documents always serialize")
}

fn instruction_doc(ins: &Instruction) -> InstructionDoc {
    InstructionDoc {
        kind: ins.kind.name().to_string(),
        target: ins.target.0,
        qcontrols: ins
            .controls
            .iter()
            .map(|c| ControlDoc {
                qubit: c.qubit.0,
                polarity: c.polarity.to_string(),
            })
            .collect(),
        parity_groups: ins
            .parity
            .iter()
            .map(|p| ParityDoc {
                qubits: p.qubits.iter().map(|q| q.0).collect(),
                polarity: p.polarity.to_string(),
            })
            .collect(),
        condition: ins.condition.as_ref().map(ToString::to_string),
        record: ins.record,
    }
}

/// Parse a circuit document. Only the syntax is checked here; run
/// [`Circuit::validate`] for structural checks.
pub fn from_json(text: &str) -> Result<Circuit> {
    let doc: CircuitDoc = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    if doc.version != FORMAT_VERSION {
        return Err(Error::Parse(format!(
            "unsupported circuit format version {}",
            doc.version
        )));
    }
    let spans = doc
        .layout
        .into_iter()
        .map(|s| {
            let role = Role::from_name(&s.name).ok_or_else(|| Error::Parse(format!("unknown span {:?}", s.name)))?;
            Ok(Span {
                role,
                start: s.start,
                len: s.len,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let instructions = doc
        .instructions
        .into_iter()
        .map(parse_instruction)
        .collect::<Result<Vec<_>>>()?;
    let carry_in_const = match doc.carry_in_const {
        None => None,
        Some(0) => Some(false),
        Some(1) => Some(true),
        Some(v) => return Err(Error::Parse(format!("carry_in_const must be 0 or 1, got {v}"))),
    };
    Ok(Circuit {
        layout: RegisterLayout::from_spans(spans),
        instructions,
        offset_width: doc.n,
        offset: doc.offset,
        carry_in_const,
    })
}

fn parse_instruction(doc: InstructionDoc) -> Result<Instruction> {
    let kind = match doc.kind.as_str() {
        "X" => GateKind::X,
        "Z" => GateKind::Z,
        "MeasureXReset" => GateKind::MeasureXReset,
        other => return Err(Error::Parse(format!("unknown instruction kind {other:?}"))),
    };
    Ok(Instruction {
        kind,
        target: Qubit(doc.target),
        controls: doc
            .qcontrols
            .into_iter()
            .map(|c| Ok(Control::with_polarity(Qubit(c.qubit), c.polarity.parse()?)))
            .collect::<Result<_>>()?,
        parity: doc
            .parity_groups
            .into_iter()
            .map(|p| {
                Ok(ParityControl {
                    qubits: p.qubits.into_iter().map(Qubit).collect(),
                    polarity: p.polarity.parse()?,
                })
            })
            .collect::<Result<_>>()?,
        condition: doc.condition.map(|s| s.parse::<ClassicalExpr>()).transpose()?,
        record: doc.record,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_unknown_version_and_kind() {
        let bad_version = r#"{"version": 9, "n": 2, "layout": [], "instructions": []}"#;
        assert!(matches!(from_json(bad_version), Err(Error::Parse(_))));
        let bad_kind = r#"{"version": 1, "n": 2, "layout": [{"name":"target","start":0,"len":2}],
            "instructions": [{"kind": "H", "target": 0}]}"#;
        assert!(matches!(from_json(bad_kind), Err(Error::Parse(_))));
    }

    #[test]
    fn minimal_document() {
        let text = r#"{"version": 1, "n": 2, "layout": [{"name":"target","start":0,"len":2}],
            "instructions": [{"kind": "X", "target": 1, "qcontrols": [{"qubit": 0, "polarity": "1^d0"}]}]}"#;
        let c = from_json(text).unwrap();
        assert!(c.validate().is_empty());
        assert!(c.is_symbolic());
        assert_eq!(from_json(&to_json(&c)).unwrap(), c);
    }
}
