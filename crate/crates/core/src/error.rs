use thiserror::Error;

use crate::ir::Violation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{builder} requires n >= {min}, got n = {n}")]
    WidthTooSmall { builder: &'static str, n: u32, min: u32 },
    #[error("register width {width} outside supported range 1..={max}")]
    WidthOutOfRange { width: u32, max: u32 },
    #[error("offset {value} does not fit in {width} bits")]
    OffsetOutOfRange { value: u64, width: u32 },
    #[error("offset width {offset} does not match circuit width {circuit}")]
    WidthMismatch { circuit: u32, offset: u32 },
    #[error("circuit is invalid: {}", format_violations(.0))]
    InvalidCircuit(Vec<Violation>),
    #[error("instruction {instruction} would need more than two controls after control substitution")]
    ControlPromotion { instruction: usize },
    #[error("circuit offset is already bound")]
    AlreadyBound,
    #[error("circuit is bound to offset {bound}, got {supplied}")]
    OffsetMismatch { bound: u64, supplied: u64 },
    #[error("circuit references offset bits but no offset was supplied")]
    UnresolvedOffset,
    #[error("circuit has {measurements} measurements, branch enumeration is capped at {cap}")]
    EnumerationCap { measurements: usize, cap: usize },
    #[error("circuit needs {qubits} qubits, simulation budget is {budget}")]
    BudgetExceeded { qubits: usize, budget: usize },
    #[error("state dimension {actual} does not match expected {expected}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("forced outcome at instruction {instruction} has zero probability")]
    ImpossibleBranch { instruction: usize },
    #[error("layout has no {0} span")]
    MissingSpan(&'static str),
    #[error("parse error: {0}")]
    Parse(String),
}

fn format_violations(v: &[Violation]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}
