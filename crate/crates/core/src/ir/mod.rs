//! Gate-level circuit representation shared by the builders, the simulator and
//! the resource counter.

mod circuit;
pub mod diagram;
mod expr;
mod lower;
pub mod serial;

pub use circuit::{
    Circuit, Control, GateKind, Instruction, ParityControl, Qubit, RegisterLayout, Role, Span, Violation, ViolationKind,
};
pub use expr::ClassicalExpr;
pub use lower::lower_parity_controls;
