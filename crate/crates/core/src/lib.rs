//! Synthesis and verification of measurement-vented quantum adders.
//!
//! The adders compute `target += d + carry_in` for a classical constant `d`
//! using two or three clean ancillae. Intermediate carries are deleted by an
//! X-basis measurement followed by reset ("venting"); the phase this leaves
//! behind is discharged later by classically-conditioned Z gates on qubits
//! that hold the same carry in xor-form.
//!
//! - [`arith`]: bit-level reference arithmetic
//! - [`ir`]: the circuit representation, serialisation and diagrams
//! - [`builders`]: the adder constructions, offset binding and control
//! - [`sim`]: state-vector simulation and verification
//! - [`resources`]: gate counts and lints

pub mod arith;
pub mod builders;
pub mod error;
pub mod ir;
pub mod parallel;
pub mod resources;
pub mod sim;

pub use arith::{carry, carry_out, OffsetConstant};
pub use builders::{AdderSpec, BuilderId, CarryIn, VentLedger};
pub use error::{Error, Result};
pub use ir::Circuit;
