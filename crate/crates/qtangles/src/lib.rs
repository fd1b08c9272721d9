//! Tangles and monogamy analysis for few-qubit pure states.
//!
//! The crate computes one-, two-, three-, and four-tangles of pure states
//! from polynomial invariants of the state coefficients, verifies the
//! monogamy constraints tying them together, classifies four-qubit states
//! by which tangle kinds survive, and simulates a CNOT entanglement-
//! transfer circuit. See the `examples/` directory for one runnable
//! example per capability; the `qtangles` binary exposes the same
//! operations as subcommands.

pub mod analysis;
pub mod error;
pub mod fonts;
pub mod invariants;
pub mod monogamy;
pub mod qstate;
pub mod selftest;
pub mod spectral;
pub mod tangles;
pub mod transfer;
pub mod zoo;

pub use error::{Error, Result};
pub use qstate::{DensityMatrix, PureState, QubitSubset};
pub use tangles::{RoofOptions, TangleReport, DEFAULT_SEED};
