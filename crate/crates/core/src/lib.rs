//! Parity-oblivious random access code games.
//!
//! Noncontextual bounds, classical strategy search, explicit Pauli-observable
//! quantum strategies, see-saw optimization, an entanglement-assisted variant
//! and a Mach-Zehnder parametrization of the three-bit encodings.

pub mod classical;
pub mod entangled;
pub mod error;
pub mod game;
pub mod interferometer;
pub mod matrix;
pub mod quantum;

pub use error::{Error, Result};
pub use game::{BitString, Channel, Decoder, Game, ParitySet};
pub use matrix::{ComplexMatrix, HermitianOperator, C64};
