//! Quantum strategies: observable families, encodings, Δ operators and see-saw search.

mod delta;
mod encoding;
mod family;
mod omega;
mod pauli;
mod seesaw;
mod strategy;

pub use delta::{assemble_delta, success_from_trace, DeltaReport};
pub use encoding::{states_from_family, EncodingSet, MeasurementSet, QuantumStrategy};
pub use family::{
    aliased_family_4_3, build_family, Block, BlockMember, Character, NamedObservable,
    ObservableFamily,
};
pub use omega::{attainable_trace, omega_bound, OmegaBound};
pub use pauli::{parse_pauli, pauli, pauli_string, Pauli};
pub use seesaw::{
    alice_sweep, optimal_alice, seesaw, BasesAnsatz, RestartResult, SeesawOutcome,
};
pub use strategy::{optimal_bob, success_probability, BOB_ZERO_TOL};

use crate::error::Result;
use crate::game::Game;

/// The explicit family's strategy: family states with normalized Bob observables.
pub fn explicit_strategy(game: &Game) -> Result<(ObservableFamily, QuantumStrategy)> {
    let family = build_family(game.n(), game.g())?;
    let encodings = states_from_family(&family, game)?;
    let measurements = MeasurementSet::from_observables(&family.normalized_bobs()?)?;
    let strategy = QuantumStrategy::new(encodings, measurements)?;
    Ok((family, strategy))
}
