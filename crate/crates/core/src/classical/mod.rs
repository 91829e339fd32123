//! Classical and ontological analysis.

mod fourier;
mod ontic;
mod search;

pub use fourier::{fourier, po_via_fourier, FourierTable};
pub use ontic::{ontic_max, CorrelationSpec, CorrelationTerm, OnticMax, ProductConstraint};
pub use search::{
    forwarding_strategy, majority_decoder, search_po_deterministic, DeterministicStrategy,
    SearchMode, SearchOutcome,
};
