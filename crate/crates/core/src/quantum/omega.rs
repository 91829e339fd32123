use crate::error::Result;
use crate::matrix::{spectral_norm, trace_norm};
use crate::quantum::family::ObservableFamily;

#[derive(Clone, Debug, PartialEq)]
pub struct OmegaBound {
    /// ‖C_y‖ per y.
    pub omegas: Vec<f64>,
    /// dim · Σ ω_y.
    pub bound: f64,
}

/// Upper bound on tr[Δ] over Bob observables, tight for flat spectra.
pub fn omega_bound(family: &ObservableFamily) -> Result<OmegaBound> {
    let omegas = (1..=family.n())
        .map(|y| Ok(spectral_norm(&family.alice_combination(y)?)))
        .collect::<Result<Vec<f64>>>()?;
    let bound = family.dim() as f64 * omegas.iter().sum::<f64>();
    Ok(OmegaBound { omegas, bound })
}

/// max over ±1 Bob observables of tr[Δ] = Σ_y ‖C_y‖₁.
pub fn attainable_trace(family: &ObservableFamily) -> Result<f64> {
    (1..=family.n())
        .map(|y| Ok(trace_norm(&family.alice_combination(y)?)))
        .sum()
}
