use crate::error::{Error, Result};
use crate::game::Game;
use crate::matrix::{ComplexMatrix, HermitianOperator};
use crate::quantum::family::ObservableFamily;

#[derive(Clone, Debug)]
pub struct DeltaReport {
    /// Σ_y C_y·B_y; its trace is real but the operator need not be Hermitian.
    pub delta: ComplexMatrix,
    pub trace: f64,
}

/// Δ = Σ_y C_y B_y with C_y the family's signed member sums.
pub fn assemble_delta(game: &Game, family: &ObservableFamily, bobs: &[HermitianOperator]) -> Result<DeltaReport> {
    if family.n() != game.n() || family.g() != game.g() {
        return Err(Error::DimensionMismatch(format!(
            "family is for ({}, {}), game is ({}, {})",
            family.n(),
            family.g(),
            game.n(),
            game.g()
        )));
    }
    if bobs.len() != game.n() {
        return Err(Error::DimensionMismatch(format!("{} Bob observables for n = {}", bobs.len(), game.n())));
    }
    let mut delta = ComplexMatrix::zeros(family.dim(), family.dim());
    for (y, b) in bobs.iter().enumerate() {
        if b.dim() != family.dim() {
            return Err(Error::DimensionMismatch(format!("B_{} has dim {}", y + 1, b.dim())));
        }
        let dev = b.involution_deviation();
        if dev > 1e-10 {
            return Err(Error::NotInvolution(format!("B_{} (deviation {dev:.3e})", y + 1)));
        }
        let c = family.alice_combination(y + 1)?;
        delta = &delta + &c.matrix().matmul(b.matrix())?;
    }
    let trace = delta.trace().re;
    Ok(DeltaReport { delta, trace })
}

/// P = 1/2 + tr[Δ]/(2^{n+1} n).
pub fn success_from_trace(game: &Game, trace: f64) -> f64 {
    0.5 + trace / (2.0 * game.input_count() as f64 * game.n() as f64)
}
