use crate::error::{Error, Result};
use crate::game::Game;
use crate::matrix::{sign_observable, trace_product, ComplexMatrix};
use crate::quantum::encoding::{EncodingSet, MeasurementSet, QuantumStrategy};

/// Eigenvalues of C_y above −tol count as zero and join Π⁰.
pub const BOB_ZERO_TOL: f64 = 1e-12;

/// (1/(2ⁿn)) Σ_{y,x} tr[ρ_x Π_y^{x_y}].
pub fn success_probability(strategy: &QuantumStrategy, game: &Game) -> Result<f64> {
    let enc = &strategy.encodings;
    let meas = &strategy.measurements;
    if enc.n() != game.n() || meas.len() != game.n() {
        return Err(Error::DimensionMismatch(format!(
            "strategy for n = {} with {} measurements, game n = {}",
            enc.n(),
            meas.len(),
            game.n()
        )));
    }
    let mut total = 0.0;
    for x in game.inputs() {
        let rho = enc.state(x);
        for y in 1..=game.n() {
            total += trace_product(rho, meas.element(y, x.bit(y)))?.re;
        }
    }
    Ok(total / (game.input_count() * game.n()) as f64)
}

/// Π⁰_y = (I + sign(C_y))/2.
pub fn optimal_bob(encodings: &EncodingSet, game: &Game) -> Result<MeasurementSet> {
    if encodings.n() != game.n() {
        return Err(Error::DimensionMismatch(format!(
            "encodings n = {}, game n = {}",
            encodings.n(),
            game.n()
        )));
    }
    let id = ComplexMatrix::identity(encodings.dim());
    let pairs = (1..=game.n())
        .map(|y| {
            let b = sign_observable(&encodings.correlation_operator(y), BOB_ZERO_TOL);
            ((&id + b.matrix()).scale_real(0.5), (&id - b.matrix()).scale_real(0.5))
        })
        .collect();
    MeasurementSet::new(pairs)
}
