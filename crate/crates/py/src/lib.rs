//! Python bindings for the porac library.

use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use porac::classical::{
    forwarding_strategy, ontic_max, po_via_fourier, search_po_deterministic, CorrelationSpec, SearchMode,
};
use porac::entangled::{bell_value, phi_plus_pair, two_bit_protocol, TwoBitMode};
use porac::game::{po_satisfied, Channel};
use porac::interferometer::{match_encodings, standard_settings};
use porac::quantum::{self, MeasurementSet};
use porac::{ComplexMatrix, Error};

/// (value as numerator and denominator, encoding, decoder table).
type SearchResult = ((i64, i64), Vec<usize>, Vec<Vec<u8>>);

fn py_err(e: Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn rows(m: &ComplexMatrix) -> Vec<Vec<Complex64>> {
    (0..m.rows()).map(|i| (0..m.cols()).map(|j| m[(i, j)]).collect()).collect()
}

/// A game with n input bits and parity threshold g.
#[pyclass(frozen, skip_from_py_object, module = "porac_py")]
#[derive(Clone)]
struct Game {
    inner: porac::Game,
}

#[pymethods]
impl Game {
    #[new]
    fn new(n: usize, g: usize) -> PyResult<Self> {
        Ok(Self { inner: porac::Game::new(n, g).map_err(py_err)? })
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn g(&self) -> usize {
        self.inner.g()
    }

    /// (numerator, denominator) of the noncontextual bound.
    #[getter]
    fn pnc_bound(&self) -> (i64, i64) {
        let r = self.inner.pnc_bound();
        (*r.numer(), *r.denom())
    }

    fn parity_set(&self) -> Vec<String> {
        self.inner.parity_set().elements().iter().map(|s| s.to_string()).collect()
    }

    fn inputs(&self) -> Vec<String> {
        self.inner.inputs().map(|x| x.to_string()).collect()
    }

    /// Best deterministic parity-oblivious strategy: (value, encoding, decoder table).
    #[pyo3(signature = (mode = "exhaustive", budget = 100_000, seed = 0))]
    fn classical_search(&self, mode: &str, budget: u64, seed: u64) -> PyResult<SearchResult> {
        let mode: SearchMode = mode.parse().map_err(py_err)?;
        let out = search_po_deterministic(&self.inner, mode, budget, seed).map_err(py_err)?;
        Ok((
            (*out.value.numer(), *out.value.denom()),
            out.best.encoding().to_vec(),
            out.best.decoder().table().to_vec(),
        ))
    }

    fn forwarding_value(&self) -> PyResult<(i64, i64)> {
        let v = forwarding_strategy(&self.inner).value(&self.inner).map_err(py_err)?;
        Ok((*v.numer(), *v.denom()))
    }

    /// Max PO violation of a channel given as rows p(m|x), x in numeric order.
    fn po_violation(&self, channel: Vec<Vec<f64>>) -> PyResult<f64> {
        let m = channel.first().map_or(0, Vec::len);
        let ch = Channel::new(self.inner.n(), m, channel).map_err(py_err)?;
        Ok(po_satisfied(&ch, self.inner.parity_set(), 0.0).map_err(py_err)?.max_violation)
    }

    /// PO test through the Fourier characterization.
    #[pyo3(signature = (channel, tol = 1e-10))]
    fn po_via_fourier(&self, channel: Vec<Vec<f64>>, tol: f64) -> PyResult<bool> {
        let m = channel.first().map_or(0, Vec::len);
        let ch = Channel::new(self.inner.n(), m, channel).map_err(py_err)?;
        po_via_fourier(&ch, self.inner.parity_set(), tol).map_err(py_err)
    }

    fn __repr__(&self) -> String {
        format!("Game(n={}, g={})", self.inner.n(), self.inner.g())
    }
}

#[pyclass(frozen, module = "porac_py")]
struct QuantumStrategy {
    game: porac::Game,
    inner: quantum::QuantumStrategy,
}

#[pymethods]
impl QuantumStrategy {
    #[getter]
    fn dim(&self) -> usize {
        self.inner.encodings.dim()
    }

    fn success_probability(&self) -> PyResult<f64> {
        quantum::success_probability(&self.inner, &self.game).map_err(py_err)
    }

    fn po_violation(&self) -> PyResult<f64> {
        self.inner.encodings.po_violation(self.game.parity_set()).map_err(py_err)
    }

    /// Density matrix for input x, given as a bit string such as "011".
    fn state(&self, x: &str) -> PyResult<Vec<Vec<Complex64>>> {
        let x = x.parse().map_err(py_err)?;
        if self.game.inputs().all(|i| i != x) {
            return Err(PyValueError::new_err("input length does not match the game"));
        }
        Ok(rows(self.inner.encodings.state(x)))
    }

    /// Bob's ±1 observable for question y (1-based).
    fn observable(&self, y: usize) -> PyResult<Vec<Vec<Complex64>>> {
        if y == 0 || y > self.game.n() {
            return Err(PyValueError::new_err(format!("question index {y} out of range")));
        }
        Ok(rows(self.inner.measurements.observable(y).matrix()))
    }
}

/// Explicit observable-family strategy for g = n (3 <= n <= 12) and (4, 3).
#[pyfunction]
fn explicit_strategy(game: &Game) -> PyResult<QuantumStrategy> {
    let (_, inner) = quantum::explicit_strategy(&game.inner).map_err(py_err)?;
    Ok(QuantumStrategy { game: game.inner.clone(), inner })
}

/// tr[Δ] of the explicit strategy.
#[pyfunction]
fn delta_trace(game: &Game) -> PyResult<f64> {
    let (family, s) = quantum::explicit_strategy(&game.inner).map_err(py_err)?;
    let bobs: Vec<_> = (1..=game.inner.n()).map(|y| s.measurements.observable(y)).collect();
    Ok(quantum::assemble_delta(&game.inner, &family, &bobs).map_err(py_err)?.trace)
}

#[pyclass(frozen, module = "porac_py")]
struct SeesawResult {
    #[pyo3(get)]
    value: f64,
    #[pyo3(get)]
    po_violation: f64,
    #[pyo3(get)]
    best_restart: usize,
    #[pyo3(get)]
    trace_log: Vec<Vec<f64>>,
    strategy: Py<QuantumStrategy>,
}

#[pymethods]
impl SeesawResult {
    #[getter]
    fn strategy(&self, py: Python<'_>) -> Py<QuantumStrategy> {
        self.strategy.clone_ref(py)
    }
}

#[pyfunction]
#[pyo3(signature = (game, dim = None, restarts = 20, max_iter = 500, tol = 1e-12, seed = 0))]
fn seesaw(
    py: Python<'_>,
    game: &Game,
    dim: Option<usize>,
    restarts: usize,
    max_iter: usize,
    tol: f64,
    seed: u64,
) -> PyResult<SeesawResult> {
    let g = game.inner.clone();
    let dim = dim.unwrap_or(g.default_dim());
    let out = py
        .detach(|| quantum::seesaw(&g, dim, restarts, max_iter, tol, seed))
        .map_err(py_err)?;
    let strategy = Py::new(py, QuantumStrategy { game: g, inner: out.best })?;
    Ok(SeesawResult {
        value: out.value,
        po_violation: out.po_violation,
        best_restart: out.best_restart,
        trace_log: out.trace_log,
        strategy,
    })
}

/// dim · max over noncontextual assignments of the correlation operator.
#[pyfunction]
fn ontic_trace_bound(game: &Game) -> PyResult<i64> {
    let (spec, dim) = match (game.inner.n(), game.inner.g()) {
        (4, 3) => (CorrelationSpec::delta_4_3(), 4),
        (n, g) if n == g => (CorrelationSpec::delta_n_n(n).map_err(py_err)?, 1i64 << (n - 1)),
        (n, g) => return Err(PyValueError::new_err(format!("no correlation operator for ({n}, {g})"))),
    };
    Ok(ontic_max(&spec).map_err(py_err)?.value * dim)
}

/// (⟨ℬ⟩, success) for the maximally entangled pair and the three-bit family.
#[pyfunction]
fn bell() -> PyResult<(f64, f64)> {
    let family = quantum::build_family(3, 3).map_err(py_err)?;
    let bobs = family.normalized_bobs().map_err(py_err)?;
    let b = bell_value(&phi_plus_pair(), &family, &bobs).map_err(py_err)?;
    Ok((b.expectation, b.success))
}

/// Success and message-channel PO violation of the two-bit protocol.
#[pyfunction]
#[pyo3(signature = (ignore_message = false))]
fn two_bit(ignore_message: bool) -> PyResult<(f64, f64)> {
    let family = quantum::build_family(3, 3).map_err(py_err)?;
    let meas = MeasurementSet::from_observables(&family.normalized_bobs().map_err(py_err)?).map_err(py_err)?;
    let mode = if ignore_message { TwoBitMode::IgnoreMessage } else { TwoBitMode::Exact };
    let out = two_bit_protocol(&phi_plus_pair(), &family, &meas, mode).map_err(py_err)?;
    Ok((out.success, out.po.max_violation))
}

/// (input per setting, min fidelity) for the eight standard settings.
#[pyfunction]
fn interferometer_match() -> PyResult<(Vec<String>, f64)> {
    let game = porac::Game::new(3, 3).map_err(py_err)?;
    let m = match_encodings(&standard_settings(), &game).map_err(py_err)?;
    Ok((m.assignment.iter().map(|x| x.to_string()).collect(), m.min_fidelity))
}

/// Matrix of a Pauli string such as "XZI".
#[pyfunction]
fn pauli(s: &str) -> PyResult<Vec<Vec<Complex64>>> {
    Ok(rows(quantum::pauli(s).map_err(py_err)?.matrix()))
}

#[pymodule]
fn porac_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Game>()?;
    m.add_class::<QuantumStrategy>()?;
    m.add_class::<SeesawResult>()?;
    m.add_function(wrap_pyfunction!(explicit_strategy, m)?)?;
    m.add_function(wrap_pyfunction!(delta_trace, m)?)?;
    m.add_function(wrap_pyfunction!(seesaw, m)?)?;
    m.add_function(wrap_pyfunction!(ontic_trace_bound, m)?)?;
    m.add_function(wrap_pyfunction!(bell, m)?)?;
    m.add_function(wrap_pyfunction!(two_bit, m)?)?;
    m.add_function(wrap_pyfunction!(interferometer_match, m)?)?;
    m.add_function(wrap_pyfunction!(pauli, m)?)?;
    Ok(())
}
