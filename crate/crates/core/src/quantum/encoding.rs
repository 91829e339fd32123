//! Encoding states, binary measurements and strategies.

use crate::error::{Error, Result};
use crate::game::{parity, BitString, Game, ParitySet};
use crate::matrix::{hermitian_eig, vec_norm, ComplexMatrix, HermitianOperator, C64};
use crate::quantum::family::ObservableFamily;

pub const STATE_TOL: f64 = 1e-12;
pub const PSD_TOL: f64 = 1e-10;
pub const PO_TOL: f64 = 1e-10;

/// ρ_x for every input, indexed by x.
#[derive(Clone, Debug)]
pub struct EncodingSet {
    n: usize,
    dim: usize,
    states: Vec<ComplexMatrix>,
    vectors: Option<Vec<Vec<C64>>>,
}

impl EncodingSet {
    /// Validates trace, positivity and the parity-oblivious identity.
    pub fn new(game: &Game, states: Vec<ComplexMatrix>) -> Result<Self> {
        let dim = Self::check_count(game, states.len(), states.first().map(|s| s.rows()))?;
        for (x, s) in states.iter().enumerate() {
            if s.rows() != dim || s.cols() != dim {
                return Err(Error::DimensionMismatch(format!("state {x} is {}x{}", s.rows(), s.cols())));
            }
            let h = HermitianOperator::with_tolerance(s.clone(), STATE_TOL)
                .map_err(|_| Error::InvalidState(format!("state {x} is not Hermitian")))?;
            let tr = s.trace();
            if (tr - C64::new(1.0, 0.0)).norm() > STATE_TOL {
                return Err(Error::InvalidState(format!("state {x} has trace {tr}")));
            }
            let min = hermitian_eig(&h).min();
            if min < -PSD_TOL {
                return Err(Error::InvalidState(format!("state {x} has eigenvalue {min:.3e}")));
            }
        }
        let set = Self { n: game.n(), dim, states, vectors: None };
        set.check_po(game)?;
        Ok(set)
    }

    /// Pure states |ψ_x⟩; positivity holds by construction.
    pub fn from_pure(game: &Game, vectors: Vec<Vec<C64>>) -> Result<Self> {
        let dim = Self::check_count(game, vectors.len(), vectors.first().map(Vec::len))?;
        for (x, v) in vectors.iter().enumerate() {
            if v.len() != dim {
                return Err(Error::DimensionMismatch(format!("state {x} has length {}", v.len())));
            }
            let norm = vec_norm(v);
            if (norm - 1.0).abs() > STATE_TOL {
                return Err(Error::InvalidState(format!("state {x} has norm {norm}")));
            }
        }
        let states = vectors.iter().map(|v| ComplexMatrix::outer(v)).collect();
        let set = Self { n: game.n(), dim, states, vectors: Some(vectors) };
        set.check_po(game)?;
        Ok(set)
    }

    fn check_count(game: &Game, count: usize, dim: Option<usize>) -> Result<usize> {
        if count != game.input_count() {
            return Err(Error::DimensionMismatch(format!(
                "{count} states for {} inputs",
                game.input_count()
            )));
        }
        dim.filter(|&d| d > 0)
            .ok_or_else(|| Error::DimensionMismatch("empty state".into()))
    }

    fn check_po(&self, game: &Game) -> Result<()> {
        let v = self.po_violation(game.parity_set())?;
        if v > PO_TOL {
            return Err(Error::PoViolation(v));
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn state(&self, x: BitString) -> &ComplexMatrix {
        &self.states[x.index()]
    }

    pub fn states(&self) -> &[ComplexMatrix] {
        &self.states
    }

    pub fn vectors(&self) -> Option<&[Vec<C64>]> {
        self.vectors.as_deref()
    }

    /// max over s of the entrywise gap between Σ_{s·x=0} ρ_x and Σ_{s·x=1} ρ_x.
    pub fn po_violation(&self, ps: &ParitySet) -> Result<f64> {
        if ps.n() != self.n {
            return Err(Error::DimensionMismatch(format!("parity set n = {}, states n = {}", ps.n(), self.n)));
        }
        let mut worst = 0.0f64;
        for s in ps.elements() {
            let mut diff = ComplexMatrix::zeros(self.dim, self.dim);
            for x in BitString::all(self.n) {
                let sign = if parity(s, &x)? == 0 { 1.0 } else { -1.0 };
                diff.add_scaled(&self.states[x.index()], C64::new(sign, 0.0))?;
            }
            worst = worst.max(diff.max_abs());
        }
        Ok(worst)
    }

    /// C_y = Σ_x (−1)^{x_y} ρ_x.
    pub fn correlation_operator(&self, y: usize) -> HermitianOperator {
        let mut c = ComplexMatrix::zeros(self.dim, self.dim);
        for x in BitString::all(self.n) {
            let sign = if x.bit(y) == 0 { 1.0 } else { -1.0 };
            c.add_scaled(&self.states[x.index()], C64::new(sign, 0.0)).expect("same dim");
        }
        HermitianOperator::symmetrized(&c).expect("square")
    }
}

/// Joint eigenstate of each block's generators with the input's characters.
pub fn states_from_family(family: &ObservableFamily, game: &Game) -> Result<EncodingSet> {
    if family.n() != game.n() {
        return Err(Error::DimensionMismatch(format!("family n = {}, game n = {}", family.n(), game.n())));
    }
    let dim = family.dim();
    let mut vectors = Vec::with_capacity(game.input_count());
    for x in game.inputs() {
        let block = family.block_of(x)?;
        let gens = block
            .generators
            .iter()
            .map(|m| Ok((family.observable(&m.label)?, m.character.eval(x) as f64)))
            .collect::<Result<Vec<_>>>()?;
        let project = |mut v: Vec<C64>| -> Vec<C64> {
            for (g, eps) in &gens {
                let gv = g.matrix().mul_vec(&v).expect("family dim");
                for (a, b) in v.iter_mut().zip(gv) {
                    *a = (*a + b * eps) * 0.5;
                }
            }
            v
        };
        let mut psi = None;
        for i in 0..dim {
            let mut e = vec![C64::new(0.0, 0.0); dim];
            e[i] = C64::new(1.0, 0.0);
            let v = project(e);
            let norm = vec_norm(&v);
            if norm * norm > 0.5 / dim as f64 {
                psi = Some(v.into_iter().map(|c| c / norm).collect::<Vec<_>>());
                break;
            }
        }
        let psi = psi.ok_or_else(|| {
            Error::InconsistentSignPattern(format!("no joint eigenstate for input {x}"))
        })?;
        for m in block.members() {
            let o = family.observable(&m.label)?;
            let ov = o.matrix().mul_vec(&psi)?;
            let expect: f64 = psi.iter().zip(&ov).map(|(a, b)| (a.conj() * b).re).sum();
            let want = m.character.eval(x) as f64;
            if (expect - want).abs() > 1e-10 {
                return Err(Error::InconsistentSignPattern(format!(
                    "input {x}: <{}> = {expect:.6}, character says {want}",
                    m.label
                )));
            }
        }
        vectors.push(psi);
    }
    EncodingSet::from_pure(game, vectors)
}

/// Binary measurement (Π⁰_y, Π¹_y) for each y.
#[derive(Clone, Debug)]
pub struct MeasurementSet {
    dim: usize,
    pairs: Vec<(ComplexMatrix, ComplexMatrix)>,
    projective: bool,
}

impl MeasurementSet {
    pub fn new(pairs: Vec<(ComplexMatrix, ComplexMatrix)>) -> Result<Self> {
        let dim = pairs
            .first()
            .map(|p| p.0.rows())
            .ok_or_else(|| Error::InvalidMeasurement("no measurements".into()))?;
        let id = ComplexMatrix::identity(dim);
        let mut projective = true;
        for (y, (p0, p1)) in pairs.iter().enumerate() {
            for p in [p0, p1] {
                if p.rows() != dim || p.cols() != dim {
                    return Err(Error::DimensionMismatch(format!("measurement {} shape", y + 1)));
                }
                let h = HermitianOperator::with_tolerance(p.clone(), 1e-10)
                    .map_err(|_| Error::InvalidMeasurement(format!("element of y = {} is not Hermitian", y + 1)))?;
                // Hermitian idempotents are PSD already.
                if (p * p).max_abs_diff(p) > 1e-10 {
                    projective = false;
                    if hermitian_eig(&h).min() < -PSD_TOL {
                        return Err(Error::InvalidMeasurement(format!("element of y = {} is not PSD", y + 1)));
                    }
                }
            }
            let dev = (p0 + p1).max_abs_diff(&id);
            if dev > STATE_TOL {
                return Err(Error::InvalidMeasurement(format!(
                    "elements of y = {} sum to identity only within {dev:.3e}",
                    y + 1
                )));
            }
        }
        Ok(Self { dim, pairs, projective })
    }

    /// Π⁰ = (I + B)/2 for ±1 observables B.
    pub fn from_observables(bobs: &[HermitianOperator]) -> Result<Self> {
        let pairs = bobs
            .iter()
            .enumerate()
            .map(|(y, b)| {
                let dev = b.involution_deviation();
                if dev > 1e-10 {
                    return Err(Error::NotInvolution(format!("B_{} (deviation {dev:.3e})", y + 1)));
                }
                let id = ComplexMatrix::identity(b.dim());
                Ok(((&id + b.matrix()).scale_real(0.5), (&id - b.matrix()).scale_real(0.5)))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(pairs)
    }

    /// Π⁰ = Π¹ = I/2 for every y.
    pub fn trivial(n: usize, dim: usize) -> Self {
        let half = ComplexMatrix::identity(dim).scale_real(0.5);
        Self::new(vec![(half.clone(), half); n]).expect("valid POVM")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn is_projective(&self) -> bool {
        self.projective
    }

    /// Π_y^b with 1-based y.
    pub fn element(&self, y: usize, b: u8) -> &ComplexMatrix {
        let p = &self.pairs[y - 1];
        if b == 0 {
            &p.0
        } else {
            &p.1
        }
    }

    /// Π⁰_y − Π¹_y.
    pub fn observable(&self, y: usize) -> HermitianOperator {
        let p = &self.pairs[y - 1];
        HermitianOperator::symmetrized(&(&p.0 - &p.1)).expect("square")
    }
}

#[derive(Clone, Debug)]
pub struct QuantumStrategy {
    pub encodings: EncodingSet,
    pub measurements: MeasurementSet,
}

impl QuantumStrategy {
    pub fn new(encodings: EncodingSet, measurements: MeasurementSet) -> Result<Self> {
        if encodings.dim() != measurements.dim() {
            return Err(Error::DimensionMismatch(format!(
                "states have dim {}, measurements {}",
                encodings.dim(),
                measurements.dim()
            )));
        }
        if encodings.n() != measurements.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} measurements for n = {}",
                measurements.len(),
                encodings.n()
            )));
        }
        Ok(Self { encodings, measurements })
    }
}
