//! Entanglement-assisted variant: steering, the Bell expression and a two-bit protocol.

use crate::error::{Error, Result};
use crate::game::{po_satisfied, BitString, Channel, Game, PoCheck};
use crate::matrix::{hermitian_eig, kron, trace_product, ComplexMatrix, HermitianOperator, C64};
use crate::quantum::{states_from_family, EncodingSet, MeasurementSet, ObservableFamily};

const STATE_TOL: f64 = 1e-10;

#[derive(Clone, Debug)]
pub struct BipartiteState {
    dim_a: usize,
    dim_b: usize,
    density: ComplexMatrix,
}

impl BipartiteState {
    pub fn new(dim_a: usize, dim_b: usize, density: ComplexMatrix) -> Result<Self> {
        let d = dim_a * dim_b;
        if d == 0 || density.rows() != d || density.cols() != d {
            return Err(Error::DimensionMismatch(format!(
                "density is {}x{}, expected {d}x{d}",
                density.rows(),
                density.cols()
            )));
        }
        let h = HermitianOperator::with_tolerance(density.clone(), STATE_TOL)
            .map_err(|_| Error::InvalidState("density is not Hermitian".into()))?;
        let tr = density.trace();
        if (tr - C64::new(1.0, 0.0)).norm() > STATE_TOL {
            return Err(Error::InvalidState(format!("trace {tr}")));
        }
        if hermitian_eig(&h).min() < -STATE_TOL {
            return Err(Error::InvalidState("density is not positive semidefinite".into()));
        }
        Ok(Self { dim_a, dim_b, density })
    }

    pub fn product(rho_a: &ComplexMatrix, rho_b: &ComplexMatrix) -> Result<Self> {
        Self::new(rho_a.rows(), rho_b.rows(), kron(rho_a, rho_b))
    }

    pub fn maximally_mixed(dim_a: usize, dim_b: usize) -> Self {
        let d = dim_a * dim_b;
        Self::new(dim_a, dim_b, ComplexMatrix::identity(d).scale_real(1.0 / d as f64)).expect("valid state")
    }

    pub fn dim_a(&self) -> usize {
        self.dim_a
    }

    pub fn dim_b(&self) -> usize {
        self.dim_b
    }

    pub fn density(&self) -> &ComplexMatrix {
        &self.density
    }

    /// tr_A[(P ⊗ I) ρ].
    pub fn steer_with(&self, p: &ComplexMatrix) -> Result<ComplexMatrix> {
        if p.rows() != self.dim_a || p.cols() != self.dim_a {
            return Err(Error::DimensionMismatch(format!(
                "Alice operator is {}x{}, expected {}",
                p.rows(),
                p.cols(),
                self.dim_a
            )));
        }
        let (da, db) = (self.dim_a, self.dim_b);
        let mut out = ComplexMatrix::zeros(db, db);
        for i in 0..da {
            for k in 0..da {
                let pik = p[(i, k)];
                if pik.norm_sqr() == 0.0 {
                    continue;
                }
                for b1 in 0..db {
                    for b2 in 0..db {
                        out[(b1, b2)] += pik * self.density[(k * db + b1, i * db + b2)];
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn reduced_a(&self) -> ComplexMatrix {
        let (da, db) = (self.dim_a, self.dim_b);
        let mut out = ComplexMatrix::zeros(da, da);
        for i in 0..da {
            for j in 0..da {
                for b in 0..db {
                    out[(i, j)] += self.density[(i * db + b, j * db + b)];
                }
            }
        }
        out
    }
}

/// Two Bell pairs, ordered (A1, A2, B1, B2): |Φ⟩ = ½ Σ_i |i⟩_A |i⟩_B.
pub fn phi_plus_pair() -> BipartiteState {
    let mut v = vec![C64::new(0.0, 0.0); 16];
    for i in 0..4 {
        v[i * 4 + i] = C64::new(0.5, 0.0);
    }
    BipartiteState::new(4, 4, ComplexMatrix::outer(&v)).expect("valid state")
}

/// Unnormalized steered state and weight for every input.
#[derive(Clone, Debug)]
pub struct SteeredEnsemble {
    pub n: usize,
    pub entries: Vec<(ComplexMatrix, f64)>,
}

impl SteeredEnsemble {
    pub fn get(&self, x: BitString) -> &(ComplexMatrix, f64) {
        &self.entries[x.index()]
    }

    /// Normalized steered states as an encoding.
    pub fn encodings(&self, game: &Game) -> Result<EncodingSet> {
        let states = self
            .entries
            .iter()
            .enumerate()
            .map(|(x, (s, w))| {
                if *w <= STATE_TOL {
                    return Err(Error::InvalidState(format!("input {x} is steered with weight {w}")));
                }
                Ok(s.scale_real(1.0 / w))
            })
            .collect::<Result<Vec<_>>>()?;
        EncodingSet::new(game, states)
    }
}

fn check_shapes(state: &BipartiteState, family: &ObservableFamily) -> Result<Game> {
    if family.dim() != state.dim_a {
        return Err(Error::DimensionMismatch(format!(
            "family dim {}, Alice dim {}",
            family.dim(),
            state.dim_a
        )));
    }
    Game::new(family.n(), family.g())
}

/// Bob's conditional state when Alice's joint measurement selects x's eigenprojector.
pub fn steer(state: &BipartiteState, family: &ObservableFamily, x: BitString) -> Result<(ComplexMatrix, f64)> {
    let game = check_shapes(state, family)?;
    let projectors = states_from_family(family, &game)?;
    steer_one(state, projectors.state(x))
}

fn steer_one(state: &BipartiteState, p: &ComplexMatrix) -> Result<(ComplexMatrix, f64)> {
    let s = state.steer_with(p)?;
    let w = s.trace().re;
    Ok((s, w))
}

pub fn steered_ensemble(state: &BipartiteState, family: &ObservableFamily) -> Result<SteeredEnsemble> {
    let game = check_shapes(state, family)?;
    let projectors = states_from_family(family, &game)?;
    let entries = game
        .inputs()
        .map(|x| steer_one(state, projectors.state(x)))
        .collect::<Result<Vec<_>>>()?;
    Ok(SteeredEnsemble { n: game.n(), entries })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BellValue {
    pub expectation: f64,
    pub success: f64,
}

/// ⟨Σ_y C_y ⊗ B_y⟩ and the success 1/2 + dim_A·⟨ℬ⟩/(2^{n+1} n).
pub fn bell_value(state: &BipartiteState, family: &ObservableFamily, bobs: &[HermitianOperator]) -> Result<BellValue> {
    let game = check_shapes(state, family)?;
    if bobs.len() != game.n() {
        return Err(Error::DimensionMismatch(format!("{} Bob observables for n = {}", bobs.len(), game.n())));
    }
    let mut expectation = 0.0;
    for (y, b) in bobs.iter().enumerate() {
        if b.dim() != state.dim_b {
            return Err(Error::DimensionMismatch(format!("B_{} has dim {}", y + 1, b.dim())));
        }
        let dev = b.involution_deviation();
        if dev > 1e-10 {
            return Err(Error::NotInvolution(format!("B_{} (deviation {dev:.3e})", y + 1)));
        }
        let c = family.alice_combination(y + 1)?;
        expectation += trace_product(state.density(), &kron(c.matrix(), b.matrix()))?.re;
    }
    let success = 0.5 + state.dim_a as f64 * expectation / (2.0 * game.input_count() as f64 * game.n() as f64);
    Ok(BellValue { expectation, success })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TwoBitMode {
    /// Bob flips his outcomes according to the message.
    Exact,
    /// Bob reports his raw outcomes.
    IgnoreMessage,
}

#[derive(Clone, Debug)]
pub struct TwoBitOutcome {
    pub success: f64,
    /// Induced p(m|x).
    pub channel: Channel<f64>,
    pub po: PoCheck,
}

/// Alice measures the generators of x's block, obtaining the outcome string a
/// of a block input x′, and sends m = (x₁⊕a₁, …, x_{n−1}⊕a_{n−1}). Bob
/// measures his steered state and flips outcome y by c_y, where c = (m, ⊕m).
pub fn two_bit_protocol(
    state: &BipartiteState,
    family: &ObservableFamily,
    bobs: &MeasurementSet,
    mode: TwoBitMode,
) -> Result<TwoBitOutcome> {
    let game = check_shapes(state, family)?;
    if family.g() != family.n() {
        return Err(Error::Unsupported("the message protocol needs a g = n family".into()));
    }
    if bobs.dim() != state.dim_b || bobs.len() != game.n() {
        return Err(Error::DimensionMismatch("measurement shape does not match".into()));
    }
    let n = game.n();
    let k = n - 1;
    let projectors = states_from_family(family, &game)?;
    let mut probs = vec![vec![0.0; 1 << k]; game.input_count()];
    let mut total = 0.0;
    for x in game.inputs() {
        let block = family.block_of(x)?;
        for &xp in &block.inputs {
            let (sigma, w) = steer_one(state, projectors.state(xp))?;
            let m = ((x.value() ^ xp.value()) >> 1) as usize;
            probs[x.index()][m] += w;
            let correction = match mode {
                TwoBitMode::Exact => x.value() ^ xp.value(),
                TwoBitMode::IgnoreMessage => 0,
            };
            for y in 1..=n {
                let c = ((correction >> (n - y)) & 1) as u8;
                // Bob outputs raw ⊕ c; it is correct when raw = x_y ⊕ c.
                total += trace_product(&sigma, bobs.element(y, x.bit(y) ^ c))?.re;
            }
        }
    }
    let success = total / (game.input_count() * n) as f64;
    let channel = Channel::new(n, 1 << k, probs)?;
    let po = po_satisfied(&channel, game.parity_set(), 1e-12)?;
    Ok(TwoBitOutcome { success, channel, po })
}
