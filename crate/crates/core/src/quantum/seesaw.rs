//! Alternating optimization of encodings and measurements.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::game::{BitString, Game};
use crate::matrix::{
    gram_schmidt, hermitian_eig, inner, vec_norm, ComplexMatrix, HermitianOperator, C64,
};
use crate::quantum::encoding::{EncodingSet, MeasurementSet, QuantumStrategy};
use crate::quantum::strategy::{optimal_bob, success_probability};

/// A rotation is kept only if it gains more than this.
pub const ROTATION_GAIN_TOL: f64 = 1e-12;
pub const MAX_ALICE_SWEEPS: usize = 200;
pub const SEESAW_PO_TOL: f64 = 1e-8;

/// Product of per-group orthonormal bases.
///
/// Bits are split into groups; group j lives on a factor of dimension
/// 2^{|group|−1} and carries one basis per parity class of its bits. An input
/// x is encoded as the tensor product, over groups, of the basis vector picked
/// by x's bits on that group. Every parity element must contain a whole group,
/// which makes each class sum to the identity and the encoding parity-oblivious.
#[derive(Clone, Debug)]
pub struct BasesAnsatz {
    n: usize,
    groups: Vec<Vec<usize>>,
    factor_dims: Vec<usize>,
    /// bases[j][class][k]
    bases: Vec<[Vec<Vec<C64>>; 2]>,
}

impl BasesAnsatz {
    /// First admissible grouping for (game, dim), bases set to the standard basis.
    pub fn for_game(game: &Game, dim: usize) -> Result<Self> {
        let groups = find_grouping(game, dim)?;
        let factor_dims: Vec<usize> = groups.iter().map(|g| 1 << (g.len() - 1)).collect();
        let bases = factor_dims
            .iter()
            .map(|&d| {
                let std: Vec<Vec<C64>> = (0..d)
                    .map(|k| {
                        let mut v = vec![C64::new(0.0, 0.0); d];
                        v[k] = C64::new(1.0, 0.0);
                        v
                    })
                    .collect();
                [std.clone(), std]
            })
            .collect();
        Ok(Self { n: game.n(), groups, factor_dims, bases })
    }

    /// Bases from orthonormalized complex Gaussian matrices.
    pub fn random(game: &Game, dim: usize, seed: u64) -> Result<Self> {
        let mut out = Self::for_game(game, dim)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for (j, &d) in out.factor_dims.iter().enumerate() {
            for class in 0..2 {
                let mut vs: Vec<Vec<C64>> = (0..d)
                    .map(|_| {
                        (0..d)
                            .map(|_| {
                                let re: f64 = StandardNormal.sample(&mut rng);
                                let im: f64 = StandardNormal.sample(&mut rng);
                                C64::new(re, im)
                            })
                            .collect()
                    })
                    .collect();
                gram_schmidt(&mut vs);
                out.bases[j][class] = vs;
            }
        }
        Ok(out)
    }

    /// Recovers the bases from a product encoding of this shape.
    pub fn from_encodings(encodings: &EncodingSet, game: &Game) -> Result<Self> {
        let mut out = Self::for_game(game, encodings.dim())?;
        let dims = out.factor_dims.clone();
        let mut filled: Vec<[Vec<bool>; 2]> = dims.iter().map(|&d| [vec![false; d], vec![false; d]]).collect();
        for x in game.inputs() {
            for j in 0..out.groups.len() {
                let (class, k) = out.slot(j, x);
                let reduced = partial_trace_keep(encodings.state(x), &dims, j);
                let h = HermitianOperator::symmetrized(&reduced)?;
                let eig = hermitian_eig(&h);
                if (eig.max() - 1.0).abs() > 1e-8 {
                    return Err(Error::Unsupported(format!(
                        "state for {x} is not a product over the groups {:?}",
                        out.groups
                    )));
                }
                let v = eig.vector(dims[j] - 1);
                if filled[j][class][k] {
                    let overlap = inner(&out.bases[j][class][k], &v).norm();
                    if (overlap - 1.0).abs() > 1e-8 {
                        return Err(Error::Unsupported(format!("factor {j} state for {x} is inconsistent")));
                    }
                } else {
                    out.bases[j][class][k] = v;
                    filled[j][class][k] = true;
                }
            }
        }
        for basis in out.bases.iter().flatten() {
            for a in 0..basis.len() {
                for b in a + 1..basis.len() {
                    if inner(&basis[a], &basis[b]).norm() > 1e-8 {
                        return Err(Error::Unsupported("class vectors are not orthonormal".into()));
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn groups(&self) -> &[Vec<usize>] {
        &self.groups
    }

    pub fn dim(&self) -> usize {
        self.factor_dims.iter().product()
    }

    /// (parity class, basis index) of x on group j.
    fn slot(&self, j: usize, x: BitString) -> (usize, usize) {
        let bits: Vec<u8> = self.groups[j].iter().map(|&p| x.bit(p + 1)).collect();
        let class = bits.iter().fold(0u8, |a, b| a ^ b) as usize;
        let k = bits[..bits.len() - 1].iter().fold(0usize, |a, &b| (a << 1) | b as usize);
        (class, k)
    }

    pub fn vector(&self, x: BitString) -> Vec<C64> {
        let mut v = vec![C64::new(1.0, 0.0)];
        for j in 0..self.groups.len() {
            let (class, k) = self.slot(j, x);
            let f = &self.bases[j][class][k];
            v = v.iter().flat_map(|a| f.iter().map(move |b| a * b)).collect();
        }
        v
    }

    pub fn encodings(&self, game: &Game) -> Result<EncodingSet> {
        let vectors = game
            .inputs()
            .map(|x| {
                let v = self.vector(x);
                let norm = vec_norm(&v);
                v.into_iter().map(|c| c / norm).collect()
            })
            .collect();
        EncodingSet::from_pure(game, vectors)
    }

    /// Σ_x ⟨ψ_x|R_x|ψ_x⟩.
    pub fn objective(&self, rs: &[ComplexMatrix]) -> f64 {
        BitString::all(self.n)
            .map(|x| {
                let v = self.vector(x);
                let rv = rs[x.index()].mul_vec(&v).expect("dims");
                inner(&v, &rv).re
            })
            .sum()
    }
}

/// Set partitions of 0..n in restricted-growth order.
fn partitions(n: usize) -> Vec<Vec<Vec<usize>>> {
    fn rec(i: usize, n: usize, labels: &mut Vec<usize>, out: &mut Vec<Vec<Vec<usize>>>) {
        if i == n {
            let k = labels.iter().max().map_or(0, |m| m + 1);
            let mut groups = vec![Vec::new(); k];
            for (p, &l) in labels.iter().enumerate() {
                groups[l].push(p);
            }
            out.push(groups);
            return;
        }
        let next = labels.iter().max().map_or(0, |m| m + 1);
        for l in 0..=next {
            labels.push(l);
            rec(i + 1, n, labels, out);
            labels.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, &mut Vec::new(), &mut out);
    out
}

fn find_grouping(game: &Game, dim: usize) -> Result<Vec<Vec<usize>>> {
    if dim < 2 {
        return Err(Error::Unsupported(format!("dimension must be at least 2, got {dim}")));
    }
    if game.n() > 10 {
        return Err(Error::Unsupported(format!("see-saw supports n <= 10, got {}", game.n())));
    }
    let masks: Vec<u32> = game.parity_set().elements().iter().map(|s| s.value()).collect();
    let n = game.n();
    for groups in partitions(n) {
        if groups.iter().any(|g| g.len() < 2) {
            continue;
        }
        if groups.iter().map(|g| 1usize << (g.len() - 1)).product::<usize>() != dim {
            continue;
        }
        let gmasks: Vec<u32> = groups
            .iter()
            .map(|g| g.iter().fold(0u32, |m, &p| m | 1 << (n - 1 - p)))
            .collect();
        if masks.iter().all(|s| gmasks.iter().any(|gm| s & gm == *gm)) {
            return Ok(groups);
        }
    }
    Err(Error::Unsupported(format!(
        "no parity-oblivious basis grouping for (n, g) = ({}, {}) at dimension {dim}",
        game.n(),
        game.g()
    )))
}

/// Tr over all factors but j, for a row-major ⊗ of `dims`.
fn partial_trace_keep(rho: &ComplexMatrix, dims: &[usize], j: usize) -> ComplexMatrix {
    let d = dims[j];
    let inner_dim: usize = dims[j + 1..].iter().product();
    let outer_dim: usize = dims[..j].iter().product();
    let mut out = ComplexMatrix::zeros(d, d);
    for o in 0..outer_dim {
        for i in 0..inner_dim {
            for a in 0..d {
                for b in 0..d {
                    let r = (o * d + a) * inner_dim + i;
                    let c = (o * d + b) * inner_dim + i;
                    out[(a, b)] += rho[(r, c)];
                }
            }
        }
    }
    out
}

/// ⟨a ⊗ w|R|b ⊗ w⟩ over factor j's basis, with w the other factors' state.
fn contract(r: &ComplexMatrix, dims: &[usize], j: usize, others: &[&[C64]]) -> ComplexMatrix {
    let d = dims[j];
    let total: usize = dims.iter().product();
    // Amplitude of the other factors at each full index, and factor-j digit.
    let mut weight = vec![C64::new(0.0, 0.0); total];
    let mut digit = vec![0usize; total];
    for (idx, (w, dg)) in weight.iter_mut().zip(digit.iter_mut()).enumerate() {
        let mut rem = idx;
        let mut amp = C64::new(1.0, 0.0);
        let mut oi = others.len();
        for f in (0..dims.len()).rev() {
            let dig = rem % dims[f];
            rem /= dims[f];
            if f == j {
                *dg = dig;
            } else {
                oi -= 1;
                amp *= others[oi][dig];
            }
        }
        *w = amp;
    }
    let mut out = ComplexMatrix::zeros(d, d);
    for u in 0..total {
        let wu = weight[u].conj();
        if wu.norm_sqr() == 0.0 {
            continue;
        }
        for v in 0..total {
            let wv = weight[v];
            if wv.norm_sqr() == 0.0 {
                continue;
            }
            out[(digit[u], digit[v])] += wu * r[(u, v)] * wv;
        }
    }
    out
}

/// R_x = Σ_y Π_y^{x_y}.
fn reward_operators(meas: &MeasurementSet, game: &Game) -> Vec<ComplexMatrix> {
    game.inputs()
        .map(|x| {
            let mut r = ComplexMatrix::zeros(meas.dim(), meas.dim());
            for y in 1..=game.n() {
                r.add_scaled(meas.element(y, x.bit(y)), C64::new(1.0, 0.0)).expect("dims");
            }
            r
        })
        .collect()
}

/// One lexicographic sweep of pairwise rotations over every factor and class.
/// Returns the objective gain.
pub fn alice_sweep(ansatz: &mut BasesAnsatz, meas: &MeasurementSet, game: &Game) -> f64 {
    let rs = reward_operators(meas, game);
    sweep_with(ansatz, &rs, game)
}

fn sweep_with(ansatz: &mut BasesAnsatz, rs: &[ComplexMatrix], game: &Game) -> f64 {
    let mut gain = 0.0;
    let dims = ansatz.factor_dims.clone();
    for j in 0..ansatz.groups.len() {
        for class in 0..2 {
            let d = dims[j];
            let mut ms = vec![ComplexMatrix::zeros(d, d); d];
            for x in game.inputs() {
                let (c, k) = ansatz.slot(j, x);
                if c != class {
                    continue;
                }
                let others: Vec<&[C64]> = (0..ansatz.groups.len())
                    .filter(|&f| f != j)
                    .map(|f| {
                        let (cf, kf) = ansatz.slot(f, x);
                        ansatz.bases[f][cf][kf].as_slice()
                    })
                    .collect();
                let m = contract(&rs[x.index()], &dims, j, &others);
                ms[k] = &ms[k] + &m;
            }
            let basis = &mut ansatz.bases[j][class];
            for a in 0..d {
                for b in a + 1..d {
                    gain += rotate_pair(basis, a, b, &ms[a], &ms[b]);
                }
            }
        }
    }
    gain
}

/// Optimal unitary mixing of basis vectors a and b; returns the gain if applied.
fn rotate_pair(basis: &mut [Vec<C64>], a: usize, b: usize, ma: &ComplexMatrix, mb: &ComplexMatrix) -> f64 {
    let diff = ma - mb;
    let (va, vb) = (&basis[a], &basis[b]);
    let da = diff.mul_vec(va).expect("dims");
    let db = diff.mul_vec(vb).expect("dims");
    let s = ComplexMatrix::new(
        2,
        2,
        vec![inner(va, &da), inner(va, &db), inner(vb, &da), inner(vb, &db)],
    )
    .expect("2x2");
    let h = HermitianOperator::symmetrized(&s).expect("square");
    let eig = hermitian_eig(&h);
    let gain = eig.max() - h.matrix()[(0, 0)].re;
    if gain <= ROTATION_GAIN_TOL {
        return 0.0;
    }
    let top = eig.vector(1);
    let (al, be) = (top[0], top[1]);
    let new_a: Vec<C64> = va.iter().zip(vb).map(|(x, y)| al * x + be * y).collect();
    let new_b: Vec<C64> = va.iter().zip(vb).map(|(x, y)| -be.conj() * x + al.conj() * y).collect();
    basis[a] = new_a;
    basis[b] = new_b;
    let mut pair = [basis[a].clone(), basis[b].clone()];
    gram_schmidt(&mut pair);
    let [na, nb] = pair;
    basis[a] = na;
    basis[b] = nb;
    gain
}

/// Runs sweeps until no rotation gains, then returns the encodings.
pub fn optimal_alice(meas: &MeasurementSet, game: &Game, ansatz: &mut BasesAnsatz) -> Result<EncodingSet> {
    if meas.dim() != ansatz.dim() || meas.len() != game.n() {
        return Err(Error::DimensionMismatch(format!(
            "measurements of dim {} for ansatz dim {}",
            meas.dim(),
            ansatz.dim()
        )));
    }
    let rs = reward_operators(meas, game);
    for _ in 0..MAX_ALICE_SWEEPS {
        if sweep_with(ansatz, &rs, game) <= ROTATION_GAIN_TOL {
            break;
        }
    }
    ansatz.encodings(game)
}

#[derive(Clone, Debug)]
pub struct RestartResult {
    pub strategy: QuantumStrategy,
    pub value: f64,
    /// Success probability after each Bob step.
    pub trace: Vec<f64>,
    pub converged: bool,
}

#[derive(Clone, Debug)]
pub struct SeesawOutcome {
    pub best: QuantumStrategy,
    pub value: f64,
    pub best_restart: usize,
    pub trace_log: Vec<Vec<f64>>,
    pub converged: Vec<bool>,
    pub groups: Vec<Vec<usize>>,
    pub po_violation: f64,
}

fn run_restart(game: &Game, dim: usize, max_iter: usize, tol: f64, seed: u64) -> Result<RestartResult> {
    let mut ansatz = BasesAnsatz::random(game, dim, seed)?;
    let mut enc = ansatz.encodings(game)?;
    let mut meas = optimal_bob(&enc, game)?;
    let mut value = success_probability(&QuantumStrategy::new(enc.clone(), meas.clone())?, game)?;
    let mut trace = vec![value];
    let mut converged = false;
    for _ in 0..max_iter {
        enc = optimal_alice(&meas, game, &mut ansatz)?;
        meas = optimal_bob(&enc, game)?;
        let next = success_probability(&QuantumStrategy::new(enc.clone(), meas.clone())?, game)?;
        trace.push(next);
        let step = next - value;
        value = next.max(value);
        if step <= tol {
            converged = true;
            break;
        }
    }
    Ok(RestartResult { strategy: QuantumStrategy::new(enc, meas)?, value, trace, converged })
}

/// Best of `restarts` see-saw runs; restart r is seeded with seed + r.
pub fn seesaw(
    game: &Game,
    dim: usize,
    restarts: usize,
    max_iter: usize,
    tol: f64,
    seed: u64,
) -> Result<SeesawOutcome> {
    let groups = find_grouping(game, dim)?;
    if restarts == 0 {
        return Err(Error::Unsupported("at least one restart is required".into()));
    }
    let results = (0..restarts)
        .into_par_iter()
        .map(|r| run_restart(game, dim, max_iter, tol, seed.wrapping_add(r as u64)))
        .collect::<Result<Vec<_>>>()?;
    let mut best = 0;
    for (r, res) in results.iter().enumerate() {
        if res.value > results[best].value {
            best = r;
        }
    }
    let po_violation = results[best].strategy.encodings.po_violation(game.parity_set())?;
    if po_violation > SEESAW_PO_TOL {
        return Err(Error::PoViolation(po_violation));
    }
    let trace_log = results.iter().map(|r| r.trace.clone()).collect();
    let converged = results.iter().map(|r| r.converged).collect();
    let chosen = results.into_iter().nth(best).expect("restart exists");
    Ok(SeesawOutcome {
        best: chosen.strategy,
        value: chosen.value,
        best_restart: best,
        trace_log,
        converged,
        groups,
        po_violation,
    })
}
