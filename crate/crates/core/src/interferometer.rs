//! Mach-Zehnder preparation and measurement settings for the three-bit game.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use crate::error::{Error, Result};
use crate::game::{BitString, Game};
use crate::matrix::{inner, kron, ComplexMatrix, HermitianOperator, C64};
use crate::quantum::{build_family, states_from_family};

pub const MATCH_THRESHOLD: f64 = 1.0 - 1e-9;
const DUPLICATE_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PreparationSetting {
    pub phi1: f64,
    pub theta: f64,
}

impl PreparationSetting {
    pub fn new(phi1: f64, theta: f64) -> Result<Self> {
        if !phi1.is_finite() || !theta.is_finite() {
            return Err(Error::InvalidState("angles must be finite".into()));
        }
        Ok(Self { phi1, theta })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SplitterSetting {
    alpha: C64,
    beta: C64,
    phi2: f64,
}

impl SplitterSetting {
    pub fn new(alpha: C64, beta: C64, phi2: f64) -> Result<Self> {
        let norm = alpha.norm_sqr() + beta.norm_sqr();
        if (norm - 1.0).abs() > 1e-12 || !phi2.is_finite() {
            return Err(Error::SplitterNormalization(norm));
        }
        Ok(Self { alpha, beta, phi2 })
    }

    pub fn real(alpha: f64, beta: f64, phi2: f64) -> Result<Self> {
        Self::new(C64::new(alpha, 0.0), C64::new(beta, 0.0), phi2)
    }
}

/// φ₁ ∈ {π/2, 3π/2} × θ ∈ {0, π/2, π/4, 3π/4}.
pub fn standard_settings() -> Vec<PreparationSetting> {
    let mut out = Vec::new();
    for phi1 in [FRAC_PI_2, 3.0 * FRAC_PI_2] {
        for theta in [0.0, FRAC_PI_2, FRAC_PI_4, 3.0 * FRAC_PI_4] {
            out.push(PreparationSetting { phi1, theta });
        }
    }
    out
}

/// ((|0⟩ + i e^{iφ₁}|1⟩)/√2) ⊗ (cos θ|0⟩ + sin θ|1⟩), path ⊗ polarization.
pub fn prepare_state(s: PreparationSetting) -> Vec<C64> {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let path = [C64::new(r, 0.0), C64::i() * C64::from_polar(r, s.phi1)];
    let pol = [C64::new(s.theta.cos(), 0.0), C64::new(s.theta.sin(), 0.0)];
    path.iter().flat_map(|a| pol.iter().map(move |b| a * b)).collect()
}

/// [[|α|²−|β|², 2iαβe^{iφ₂}], [h.c., |β|²−|α|²]].
pub fn path_observable(s: SplitterSetting) -> Result<HermitianOperator> {
    let d = s.alpha.norm_sqr() - s.beta.norm_sqr();
    let off = C64::new(0.0, 2.0) * s.alpha * s.beta * C64::from_polar(1.0, s.phi2);
    let m = ComplexMatrix::new(2, 2, vec![C64::new(d, 0.0), off, off.conj(), C64::new(-d, 0.0)])?;
    HermitianOperator::new(m)
}

/// Path observable on the full path ⊗ polarization space.
pub fn path_observable_full(s: SplitterSetting) -> Result<HermitianOperator> {
    HermitianOperator::new(kron(path_observable(s)?.matrix(), &ComplexMatrix::identity(2)))
}

pub fn fidelity(a: &[C64], b: &[C64]) -> f64 {
    inner(a, b).norm_sqr()
}

#[derive(Clone, Debug, PartialEq)]
pub struct EncodingMatch {
    /// assignment[i] is the input encoded by setting i.
    pub assignment: Vec<BitString>,
    pub min_fidelity: f64,
}

/// Best bijection from the prepared states to the three-bit family encodings.
pub fn match_encodings(settings: &[PreparationSetting], game: &Game) -> Result<EncodingMatch> {
    let states: Vec<Vec<C64>> = settings.iter().map(|&s| prepare_state(s)).collect();
    match_states(&states, game)
}

pub fn match_states(states: &[Vec<C64>], game: &Game) -> Result<EncodingMatch> {
    if game.n() != 3 || game.g() != 3 {
        return Err(Error::Unsupported("interferometer matching is defined for (3, 3)".into()));
    }
    if states.len() != 8 || states.iter().any(|s| s.len() != 4) {
        return Err(Error::DimensionMismatch("need eight states of dimension 4".into()));
    }
    for i in 0..8 {
        for j in i + 1..8 {
            if fidelity(&states[i], &states[j]) > 1.0 - DUPLICATE_TOL {
                return Err(Error::DuplicateSettings(i, j));
            }
        }
    }
    let family = build_family(3, 3)?;
    let targets = states_from_family(&family, game)?;
    let targets = targets.vectors().expect("family states are pure");
    let fid: Vec<Vec<f64>> = states
        .iter()
        .map(|s| targets.iter().map(|t| fidelity(s, t)).collect())
        .collect();

    let mut perm: Vec<usize> = (0..8).collect();
    let mut best = (f64::NEG_INFINITY, perm.clone());
    loop {
        let m = (0..8).map(|i| fid[i][perm[i]]).fold(f64::INFINITY, f64::min);
        if m > best.0 {
            best = (m, perm.clone());
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    let (min_fidelity, perm) = best;
    if min_fidelity < MATCH_THRESHOLD {
        return Err(Error::EncodingMismatch(min_fidelity));
    }
    let assignment: Vec<BitString> = perm.iter().map(|&x| BitString::new(3, x as u32).expect("3 bits")).collect();
    for parity in 0..2 {
        let members: Vec<usize> = (0..8).filter(|&i| assignment[i].weight() % 2 == parity).collect();
        for (a, &i) in members.iter().enumerate() {
            for &j in &members[a + 1..] {
                if fidelity(&states[i], &states[j]) > 1e-9 {
                    return Err(Error::EncodingMismatch(min_fidelity));
                }
            }
        }
    }
    Ok(EncodingMatch { assignment, min_fidelity })
}

fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = (0..p.len().saturating_sub(1)).rev().find(|&i| p[i] < p[i + 1]) else {
        return false;
    };
    let j = (i + 1..p.len()).rev().find(|&j| p[j] > p[i]).expect("exists");
    p.swap(i, j);
    p[i + 1..].reverse();
    true
}
