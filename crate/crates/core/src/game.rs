//! Game instances, classical channels and the noncontextual bound.

use std::fmt;
use std::str::FromStr;

use num_rational::Rational64;
use num_traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub const MAX_BITS: usize = 24;
pub const DEFAULT_PO_TOL: f64 = 1e-10;

/// n-bit string; x₁ is the most significant bit of `value`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitString {
    n: usize,
    value: u32,
}

impl BitString {
    pub fn new(n: usize, value: u32) -> Result<Self> {
        if n == 0 || n > MAX_BITS {
            return Err(Error::InvalidBitString(format!(
                "length must be in 1..={MAX_BITS}, got {n}"
            )));
        }
        if value >> n != 0 {
            return Err(Error::InvalidBitString(format!(
                "value {value} does not fit in {n} bits"
            )));
        }
        Ok(Self { n, value })
    }

    pub fn from_bits(bits: &[u8]) -> Result<Self> {
        let mut value = 0u32;
        for &b in bits {
            if b > 1 {
                return Err(Error::InvalidBitString(format!("bit value {b}")));
            }
            value = (value << 1) | b as u32;
        }
        Self::new(bits.len(), value)
    }

    /// All strings of length n in increasing numeric order.
    pub fn all(n: usize) -> impl Iterator<Item = BitString> {
        assert!((1..=MAX_BITS).contains(&n), "bit length out of range");
        (0..1u32 << n).map(move |value| BitString { n, value })
    }

    pub fn ones(n: usize) -> Result<Self> {
        Self::new(n, if n >= 32 { u32::MAX } else { (1u32 << n) - 1 })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn value(&self) -> u32 {
        self.value
    }

    pub fn index(&self) -> usize {
        self.value as usize
    }

    /// Bit y, 1-based from the left.
    pub fn bit(&self, y: usize) -> u8 {
        assert!(y >= 1 && y <= self.n, "bit index {y} out of 1..={}", self.n);
        ((self.value >> (self.n - y)) & 1) as u8
    }

    pub fn bits(&self) -> Vec<u8> {
        (1..=self.n).map(|y| self.bit(y)).collect()
    }

    pub fn weight(&self) -> u32 {
        self.value.count_ones()
    }

    pub fn dot(&self, other: &BitString) -> Result<u8> {
        parity(self, other)
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for y in 1..=self.n {
            write!(f, "{}", self.bit(y))?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitString({self})")
    }
}

impl FromStr for BitString {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(0u8),
                '1' => Ok(1u8),
                other => Err(Error::InvalidBitString(format!("unexpected character {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_bits(&bits)
    }
}

/// Mod-2 inner product s·x.
pub fn parity(s: &BitString, x: &BitString) -> Result<u8> {
    if s.n != x.n {
        return Err(Error::InvalidBitString(format!(
            "length mismatch: {} vs {}",
            s.n, x.n
        )));
    }
    Ok(((s.value & x.value).count_ones() & 1) as u8)
}

fn check_range(n: usize, g: usize) -> Result<()> {
    if n > MAX_BITS {
        return Err(Error::InvalidGame(format!("n = {n} exceeds {MAX_BITS}")));
    }
    if g < 2 || g > n {
        return Err(Error::InvalidGame(format!(
            "parity threshold must satisfy 2 <= g <= n, got n = {n}, g = {g}"
        )));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParitySet {
    n: usize,
    g: usize,
    elements: Vec<BitString>,
}

impl ParitySet {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn g(&self) -> usize {
        self.g
    }

    pub fn elements(&self) -> &[BitString] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, s: &BitString) -> bool {
        self.elements.binary_search(s).is_ok()
    }
}

/// All n-bit strings of weight at least g, ascending.
pub fn build_parity_set(n: usize, g: usize) -> Result<ParitySet> {
    check_range(n, g)?;
    let elements = BitString::all(n)
        .filter(|s| s.weight() as usize >= g)
        .collect();
    Ok(ParitySet { n, g, elements })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Game {
    n: usize,
    g: usize,
    parity_set: ParitySet,
}

impl Game {
    pub fn new(n: usize, g: usize) -> Result<Self> {
        let parity_set = build_parity_set(n, g)?;
        Ok(Self { n, g, parity_set })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn g(&self) -> usize {
        self.g
    }

    pub fn parity_set(&self) -> &ParitySet {
        &self.parity_set
    }

    pub fn inputs(&self) -> impl Iterator<Item = BitString> {
        BitString::all(self.n)
    }

    pub fn input_count(&self) -> usize {
        1 << self.n
    }

    /// Default Hilbert dimension 2^{g-1}.
    pub fn default_dim(&self) -> usize {
        1 << (self.g - 1)
    }

    pub fn pnc_bound(&self) -> Rational64 {
        Rational64::new((self.g + self.n - 1) as i64, (2 * self.n) as i64)
    }
}

/// (g+n−1)/(2n).
pub fn pnc_bound(n: usize, g: usize) -> Result<Rational64> {
    check_range(n, g)?;
    Ok(Rational64::new((g + n - 1) as i64, (2 * n) as i64))
}

/// Scalar type for channel probabilities: exact rationals or floats.
pub trait Probability:
    Clone + fmt::Debug + PartialOrd + Zero + One + FromPrimitive + Send + Sync
    + std::ops::Add<Output = Self> + std::ops::Sub<Output = Self>
    + std::ops::Mul<Output = Self> + std::ops::Div<Output = Self>
{
    fn to_f64(&self) -> f64;
    fn abs_diff(&self, other: &Self) -> f64;
    fn is_close(&self, other: &Self, tol: f64) -> bool;
}

impl Probability for f64 {
    fn to_f64(&self) -> f64 {
        *self
    }
    fn abs_diff(&self, other: &Self) -> f64 {
        (self - other).abs()
    }
    fn is_close(&self, other: &Self, tol: f64) -> bool {
        (self - other).abs() <= tol
    }
}

impl Probability for Rational64 {
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn abs_diff(&self, other: &Self) -> f64 {
        Probability::to_f64(&(self - other).abs())
    }
    // Rationals compare exactly.
    fn is_close(&self, other: &Self, _tol: f64) -> bool {
        self == other
    }
}

/// Stochastic map p(m|x), rows indexed by x.
#[derive(Clone, Debug, PartialEq)]
pub struct Channel<P: Probability = Rational64> {
    n: usize,
    message_count: usize,
    probs: Vec<Vec<P>>,
}

impl<P: Probability> Channel<P> {
    pub fn new(n: usize, message_count: usize, probs: Vec<Vec<P>>) -> Result<Self> {
        if n == 0 || n > MAX_BITS {
            return Err(Error::InvalidChannel(format!("input length {n} out of range")));
        }
        if message_count == 0 {
            return Err(Error::InvalidChannel("message_count must be positive".into()));
        }
        if probs.len() != 1 << n {
            return Err(Error::InvalidChannel(format!(
                "expected {} rows, got {}",
                1usize << n,
                probs.len()
            )));
        }
        for (x, row) in probs.iter().enumerate() {
            if row.len() != message_count {
                return Err(Error::InvalidChannel(format!(
                    "row {x} has {} entries, expected {message_count}",
                    row.len()
                )));
            }
            if row.iter().any(|p| *p < P::zero() || *p > P::one()) {
                return Err(Error::InvalidChannel(format!("row {x} has an entry outside [0,1]")));
            }
            let sum = row.iter().cloned().fold(P::zero(), |a, b| a + b);
            if !sum.is_close(&P::one(), 1e-12) {
                return Err(Error::InvalidChannel(format!(
                    "row {x} sums to {}",
                    sum.to_f64()
                )));
            }
        }
        Ok(Self { n, message_count, probs })
    }

    pub fn deterministic(
        n: usize,
        message_count: usize,
        encode: impl Fn(BitString) -> usize,
    ) -> Result<Self> {
        if n == 0 || n > MAX_BITS {
            return Err(Error::InvalidChannel(format!("input length {n} out of range")));
        }
        let mut probs = Vec::with_capacity(1 << n);
        for x in BitString::all(n) {
            let m = encode(x);
            if m >= message_count {
                return Err(Error::InvalidChannel(format!(
                    "input {x} mapped to message {m} >= {message_count}"
                )));
            }
            let mut row = vec![P::zero(); message_count];
            row[m] = P::one();
            probs.push(row);
        }
        Self::new(n, message_count, probs)
    }

    pub fn constant(n: usize) -> Result<Self> {
        Self::deterministic(n, 1, |_| 0)
    }

    /// m = x.
    pub fn identity(n: usize) -> Result<Self> {
        Self::deterministic(n, 1 << n, |x| x.index())
    }

    /// m = x₁…x_k.
    pub fn first_bits(n: usize, k: usize) -> Result<Self> {
        if k > n {
            return Err(Error::InvalidChannel(format!("cannot forward {k} of {n} bits")));
        }
        Self::deterministic(n, 1 << k, |x| (x.value() >> (n - k)) as usize)
    }

    /// m = s·x.
    pub fn parity_of(s: BitString) -> Result<Self> {
        Self::deterministic(s.len(), 2, |x| parity(&s, &x).expect("same length") as usize)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn message_count(&self) -> usize {
        self.message_count
    }

    pub fn prob(&self, m: usize, x: BitString) -> &P {
        &self.probs[x.index()][m]
    }

    pub fn rows(&self) -> &[Vec<P>] {
        &self.probs
    }

    /// Reorders message labels: new label of m is perm[m].
    pub fn relabel(&self, perm: &[usize]) -> Result<Self> {
        let mut seen = vec![false; self.message_count];
        if perm.len() != self.message_count
            || perm.iter().any(|&p| p >= self.message_count || std::mem::replace(&mut seen[p], true))
        {
            return Err(Error::InvalidChannel("relabeling is not a permutation".into()));
        }
        let probs = self
            .probs
            .iter()
            .map(|row| {
                let mut out = vec![P::zero(); self.message_count];
                for (m, p) in row.iter().enumerate() {
                    out[perm[m]] = p.clone();
                }
                out
            })
            .collect();
        Ok(Self { n: self.n, message_count: self.message_count, probs })
    }

    pub fn to_f64(&self) -> Channel<f64> {
        Channel {
            n: self.n,
            message_count: self.message_count,
            probs: self
                .probs
                .iter()
                .map(|row| row.iter().map(Probability::to_f64).collect())
                .collect(),
        }
    }
}

/// Deterministic decoder d(m, y) ∈ {0,1}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decoder {
    n: usize,
    table: Vec<Vec<u8>>,
}

impl Decoder {
    /// table[m][y-1].
    pub fn new(n: usize, table: Vec<Vec<u8>>) -> Result<Self> {
        if table.is_empty() {
            return Err(Error::InvalidDecoder("no messages".into()));
        }
        for (m, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidDecoder(format!(
                    "message {m} has {} outputs, expected {n}",
                    row.len()
                )));
            }
            if row.iter().any(|&b| b > 1) {
                return Err(Error::InvalidDecoder(format!("message {m} has a non-bit output")));
            }
        }
        Ok(Self { n, table })
    }

    pub fn from_fn(n: usize, message_count: usize, f: impl Fn(usize, usize) -> u8) -> Result<Self> {
        let table = (0..message_count)
            .map(|m| (1..=n).map(|y| f(m, y)).collect())
            .collect();
        Self::new(n, table)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn message_count(&self) -> usize {
        self.table.len()
    }

    /// Output for message m and 1-based y.
    pub fn decode(&self, m: usize, y: usize) -> u8 {
        self.table[m][y - 1]
    }

    pub fn table(&self) -> &[Vec<u8>] {
        &self.table
    }
}

/// (1/(2ⁿn)) Σ_{y,x,m} p(m|x)·[d(m,y)=x_y].
pub fn classical_success<P: Probability>(ch: &Channel<P>, dec: &Decoder, game: &Game) -> Result<P> {
    if ch.n != game.n || dec.n != game.n {
        return Err(Error::DimensionMismatch(format!(
            "channel n = {}, decoder n = {}, game n = {}",
            ch.n, dec.n, game.n
        )));
    }
    if dec.message_count() != ch.message_count {
        return Err(Error::DimensionMismatch(format!(
            "channel has {} messages, decoder {}",
            ch.message_count,
            dec.message_count()
        )));
    }
    let mut total = P::zero();
    for x in game.inputs() {
        for (m, p) in ch.probs[x.index()].iter().enumerate() {
            if p.is_zero() {
                continue;
            }
            let hits = (1..=game.n).filter(|&y| dec.decode(m, y) == x.bit(y)).count();
            total = total + p.clone() * P::from_usize(hits).expect("small count");
        }
    }
    let norm = P::from_usize(game.input_count() * game.n).expect("small count");
    Ok(total / norm)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PoCheck {
    pub satisfied: bool,
    pub max_violation: f64,
}

/// max over s, m of |Σ_{s·x=0} p(m|x) − Σ_{s·x=1} p(m|x)|.
pub fn po_satisfied<P: Probability>(ch: &Channel<P>, ps: &ParitySet, tol: f64) -> Result<PoCheck> {
    if ch.n != ps.n {
        return Err(Error::DimensionMismatch(format!(
            "channel n = {}, parity set n = {}",
            ch.n, ps.n
        )));
    }
    let mut worst = 0.0f64;
    for s in &ps.elements {
        for m in 0..ch.message_count {
            let mut even = P::zero();
            let mut odd = P::zero();
            for x in BitString::all(ch.n) {
                let p = ch.probs[x.index()][m].clone();
                if parity(s, &x)? == 0 {
                    even = even + p;
                } else {
                    odd = odd + p;
                }
            }
            worst = worst.max(even.abs_diff(&odd));
        }
    }
    Ok(PoCheck { satisfied: worst <= tol, max_violation: worst })
}
