use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::matrix::{kron, ComplexMatrix, HermitianOperator, C64};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn matrix(self) -> ComplexMatrix {
        let z = C64::new(0.0, 0.0);
        let one = C64::new(1.0, 0.0);
        let i = C64::new(0.0, 1.0);
        let data = match self {
            Pauli::I => vec![one, z, z, one],
            Pauli::X => vec![z, one, one, z],
            Pauli::Y => vec![z, -i, i, z],
            Pauli::Z => vec![one, z, z, -one],
        };
        ComplexMatrix::new(2, 2, data).expect("2x2")
    }

    pub fn from_char(c: char) -> Result<Self> {
        match c.to_ascii_uppercase() {
            'I' => Ok(Pauli::I),
            'X' => Ok(Pauli::X),
            'Y' => Ok(Pauli::Y),
            'Z' => Ok(Pauli::Z),
            other => Err(Error::UnknownLabel(other.to_string())),
        }
    }
}

impl fmt::Display for Pauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        };
        write!(f, "{c}")
    }
}

/// Tensor product of single-qubit Paulis, leftmost factor first.
pub fn pauli_string(spec: &[Pauli]) -> Result<HermitianOperator> {
    let (first, rest) = spec
        .split_first()
        .ok_or_else(|| Error::DimensionMismatch("empty Pauli string".into()))?;
    let m = rest.iter().fold(first.matrix(), |acc, p| kron(&acc, &p.matrix()));
    HermitianOperator::new(m)
}

/// Parses strings like "XZI".
pub fn parse_pauli(s: &str) -> Result<Vec<Pauli>> {
    s.chars().map(Pauli::from_char).collect()
}

pub fn pauli(s: &str) -> Result<HermitianOperator> {
    pauli_string(&parse_pauli(s)?)
}

impl FromStr for Pauli {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let mut chars = s.chars();
        match (chars.next(), chars.next()) {
            (Some(c), None) => Pauli::from_char(c),
            _ => Err(Error::UnknownLabel(s.to_string())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strings() {
        let xx = pauli_string(&[Pauli::X, Pauli::X]).unwrap();
        assert_eq!(xx.matrix()[(0, 3)], C64::new(1.0, 0.0));
        assert_eq!(xx.matrix()[(1, 2)], C64::new(1.0, 0.0));
        assert_eq!(pauli("II").unwrap().matrix(), &ComplexMatrix::identity(4));
        let xxx = pauli("XXX").unwrap();
        assert_eq!(xxx.dim(), 8);
        assert_eq!(xxx.matrix()[(0, 7)], C64::new(1.0, 0.0));
        assert!(pauli_string(&[]).is_err());
        assert!(parse_pauli("XQ").is_err());
    }

    #[test]
    fn y_times_x_is_minus_iz() {
        let y = Pauli::Y.matrix();
        let x = Pauli::X.matrix();
        let want = Pauli::Z.matrix().scale(C64::new(0.0, -1.0));
        assert!((&y * &x).max_abs_diff(&want) < 1e-15);
    }
}
