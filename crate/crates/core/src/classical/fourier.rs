use crate::error::{Error, Result};
use crate::game::{parity, BitString, Channel, ParitySet, Probability};

/// Coefficients α_δ(m) of p(m|x) = Σ_δ α_δ(m)(−1)^{x·δ}.
#[derive(Clone, Debug, PartialEq)]
pub struct FourierTable {
    n: usize,
    message_count: usize,
    /// coefficients[δ][m]
    coefficients: Vec<Vec<f64>>,
}

impl FourierTable {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn message_count(&self) -> usize {
        self.message_count
    }

    pub fn coefficient(&self, delta: BitString, m: usize) -> f64 {
        self.coefficients[delta.index()][m]
    }

    /// p(m|x) rebuilt from the coefficients, rows indexed by x.
    pub fn reconstruct(&self) -> Vec<Vec<f64>> {
        BitString::all(self.n)
            .map(|x| {
                (0..self.message_count)
                    .map(|m| {
                        BitString::all(self.n)
                            .map(|d| sign(&x, &d) * self.coefficients[d.index()][m])
                            .sum()
                    })
                    .collect()
            })
            .collect()
    }
}

fn sign(x: &BitString, d: &BitString) -> f64 {
    if parity(x, d).expect("same length") == 0 {
        1.0
    } else {
        -1.0
    }
}

pub fn fourier<P: Probability>(ch: &Channel<P>) -> FourierTable {
    let n = ch.n();
    let scale = 1.0 / (1u64 << n) as f64;
    let coefficients = BitString::all(n)
        .map(|d| {
            (0..ch.message_count())
                .map(|m| {
                    scale
                        * BitString::all(n)
                            .map(|x| sign(&x, &d) * ch.prob(m, x).to_f64())
                            .sum::<f64>()
                })
                .collect()
        })
        .collect();
    FourierTable { n, message_count: ch.message_count(), coefficients }
}

/// True iff every α_s(m) with s in the parity set vanishes within tol.
pub fn po_via_fourier<P: Probability>(ch: &Channel<P>, ps: &ParitySet, tol: f64) -> Result<bool> {
    if ch.n() != ps.n() {
        return Err(Error::DimensionMismatch(format!(
            "channel n = {}, parity set n = {}",
            ch.n(),
            ps.n()
        )));
    }
    let table = fourier(ch);
    Ok(ps
        .elements()
        .iter()
        .all(|s| (0..ch.message_count()).all(|m| table.coefficient(*s, m).abs() <= tol)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::build_parity_set;
    use num_rational::Rational64;

    #[test]
    fn constant_channel() {
        let t = fourier(&Channel::<Rational64>::constant(3).unwrap());
        for d in BitString::all(3) {
            let want = if d.value() == 0 { 1.0 } else { 0.0 };
            assert_eq!(t.coefficient(d, 0), want);
        }
    }

    #[test]
    fn parity_channel() {
        let s: BitString = "111".parse().unwrap();
        let t = fourier(&Channel::<Rational64>::parity_of(s).unwrap());
        assert!((t.coefficient(s, 0) - 0.5).abs() < 1e-15);
        assert!((t.coefficient(s, 1) + 0.5).abs() < 1e-15);
    }

    #[test]
    fn first_two_bits() {
        let ch = Channel::<Rational64>::first_bits(3, 2).unwrap();
        let t = fourier(&ch);
        let s: BitString = "111".parse().unwrap();
        for m in 0..4 {
            assert_eq!(t.coefficient(s, m), 0.0);
        }
        let back = t.reconstruct();
        for x in BitString::all(3) {
            for (m, b) in back[x.index()].iter().enumerate() {
                assert!((b - ch.prob(m, x).to_f64()).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn po_examples() {
        let ps = build_parity_set(3, 3).unwrap();
        assert!(!po_via_fourier(&Channel::<Rational64>::identity(3).unwrap(), &ps, 1e-10).unwrap());
        assert!(po_via_fourier(&Channel::<Rational64>::constant(3).unwrap(), &ps, 1e-10).unwrap());
    }
}
