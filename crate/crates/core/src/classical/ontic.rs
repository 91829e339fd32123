use std::collections::HashMap;

use crate::error::{Error, Result};

/// Π factors = sign · result, as a constraint on ±1 values.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductConstraint {
    pub factors: Vec<String>,
    pub result: String,
    pub sign: i8,
}

impl ProductConstraint {
    pub fn new(factors: &[&str], result: &str, sign: i8) -> Self {
        Self {
            factors: factors.iter().map(|s| s.to_string()).collect(),
            result: result.to_string(),
            sign,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorrelationTerm {
    /// One coefficient per alice label.
    pub coefficients: Vec<i64>,
    /// 1-based Bob observable index.
    pub bob: usize,
}

/// Symbolic Σ (Alice combination) ⊗ B_y.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorrelationSpec {
    alice_labels: Vec<String>,
    bob_count: usize,
    terms: Vec<CorrelationTerm>,
    constraints: Vec<ProductConstraint>,
}

impl CorrelationSpec {
    pub fn new(
        alice_labels: Vec<String>,
        bob_count: usize,
        terms: Vec<CorrelationTerm>,
        constraints: Vec<ProductConstraint>,
    ) -> Result<Self> {
        let mut seen = HashMap::new();
        for (i, l) in alice_labels.iter().enumerate() {
            if seen.insert(l.as_str(), i).is_some() {
                return Err(Error::InvalidGame(format!("duplicate label `{l}`")));
            }
        }
        for t in &terms {
            if t.coefficients.len() != alice_labels.len() {
                return Err(Error::DimensionMismatch(format!(
                    "term has {} coefficients for {} labels",
                    t.coefficients.len(),
                    alice_labels.len()
                )));
            }
            if t.bob == 0 || t.bob > bob_count {
                return Err(Error::UnknownLabel(format!("B{}", t.bob)));
            }
        }
        for c in &constraints {
            if c.sign != 1 && c.sign != -1 {
                return Err(Error::InvalidGame(format!("constraint sign {}", c.sign)));
            }
            for l in c.factors.iter().chain(std::iter::once(&c.result)) {
                if !seen.contains_key(l.as_str()) {
                    return Err(Error::UnknownLabel(l.clone()));
                }
            }
        }
        Ok(Self { alice_labels, bob_count, terms, constraints })
    }

    /// Builds from per-Bob sparse rows of (label, coefficient).
    pub fn from_rows(
        alice_labels: &[&str],
        rows: &[Vec<(&str, i64)>],
        constraints: Vec<ProductConstraint>,
    ) -> Result<Self> {
        let labels: Vec<String> = alice_labels.iter().map(|s| s.to_string()).collect();
        let mut terms = Vec::new();
        for (b, row) in rows.iter().enumerate() {
            let mut coefficients = vec![0i64; labels.len()];
            for (l, c) in row {
                let i = labels
                    .iter()
                    .position(|x| x == l)
                    .ok_or_else(|| Error::UnknownLabel(l.to_string()))?;
                coefficients[i] += c;
            }
            terms.push(CorrelationTerm { coefficients, bob: b + 1 });
        }
        Self::new(labels, rows.len(), terms, constraints)
    }

    /// (A1+A2)B1 + Σ_k 2A^k B_{k+1} + (~A1−~A2)B_n with ~Ai = Ai·ΠA^k.
    pub fn delta_n_n(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::Unsupported(format!("g = n correlation needs n >= 3, got {n}")));
        }
        let primes: Vec<String> = (1..=n - 2).map(|k| format!("A^{k}")).collect();
        let mut labels = vec!["A1".to_string(), "A2".to_string()];
        labels.extend(primes.iter().cloned());
        labels.push("~A1".into());
        labels.push("~A2".into());
        let label_refs: Vec<&str> = labels.iter().map(String::as_str).collect();
        let mut rows = vec![vec![("A1", 1), ("A2", 1)]];
        for p in &primes {
            rows.push(vec![(p.as_str(), 2)]);
        }
        rows.push(vec![("~A1", 1), ("~A2", -1)]);
        let constraints = (1..=2)
            .map(|i| {
                let mut factors = vec![format!("A{i}")];
                factors.extend(primes.iter().cloned());
                ProductConstraint { factors, result: format!("~A{i}"), sign: 1 }
            })
            .collect();
        Self::from_rows(&label_refs, &rows, constraints)
    }

    pub fn delta_3_3() -> Self {
        Self::delta_n_n(3).expect("static spec")
    }

    pub fn delta_4_4() -> Self {
        Self::delta_n_n(4).expect("static spec")
    }

    /// Four-bit, g = 3 correlation with A3, A4 kept as separate labels.
    pub fn delta_4_3() -> Self {
        Self::from_rows(
            &["A1", "A2", "A3", "A4", "A'1", "A'2"],
            &[
                vec![("A1", 1), ("A2", 1), ("A3", 1), ("A4", 1)],
                vec![("A1", 1), ("A2", -1), ("A3", 1), ("A4", -1)],
                vec![("A'1", 2), ("A'2", 1), ("A1", 1)],
                vec![("A'1", 2), ("A'2", -1), ("A1", -1)],
            ],
            Vec::new(),
        )
        .expect("static spec")
    }

    pub fn alice_labels(&self) -> &[String] {
        &self.alice_labels
    }

    pub fn bob_count(&self) -> usize {
        self.bob_count
    }

    pub fn terms(&self) -> &[CorrelationTerm] {
        &self.terms
    }

    pub fn constraints(&self) -> &[ProductConstraint] {
        &self.constraints
    }

    fn index_of(&self, label: &str) -> usize {
        self.alice_labels.iter().position(|l| l == label).expect("validated label")
    }

    pub fn satisfies_constraints(&self, alice: &[i8]) -> bool {
        self.constraints.iter().all(|c| {
            let prod: i8 = c.factors.iter().map(|f| alice[self.index_of(f)]).product();
            prod == c.sign * alice[self.index_of(&c.result)]
        })
    }

    /// Alice coefficient sum per Bob index.
    pub fn bob_fields(&self, alice: &[i8]) -> Vec<i64> {
        let mut fields = vec![0i64; self.bob_count];
        for t in &self.terms {
            fields[t.bob - 1] += t
                .coefficients
                .iter()
                .zip(alice)
                .map(|(c, &a)| c * a as i64)
                .sum::<i64>();
        }
        fields
    }

    pub fn value(&self, alice: &[i8], bob: &[i8]) -> i64 {
        self.bob_fields(alice)
            .iter()
            .zip(bob)
            .map(|(f, &b)| f * b as i64)
            .sum()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OnticMax {
    pub value: i64,
    /// Alice assignment, aligned with the spec's labels.
    pub alice: Vec<(String, i8)>,
    pub bob: Vec<i8>,
}

/// Max of the spec over constrained ±1 assignments; Bob is chosen in closed form.
pub fn ontic_max(spec: &CorrelationSpec) -> Result<OnticMax> {
    let l = spec.alice_labels.len();
    if l > 24 {
        return Err(Error::Unsupported(format!("{l} alice labels is too many to enumerate")));
    }
    let mut best: Option<(i64, Vec<i8>)> = None;
    let mut alice = vec![1i8; l];
    for mask in 0u32..(1 << l) {
        for (i, a) in alice.iter_mut().enumerate() {
            *a = if mask >> i & 1 == 0 { 1 } else { -1 };
        }
        if !spec.satisfies_constraints(&alice) {
            continue;
        }
        let v: i64 = spec.bob_fields(&alice).iter().map(|f| f.abs()).sum();
        if best.as_ref().is_none_or(|(b, _)| v > *b) {
            best = Some((v, alice.clone()));
        }
    }
    let (value, alice) = best.ok_or(Error::InconsistentConstraints)?;
    let bob = spec
        .bob_fields(&alice)
        .iter()
        .map(|&f| if f >= 0 { 1 } else { -1 })
        .collect();
    Ok(OnticMax {
        value,
        alice: spec.alice_labels.iter().cloned().zip(alice).collect(),
        bob,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_maxima() {
        assert_eq!(ontic_max(&CorrelationSpec::delta_3_3()).unwrap().value, 4);
        assert_eq!(ontic_max(&CorrelationSpec::delta_4_4()).unwrap().value, 6);
        assert_eq!(ontic_max(&CorrelationSpec::delta_4_3()).unwrap().value, 8);
    }

    #[test]
    fn n_n_family_maxima() {
        for n in 3..=8 {
            let m = ontic_max(&CorrelationSpec::delta_n_n(n).unwrap()).unwrap();
            assert_eq!(m.value, 2 * (n as i64 - 1));
        }
    }

    #[test]
    fn witness_attains_value() {
        let spec = CorrelationSpec::delta_3_3();
        let m = ontic_max(&spec).unwrap();
        let alice: Vec<i8> = m.alice.iter().map(|(_, a)| *a).collect();
        assert!(spec.satisfies_constraints(&alice));
        assert_eq!(spec.value(&alice, &m.bob), m.value);
    }

    #[test]
    fn unconstrained_delta_3_is_larger() {
        let s = CorrelationSpec::delta_3_3();
        let free = CorrelationSpec::new(
            s.alice_labels().to_vec(),
            s.bob_count(),
            s.terms().to_vec(),
            Vec::new(),
        )
        .unwrap();
        assert_eq!(ontic_max(&free).unwrap().value, 6);
    }

    #[test]
    fn inconsistent_constraints_reported() {
        let spec = CorrelationSpec::from_rows(
            &["A", "B"],
            &[vec![("A", 1)]],
            vec![ProductConstraint::new(&["A"], "B", 1), ProductConstraint::new(&["A"], "B", -1)],
        )
        .unwrap();
        assert!(matches!(ontic_max(&spec), Err(Error::InconsistentConstraints)));
    }

    #[test]
    fn rejects_unknown_labels() {
        assert!(CorrelationSpec::from_rows(&["A"], &[vec![("Z", 1)]], vec![]).is_err());
        assert!(CorrelationSpec::from_rows(
            &["A"],
            &[vec![("A", 1)]],
            vec![ProductConstraint::new(&["A"], "Q", 1)]
        )
        .is_err());
    }
}
