//! Pauli observable families and their character tables.

use crate::classical::{CorrelationSpec, ProductConstraint};
use crate::error::{Error, Result};
use crate::game::BitString;
use crate::matrix::{spectral_norm, ComplexMatrix, HermitianOperator};
use crate::quantum::pauli::{pauli_string, Pauli};

pub const FAMILY_TOL: f64 = 1e-10;

/// χ(x) = sign·(−1)^{popcount(mask & x)}.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Character {
    pub mask: u32,
    pub sign: i8,
}

impl Character {
    /// (−1)^{x_y}.
    pub fn bit(n: usize, y: usize) -> Self {
        Self { mask: 1 << (n - y), sign: 1 }
    }

    pub fn negated(self) -> Self {
        Self { mask: self.mask, sign: -self.sign }
    }

    pub fn times(self, other: Self) -> Self {
        Self { mask: self.mask ^ other.mask, sign: self.sign * other.sign }
    }

    pub fn eval(&self, x: BitString) -> i8 {
        if (self.mask & x.value()).count_ones().is_multiple_of(2) {
            self.sign
        } else {
            -self.sign
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockMember {
    pub label: String,
    pub character: Character,
}

/// A commuting set: its generators fix one joint eigenstate per input.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    pub inputs: Vec<BitString>,
    pub generators: Vec<BlockMember>,
    /// Product of all generators.
    pub product: BlockMember,
}

impl Block {
    pub fn members(&self) -> impl Iterator<Item = &BlockMember> {
        self.generators.iter().chain(std::iter::once(&self.product))
    }

    pub fn contains(&self, x: BitString) -> bool {
        self.inputs.contains(&x)
    }

    /// Restricts a character to the block's inputs.
    fn pattern(&self, c: Character) -> Vec<i8> {
        self.inputs.iter().map(|&x| c.eval(x)).collect()
    }
}

#[derive(Clone, Debug)]
pub struct NamedObservable {
    pub label: String,
    /// Signed Pauli string, e.g. "XZ" or "-ZZ".
    pub pauli: String,
    pub operator: HermitianOperator,
}

#[derive(Clone, Debug)]
pub struct ObservableFamily {
    n: usize,
    g: usize,
    dim: usize,
    observables: Vec<NamedObservable>,
    blocks: Vec<Block>,
    product_constraints: Vec<ProductConstraint>,
    /// (alias, canonical) pairs for labels identified by construction.
    aliases: Vec<(String, String)>,
}

/// Pauli string with a phase i^phase.
#[derive(Clone, Debug, PartialEq, Eq)]
struct PhasedPauli {
    phase: u8,
    ops: Vec<Pauli>,
}

impl PhasedPauli {
    fn parse(s: &str) -> Self {
        Self {
            phase: 0,
            ops: s.chars().map(|c| Pauli::from_char(c).expect("static Pauli")).collect(),
        }
    }

    fn mul(&self, other: &Self) -> Self {
        let mut phase = self.phase + other.phase;
        let ops = self
            .ops
            .iter()
            .zip(&other.ops)
            .map(|(&a, &b)| {
                use Pauli::*;
                let (p, r) = match (a, b) {
                    (I, q) | (q, I) => (0, q),
                    (X, X) | (Y, Y) | (Z, Z) => (0, I),
                    (X, Y) => (1, Z),
                    (Y, X) => (3, Z),
                    (Y, Z) => (1, X),
                    (Z, Y) => (3, X),
                    (Z, X) => (1, Y),
                    (X, Z) => (3, Y),
                };
                phase += p;
                r
            })
            .collect();
        Self { phase: phase % 4, ops }
    }

    fn display(&self) -> String {
        let body: String = self.ops.iter().map(|p| p.to_string()).collect();
        match self.phase {
            0 => body,
            2 => format!("-{body}"),
            1 => format!("i{body}"),
            _ => format!("-i{body}"),
        }
    }

    fn operator(&self) -> Result<HermitianOperator> {
        let base = pauli_string(&self.ops)?;
        match self.phase {
            0 => Ok(base),
            2 => Ok(base.scale(-1.0)),
            _ => Err(Error::NotHermitian(1.0)),
        }
    }

    fn tensor(&self, other: &Self) -> Self {
        let mut ops = self.ops.clone();
        ops.extend(&other.ops);
        Self { phase: (self.phase + other.phase) % 4, ops }
    }
}

struct Builder {
    n: usize,
    g: usize,
    observables: Vec<(String, PhasedPauli)>,
    blocks: Vec<Block>,
    constraints: Vec<ProductConstraint>,
    aliases: Vec<(String, String)>,
}

impl Builder {
    fn new(n: usize, g: usize) -> Self {
        Self {
            n,
            g,
            observables: Vec::new(),
            blocks: Vec::new(),
            constraints: Vec::new(),
            aliases: Vec::new(),
        }
    }

    fn add(&mut self, label: &str, p: PhasedPauli) {
        self.observables.push((label.to_string(), p));
    }

    fn get(&self, label: &str) -> &PhasedPauli {
        &self.observables.iter().find(|(l, _)| l == label).expect("declared label").1
    }

    fn alias(&mut self, alias: &str, canonical: &str) {
        self.aliases.push((alias.to_string(), canonical.to_string()));
    }

    /// Adds a block whose product member is computed from the generators.
    fn block(&mut self, inputs: Vec<BitString>, generators: &[(&str, Character)], product: &str) {
        let mut op = PhasedPauli { phase: 0, ops: vec![Pauli::I; self.get(generators[0].0).ops.len()] };
        let mut ch = Character { mask: 0, sign: 1 };
        for (label, c) in generators {
            op = op.mul(self.get(label));
            ch = ch.times(*c);
        }
        if !self.observables.iter().any(|(l, _)| l == product) {
            self.add(product, op);
        }
        self.constraints.push(ProductConstraint {
            factors: generators.iter().map(|(l, _)| l.to_string()).collect(),
            result: product.to_string(),
            sign: 1,
        });
        self.blocks.push(Block {
            inputs,
            generators: generators
                .iter()
                .map(|(l, c)| BlockMember { label: l.to_string(), character: *c })
                .collect(),
            product: BlockMember { label: product.to_string(), character: ch },
        });
    }

    fn finish(self) -> Result<ObservableFamily> {
        let dim = 1usize << self.observables[0].1.ops.len();
        let observables = self
            .observables
            .into_iter()
            .map(|(label, p)| {
                Ok(NamedObservable { label, pauli: p.display(), operator: p.operator()? })
            })
            .collect::<Result<Vec<_>>>()?;
        let family = ObservableFamily {
            n: self.n,
            g: self.g,
            dim,
            observables,
            blocks: self.blocks,
            product_constraints: self.constraints,
            aliases: self.aliases,
        };
        family.validate(FAMILY_TOL)?;
        Ok(family)
    }
}

fn inputs_with(n: usize, pred: impl Fn(BitString) -> bool) -> Vec<BitString> {
    BitString::all(n).filter(|&x| pred(x)).collect()
}

fn strings(n: usize, list: &[&str]) -> Vec<BitString> {
    let out: Vec<BitString> = list.iter().map(|s| s.parse().expect("static input")).collect();
    debug_assert!(out.iter().all(|x| x.len() == n));
    out
}

/// Pauli strings (A1, A2, [A^1..A^{n-2}]) for the g = n family.
fn nn_generators(n: usize) -> (PhasedPauli, PhasedPauli, Vec<PhasedPauli>) {
    match n {
        3 => (
            PhasedPauli::parse("XX"),
            PhasedPauli::parse("XZ"),
            vec![PhasedPauli::parse("XI")],
        ),
        4 => (
            PhasedPauli::parse("XXX"),
            PhasedPauli::parse("XZX"),
            vec![PhasedPauli::parse("XII"), PhasedPauli::parse("IIX")],
        ),
        _ => {
            let (a1, a2, primes) = nn_generators(n - 1);
            let x = PhasedPauli::parse("X");
            let id = PhasedPauli::parse("I");
            let mut next: Vec<PhasedPauli> = primes[..n - 3].iter().map(|p| p.tensor(&id)).collect();
            next.push(id.tensor(&primes[n - 4]));
            (a1.tensor(&x), a2.tensor(&x), next)
        }
    }
}

fn build_nn(n: usize) -> Result<ObservableFamily> {
    let (a1, a2, primes) = nn_generators(n);
    let mut b = Builder::new(n, n);
    b.add("A1", a1);
    b.add("A2", a2);
    let prime_labels: Vec<String> = (1..=n - 2).map(|k| format!("A^{k}")).collect();
    for (l, p) in prime_labels.iter().zip(primes) {
        b.add(l, p);
    }
    let even = inputs_with(n, |x| x.weight() % 2 == 0);
    let odd = inputs_with(n, |x| x.weight() % 2 == 1);
    for (i, inputs) in [(1, even), (2, odd)] {
        let first = format!("A{i}");
        let mut gens: Vec<(&str, Character)> = vec![(first.as_str(), Character::bit(n, 1))];
        for (k, l) in prime_labels.iter().enumerate() {
            gens.push((l.as_str(), Character::bit(n, k + 2)));
        }
        b.block(inputs, &gens, &format!("~A{i}"));
    }
    b.finish()
}

const BLOCKS_4_3: [[&str; 4]; 4] = [
    ["0000", "0011", "1100", "1111"],
    ["0101", "1010", "0110", "1001"],
    ["0001", "1110", "0010", "1101"],
    ["0100", "1011", "0111", "1000"],
];

/// Four commuting pairs; `pairs[k]` names the observables for x₁ and x₃ in block k.
fn build_4_3(ops: &[(&str, &str)], pairs: [(&str, &str); 4], aliases: &[(&str, &str)]) -> Result<ObservableFamily> {
    let mut b = Builder::new(4, 3);
    for (l, p) in ops {
        b.add(l, PhasedPauli::parse(p));
    }
    for (alias, canonical) in aliases {
        b.alias(alias, canonical);
    }
    for (k, (first, third)) in pairs.iter().enumerate() {
        b.block(
            strings(4, &BLOCKS_4_3[k]),
            &[(first, Character::bit(4, 1)), (third, Character::bit(4, 3))],
            &format!("~A{}", k + 1),
        );
    }
    b.finish()
}

pub fn build_family(n: usize, g: usize) -> Result<ObservableFamily> {
    match (n, g) {
        (n, g) if g == n && (3..=12).contains(&n) => build_nn(n),
        (4, 3) => build_4_3(
            &[("A1", "XI"), ("A2", "ZI"), ("A'1", "IX"), ("A'2", "IZ")],
            [("A1", "A'1"), ("A2", "A'2"), ("A1", "A'2"), ("A2", "A'1")],
            &[("A3", "A1"), ("A4", "A2"), ("A'3", "A'2"), ("A'4", "A'1")],
        ),
        _ => Err(Error::Unsupported(format!(
            "no explicit observable family for (n, g) = ({n}, {g}); use the see-saw search"
        ))),
    }
}

/// (4,3) assignment identifying A'₃ with A₁ and A'₄ with A'₁. Its block sums
/// are not parity-oblivious, so states cannot be built from it; it is kept
/// for the spectral-norm bound.
pub fn aliased_family_4_3() -> ObservableFamily {
    build_4_3(
        &[("A1", "XX"), ("A2", "XY"), ("A3", "ZY"), ("A4", "ZX"), ("A'1", "YY"), ("A'2", "YX")],
        [("A1", "A'1"), ("A2", "A'2"), ("A3", "A1"), ("A4", "A'1")],
        &[("A'3", "A1"), ("A'4", "A'1")],
    )
    .expect("static family")
}

impl ObservableFamily {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn g(&self) -> usize {
        self.g
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn observables(&self) -> &[NamedObservable] {
        &self.observables
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn product_constraints(&self) -> &[ProductConstraint] {
        &self.product_constraints
    }

    pub fn aliases(&self) -> &[(String, String)] {
        &self.aliases
    }

    pub fn labels(&self) -> Vec<String> {
        self.observables.iter().map(|o| o.label.clone()).collect()
    }

    pub fn observable(&self, label: &str) -> Result<&HermitianOperator> {
        let canonical = self
            .aliases
            .iter()
            .find(|(a, _)| a == label)
            .map_or(label, |(_, c)| c.as_str());
        self.observables
            .iter()
            .find(|o| o.label == canonical)
            .map(|o| &o.operator)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn commuting_sets(&self) -> Vec<Vec<String>> {
        self.blocks
            .iter()
            .map(|b| b.members().map(|m| m.label.clone()).collect())
            .collect()
    }

    pub fn block_of(&self, x: BitString) -> Result<&Block> {
        self.blocks
            .iter()
            .find(|b| b.contains(x))
            .ok_or_else(|| Error::InvalidGame(format!("input {x} is in no block")))
    }

    /// Checks squares, commutators, product identities and the block partition.
    pub fn validate(&self, tol: f64) -> Result<()> {
        for o in &self.observables {
            if o.operator.dim() != self.dim {
                return Err(Error::DimensionMismatch(format!("{} has dim {}", o.label, o.operator.dim())));
            }
            let dev = o.operator.involution_deviation();
            if dev > tol {
                return Err(Error::NotInvolution(format!("{} (deviation {dev:.3e})", o.label)));
            }
        }
        for (k, b) in self.blocks.iter().enumerate() {
            let ops = b
                .members()
                .map(|m| self.observable(&m.label))
                .collect::<Result<Vec<_>>>()?;
            for i in 0..ops.len() {
                for j in i + 1..ops.len() {
                    let (a, c) = (ops[i].matrix(), ops[j].matrix());
                    let dev = (&(a * c) - &(c * a)).max_abs();
                    if dev > tol {
                        return Err(Error::InconsistentSignPattern(format!(
                            "block {} members do not commute (deviation {dev:.3e})",
                            k + 1
                        )));
                    }
                }
            }
            if (1usize << b.generators.len()) != self.dim {
                return Err(Error::InconsistentSignPattern(format!(
                    "block {} has {} generators for dimension {}",
                    k + 1,
                    b.generators.len(),
                    self.dim
                )));
            }
        }
        for c in &self.product_constraints {
            let mut prod = ComplexMatrix::identity(self.dim);
            for f in &c.factors {
                prod = &prod * self.observable(f)?.matrix();
            }
            let want = self.observable(&c.result)?.matrix().scale_real(c.sign as f64);
            let dev = prod.max_abs_diff(&want);
            if dev > tol {
                return Err(Error::InconsistentSignPattern(format!(
                    "product {:?} != {}{} (deviation {dev:.3e})",
                    c.factors,
                    if c.sign < 0 { "-" } else { "" },
                    c.result
                )));
            }
        }
        let mut seen = vec![0usize; 1 << self.n];
        for b in &self.blocks {
            for x in &b.inputs {
                seen[x.index()] += 1;
            }
        }
        if seen.iter().any(|&c| c != 1) {
            return Err(Error::InvalidGame("blocks do not partition the inputs".into()));
        }
        Ok(())
    }

    /// Sparse form of Σ_x (−1)^{x_y} ρ_x as signed member labels, per block.
    pub fn combination_terms(&self, y: usize) -> Result<Vec<(String, i64)>> {
        let target = Character::bit(self.n, y);
        let mut terms: Vec<(String, i64)> = Vec::new();
        for (k, b) in self.blocks.iter().enumerate() {
            let want = b.pattern(target);
            let neg: Vec<i8> = want.iter().map(|v| -v).collect();
            let hit = b.members().find_map(|m| {
                let p = b.pattern(m.character);
                if p == want {
                    Some((m.label.clone(), 1))
                } else if p == neg {
                    Some((m.label.clone(), -1))
                } else {
                    None
                }
            });
            let (label, sign) = hit.ok_or_else(|| {
                Error::InconsistentSignPattern(format!("bit {y} is not a member character of block {}", k + 1))
            })?;
            let label = self.canonical(&label).to_string();
            match terms.iter_mut().find(|(l, _)| *l == label) {
                Some(t) => t.1 += sign,
                None => terms.push((label, sign)),
            }
        }
        terms.retain(|(_, c)| *c != 0);
        Ok(terms)
    }

    fn canonical<'a>(&'a self, label: &'a str) -> &'a str {
        self.aliases
            .iter()
            .find(|(a, _)| a == label)
            .map_or(label, |(_, c)| c.as_str())
    }

    /// Operator C_y from the member labels.
    pub fn alice_combination(&self, y: usize) -> Result<HermitianOperator> {
        let terms = self.combination_terms(y)?;
        if terms.is_empty() {
            return HermitianOperator::symmetrized(&ComplexMatrix::zeros(self.dim, self.dim));
        }
        let parts = terms
            .iter()
            .map(|(l, c)| Ok((*c as f64, self.observable(l)?)))
            .collect::<Result<Vec<_>>>()?;
        HermitianOperator::linear_combination(&parts)
    }

    /// Symbolic correlation with one Bob index per bit.
    pub fn correlation_spec(&self) -> Result<CorrelationSpec> {
        let labels = self.labels();
        let label_refs: Vec<&str> = labels.iter().map(String::as_str).collect();
        let rows_owned = (1..=self.n)
            .map(|y| self.combination_terms(y))
            .collect::<Result<Vec<_>>>()?;
        let rows: Vec<Vec<(&str, i64)>> = rows_owned
            .iter()
            .map(|r| r.iter().map(|(l, c)| (l.as_str(), *c)).collect())
            .collect();
        CorrelationSpec::from_rows(&label_refs, &rows, self.product_constraints.clone())
    }

    /// B_y = C_y/‖C_y‖, defined only when each C_y has a flat spectrum.
    pub fn normalized_bobs(&self) -> Result<Vec<HermitianOperator>> {
        (1..=self.n)
            .map(|y| {
                let c = self.alice_combination(y)?;
                let norm = spectral_norm(&c);
                if norm < FAMILY_TOL {
                    return Err(Error::NotInvolution(format!("C_{y} vanishes")));
                }
                let b = c.scale(1.0 / norm);
                let dev = b.involution_deviation();
                if dev > FAMILY_TOL {
                    return Err(Error::NotInvolution(format!(
                        "C_{y}/||C_{y}|| does not square to the identity (deviation {dev:.3e})"
                    )));
                }
                Ok(b)
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::pauli::pauli;

    fn op(f: &ObservableFamily, l: &str) -> ComplexMatrix {
        f.observable(l).unwrap().matrix().clone()
    }

    #[test]
    fn three_bit_family() {
        let f = build_family(3, 3).unwrap();
        assert_eq!(f.dim(), 4);
        for (l, p) in [("A1", "XX"), ("A2", "XZ"), ("A^1", "XI"), ("~A1", "IX"), ("~A2", "IZ")] {
            assert_eq!(op(&f, l), pauli(p).unwrap().matrix().clone(), "{l}");
        }
        assert_eq!(f.commuting_sets()[0], vec!["A1", "A^1", "~A1"]);
    }

    #[test]
    fn four_bit_family() {
        let f = build_family(4, 4).unwrap();
        for (l, p) in [
            ("A1", "XXX"),
            ("A2", "XZX"),
            ("A^1", "XII"),
            ("A^2", "IIX"),
            ("~A1", "IXI"),
            ("~A2", "IZI"),
        ] {
            assert_eq!(op(&f, l), pauli(p).unwrap().matrix().clone(), "{l}");
        }
    }

    #[test]
    fn recursive_families() {
        let f = build_family(5, 5).unwrap();
        assert_eq!(f.observables()[0].pauli, "XXXX");
        let tilde = f.observables().iter().find(|o| o.label == "~A1").unwrap();
        assert_eq!(tilde.pauli, "IXII");
        let tilde = f.observables().iter().find(|o| o.label == "~A2").unwrap();
        assert_eq!(tilde.pauli, "IZII");
        for n in 6..=8 {
            let f = build_family(n, n).unwrap();
            assert_eq!(f.dim(), 1 << (n - 1));
        }
    }

    #[test]
    fn unsupported_games() {
        assert!(matches!(build_family(3, 2), Err(Error::Unsupported(_))));
        assert!(build_family(5, 3).is_err());
    }

    #[test]
    fn three_bit_combinations() {
        let f = build_family(3, 3).unwrap();
        assert_eq!(f.combination_terms(1).unwrap(), vec![("A1".into(), 1), ("A2".into(), 1)]);
        assert_eq!(f.combination_terms(2).unwrap(), vec![("A^1".into(), 2)]);
        assert_eq!(f.combination_terms(3).unwrap(), vec![("~A1".into(), 1), ("~A2".into(), -1)]);
    }

    #[test]
    fn four_three_combinations() {
        let f = build_family(4, 3).unwrap();
        assert_eq!(f.combination_terms(1).unwrap(), vec![("A1".into(), 2), ("A2".into(), 2)]);
        assert_eq!(f.combination_terms(2).unwrap(), vec![("A1".into(), 2), ("A2".into(), -2)]);
        assert_eq!(f.combination_terms(3).unwrap(), vec![("A'1".into(), 2), ("A'2".into(), 2)]);
        assert_eq!(f.combination_terms(4).unwrap(), vec![("A'1".into(), 2), ("A'2".into(), -2)]);
        let a = aliased_family_4_3();
        assert_eq!(
            a.combination_terms(3).unwrap(),
            vec![("A'1".into(), 2), ("A'2".into(), 1), ("A1".into(), 1)]
        );
        assert_eq!(
            a.combination_terms(4).unwrap(),
            vec![("A'1".into(), 2), ("A'2".into(), -1), ("A1".into(), -1)]
        );
    }

    #[test]
    fn normalized_bobs_three_bit() {
        let f = build_family(3, 3).unwrap();
        let b = f.normalized_bobs().unwrap();
        let s = 1.0 / 2f64.sqrt();
        let want1 = (&op(&f, "A1") + &op(&f, "A2")).scale_real(s);
        assert!(b[0].matrix().max_abs_diff(&want1) < 1e-12);
        assert!(b[1].matrix().max_abs_diff(&op(&f, "A^1")) < 1e-12);
        assert!(aliased_family_4_3().normalized_bobs().is_err());
    }

    #[test]
    fn character_eval() {
        let x: BitString = "101".parse().unwrap();
        assert_eq!(Character::bit(3, 1).eval(x), -1);
        assert_eq!(Character::bit(3, 2).eval(x), 1);
        assert_eq!(Character::bit(3, 1).times(Character::bit(3, 3)).eval(x), 1);
        assert_eq!(Character::bit(3, 2).negated().eval(x), -1);
    }

    #[test]
    fn phased_products() {
        let p = PhasedPauli::parse("XX").mul(&PhasedPauli::parse("YY"));
        assert_eq!(p.display(), "-ZZ");
        let p = PhasedPauli::parse("ZY").mul(&PhasedPauli::parse("XX"));
        assert_eq!(p.display(), "YZ");
    }
}
