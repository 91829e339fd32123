//! Dense complex matrices and a Hermitian eigensolver.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub const HERMITIAN_TOL: f64 = 1e-12;

/// Row-major dense complex matrix.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::DimensionMismatch(format!(
                "matrix dimensions must be positive, got {rows}x{cols}"
            )));
        }
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        Self {
            rows,
            cols,
            data: vec![C64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim, dim);
        for i in 0..dim {
            m.data[i * dim + i] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Self::new(r, c, rows.concat())
    }

    pub fn from_real(rows: usize, cols: usize, data: &[f64]) -> Result<Self> {
        Self::new(rows, cols, data.iter().map(|&v| C64::new(v, 0.0)).collect())
    }

    /// Diagonal matrix with real entries.
    pub fn diagonal(values: &[f64]) -> Self {
        let mut m = Self::zeros(values.len(), values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = C64::new(v, 0.0);
        }
        m
    }

    /// |v><v| for a column vector v.
    pub fn outer(v: &[C64]) -> Self {
        let d = v.len();
        let mut m = Self::zeros(d, d);
        for i in 0..d {
            for j in 0..d {
                m.data[i * d + j] = v[i] * v[j].conj();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self.data[i * self.cols + j]).collect()
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[j * self.rows + i] = self.data[i * self.cols + j].conj();
            }
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[j * self.rows + i] = self.data[i * self.cols + j];
            }
        }
        out
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            let row = &mut out.data[i * other.cols..(i + 1) * other.cols];
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                let brow = &other.data[k * other.cols..(k + 1) * other.cols];
                for (o, b) in row.iter_mut().zip(brow) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[C64]) -> Result<Vec<C64>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix applied to vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        Ok((0..self.rows)
            .map(|i| {
                self.data[i * self.cols..(i + 1) * self.cols]
                    .iter()
                    .zip(v)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect())
    }

    pub fn scale(&self, c: C64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v * c).collect(),
        }
    }

    pub fn scale_real(&self, c: f64) -> Self {
        self.scale(C64::new(c, 0.0))
    }

    fn zip_with(&self, other: &Self, f: impl Fn(C64, C64) -> C64) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    /// In-place `self += c * other`.
    pub fn add_scaled(&mut self, other: &Self, c: C64) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += c * b;
        }
        Ok(())
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols))
            .map(|i| self.data[i * self.cols + i])
            .sum()
    }

    /// Max entrywise modulus of the difference; infinite on shape mismatch.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        if self.rows != other.rows || self.cols != other.cols {
            return f64::INFINITY;
        }
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Max entrywise modulus of `self - self†`.
    pub fn hermitian_deviation(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let n = self.rows;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                let d = (self.data[i * n + j] - self.data[j * n + i].conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_deviation() <= tol
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let v = self.data[i * self.cols + j];
                write!(f, "{:+.4}{:+.4}i ", v.re, v.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        &mut self.data[i * self.cols + j]
    }
}

// Operator impls panic on shape mismatch; use the try_ methods for fallible paths.
impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs).expect("matrix product shape mismatch")
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.try_add(rhs).expect("matrix sum shape mismatch")
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.try_sub(rhs).expect("matrix difference shape mismatch")
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        self.scale_real(-1.0)
    }
}

impl Mul<f64> for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: f64) -> ComplexMatrix {
        self.scale_real(rhs)
    }
}

pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let rows = a.rows * b.rows;
    let cols = a.cols * b.cols;
    let mut data = vec![C64::new(0.0, 0.0); rows * cols];
    for i in 0..a.rows {
        for j in 0..a.cols {
            let av = a.data[i * a.cols + j];
            if av.re == 0.0 && av.im == 0.0 {
                continue;
            }
            for k in 0..b.rows {
                let r = i * b.rows + k;
                for l in 0..b.cols {
                    data[r * cols + j * b.cols + l] = av * b.data[k * b.cols + l];
                }
            }
        }
    }
    ComplexMatrix { rows, cols, data }
}

/// tr(a·b) without forming the product.
pub fn trace_product(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<C64> {
    if a.cols != b.rows || a.rows != b.cols {
        return Err(Error::DimensionMismatch(format!(
            "trace of {}x{} times {}x{} is undefined",
            a.rows, a.cols, b.rows, b.cols
        )));
    }
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..a.rows {
        for k in 0..a.cols {
            acc += a.data[i * a.cols + k] * b.data[k * b.cols + i];
        }
    }
    Ok(acc)
}

pub fn inner(u: &[C64], v: &[C64]) -> C64 {
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}

pub fn vec_norm(v: &[C64]) -> f64 {
    v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

/// Square matrix that is Hermitian within a tolerance.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianOperator {
    matrix: ComplexMatrix,
}

impl HermitianOperator {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        Self::with_tolerance(matrix, HERMITIAN_TOL)
    }

    pub fn with_tolerance(matrix: ComplexMatrix, tol: f64) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "Hermitian operator must be square, got {}x{}",
                matrix.rows, matrix.cols
            )));
        }
        let dev = matrix.hermitian_deviation();
        if dev > tol {
            return Err(Error::NotHermitian(dev));
        }
        Ok(Self { matrix })
    }

    /// Symmetrizes (M + M†)/2; used after arithmetic that is Hermitian in exact math.
    pub fn symmetrized(matrix: &ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch("symmetrizing a non-square matrix".into()));
        }
        let m = (matrix + &matrix.adjoint()).scale_real(0.5);
        Ok(Self { matrix: m })
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            matrix: ComplexMatrix::identity(dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn scale(&self, c: f64) -> Self {
        Self {
            matrix: self.matrix.scale_real(c),
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        Ok(Self {
            matrix: self.matrix.try_add(&other.matrix)?,
        })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        Ok(Self {
            matrix: self.matrix.try_sub(&other.matrix)?,
        })
    }

    /// Real linear combination Σ c_i H_i.
    pub fn linear_combination(terms: &[(f64, &HermitianOperator)]) -> Result<Self> {
        let first = terms
            .first()
            .ok_or_else(|| Error::DimensionMismatch("empty linear combination".into()))?;
        let mut acc = ComplexMatrix::zeros(first.1.dim(), first.1.dim());
        for (c, h) in terms {
            acc.add_scaled(&h.matrix, C64::new(*c, 0.0))?;
        }
        Ok(Self { matrix: acc })
    }

    /// Max deviation of H² from the identity.
    pub fn involution_deviation(&self) -> f64 {
        (&self.matrix * &self.matrix).max_abs_diff(&ComplexMatrix::identity(self.dim()))
    }
}

impl From<HermitianOperator> for ComplexMatrix {
    fn from(h: HermitianOperator) -> Self {
        h.matrix
    }
}

#[derive(Clone, Copy, Debug)]
pub struct JacobiOptions {
    /// Stop once the off-diagonal Frobenius mass falls below tol·max(1, ‖H‖_F).
    pub off_diagonal_tol: f64,
    pub max_sweeps: usize,
    /// Eigenvalues closer than this form a degenerate cluster.
    pub degeneracy_tol: f64,
}

impl Default for JacobiOptions {
    fn default() -> Self {
        Self {
            off_diagonal_tol: 1e-13,
            max_sweeps: 100,
            degeneracy_tol: 1e-9,
        }
    }
}

#[derive(Clone, Debug)]
pub struct EigenDecomposition {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Column j is the unit eigenvector for eigenvalues[j].
    pub eigenvectors: ComplexMatrix,
}

impl EigenDecomposition {
    pub fn vector(&self, j: usize) -> Vec<C64> {
        self.eigenvectors.column(j)
    }

    /// V·diag(λ)·V†.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let v = &self.eigenvectors;
        let d = ComplexMatrix::diagonal(&self.eigenvalues);
        &(v * &d) * &v.adjoint()
    }

    pub fn min(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn max(&self) -> f64 {
        *self.eigenvalues.last().expect("nonempty spectrum")
    }
}

pub fn hermitian_eig(h: &HermitianOperator) -> EigenDecomposition {
    hermitian_eig_with(h, JacobiOptions::default())
}

/// Validates Hermiticity of a raw matrix before decomposing it.
pub fn hermitian_eig_checked(m: &ComplexMatrix, tol: f64) -> Result<EigenDecomposition> {
    let h = HermitianOperator::with_tolerance(m.clone(), tol)?;
    Ok(hermitian_eig(&h))
}

/// Cyclic complex Jacobi.
pub fn hermitian_eig_with(h: &HermitianOperator, opts: JacobiOptions) -> EigenDecomposition {
    let n = h.dim();
    let mut a = h.matrix.data.clone();
    for i in 0..n {
        for j in i + 1..n {
            let avg = (a[i * n + j] + a[j * n + i].conj()) * 0.5;
            a[i * n + j] = avg;
            a[j * n + i] = avg.conj();
        }
        a[i * n + i] = C64::new(a[i * n + i].re, 0.0);
    }
    let mut v = ComplexMatrix::identity(n).data;
    let scale = h.matrix.frobenius_norm().max(1.0);
    let threshold = opts.off_diagonal_tol * scale;

    for _ in 0..opts.max_sweeps {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i * n + j].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= threshold {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                let b = apq.norm();
                if b < 1e-300 {
                    continue;
                }
                let e = apq / b;
                let app = a[p * n + p].re;
                let aqq = a[q * n + q].re;
                let tau = (aqq - app) / (2.0 * b);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // U restricted to (p,q): [[c, s], [-s·ē, c·ē]]
                let upp = C64::new(c, 0.0);
                let upq = C64::new(s, 0.0);
                let uqp = e.conj() * (-s);
                let uqq = e.conj() * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = akp * upp + akq * uqp;
                    a[k * n + q] = akp * upq + akq * uqq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = upp.conj() * apk + uqp.conj() * aqk;
                    a[q * n + k] = upq.conj() * apk + uqq.conj() * aqk;
                }
                a[p * n + q] = C64::new(0.0, 0.0);
                a[q * n + p] = C64::new(0.0, 0.0);
                a[p * n + p] = C64::new(a[p * n + p].re, 0.0);
                a[q * n + q] = C64::new(a[q * n + q].re, 0.0);
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = vkp * upp + vkq * uqp;
                    v[k * n + q] = vkp * upq + vkq * uqq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i * n + i].re.total_cmp(&a[j * n + j].re).then(i.cmp(&j)));
    let eigenvalues: Vec<f64> = order.iter().map(|&i| a[i * n + i].re).collect();
    let mut columns: Vec<Vec<C64>> = order
        .iter()
        .map(|&j| (0..n).map(|i| v[i * n + j]).collect())
        .collect();

    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && eigenvalues[end] - eigenvalues[end - 1] <= opts.degeneracy_tol {
            end += 1;
        }
        gram_schmidt(&mut columns[start..end]);
        start = end;
    }
    for col in &mut columns {
        fix_phase(col);
    }

    let mut vecs = ComplexMatrix::zeros(n, n);
    for (j, col) in columns.iter().enumerate() {
        for (i, &c) in col.iter().enumerate() {
            vecs[(i, j)] = c;
        }
    }
    EigenDecomposition {
        eigenvalues,
        eigenvectors: vecs,
    }
}

/// Modified Gram-Schmidt in index order.
pub fn gram_schmidt(vectors: &mut [Vec<C64>]) {
    for i in 0..vectors.len() {
        let (done, rest) = vectors.split_at_mut(i);
        let v = &mut rest[0];
        for u in done.iter() {
            let proj = inner(u, v);
            for (vk, uk) in v.iter_mut().zip(u) {
                *vk -= proj * uk;
            }
        }
        let norm = vec_norm(v);
        if norm > 0.0 {
            for vk in v.iter_mut() {
                *vk /= norm;
            }
        }
    }
}

// Rotate so the first largest-modulus component is real positive.
fn fix_phase(v: &mut [C64]) {
    let mut best = 0;
    let mut best_mod = 0.0;
    for (i, c) in v.iter().enumerate() {
        if c.norm() > best_mod + 1e-12 {
            best = i;
            best_mod = c.norm();
        }
    }
    if best_mod == 0.0 {
        return;
    }
    let phase = v[best].conj() / best_mod;
    for c in v.iter_mut() {
        *c *= phase;
    }
}

/// sqrt(λ_max(H†H)), the largest singular value.
pub fn spectral_norm(h: &HermitianOperator) -> f64 {
    let m = h.matrix();
    let gram = HermitianOperator::symmetrized(&(&m.adjoint() * m)).expect("square");
    hermitian_eig(&gram).max().max(0.0).sqrt()
}

/// Sum of singular values.
pub fn trace_norm(h: &HermitianOperator) -> f64 {
    hermitian_eig(h).eigenvalues.iter().map(|l| l.abs()).sum()
}

/// P₊ − P₋ with eigenvalues ≥ −tol assigned to P₊.
pub fn sign_observable(h: &HermitianOperator, tol: f64) -> HermitianOperator {
    let eig = hermitian_eig(h);
    let signs: Vec<f64> = eig
        .eigenvalues
        .iter()
        .map(|&l| if l >= -tol { 1.0 } else { -1.0 })
        .collect();
    let v = &eig.eigenvectors;
    let m = &(v * &ComplexMatrix::diagonal(&signs)) * &v.adjoint();
    HermitianOperator::symmetrized(&m).expect("square")
}
