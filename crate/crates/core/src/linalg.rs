//! Small dense complex matrices.
//!
//! Everything here works on matrices of at most a few dozen rows (d² with
//! d ≤ 6), so the kernel favours clarity over blocking or in-place tricks.
//! Values are immutable: every operation returns a new matrix.

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use crate::error::{MebError, MebResult};

/// Default verification tolerance used across the crate.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Real dense matrix, used for stochastic matrices and rotations.
pub type RMatrix = DMatrix<f64>;

/// Dense complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix(DMatrix<C64>);

impl CMatrix {
    /// Builds a matrix from row-major entries. Rejects non-finite entries.
    pub fn new(rows: usize, cols: usize, entries: Vec<C64>) -> MebResult<Self> {
        if entries.len() != rows * cols {
            return Err(MebError::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(MebError::Malformed("non-finite matrix entry".into()));
        }
        Ok(Self(DMatrix::from_row_slice(rows, cols, &entries)))
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl FnMut(usize, usize) -> C64) -> Self {
        Self(DMatrix::from_fn(rows, cols, f))
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self(DMatrix::zeros(rows, cols))
    }

    pub fn identity(n: usize) -> Self {
        Self(DMatrix::identity(n, n))
    }

    pub fn from_real(m: &RMatrix) -> Self {
        Self(m.map(|x| C64::new(x, 0.0)))
    }

    pub fn diag(entries: &[C64]) -> Self {
        let n = entries.len();
        Self::from_fn(n, n, |i, j| if i == j { entries[i] } else { C64::new(0.0, 0.0) })
    }

    /// `|v⟩⟨v|` for a column vector `v`.
    pub fn outer(v: &[C64]) -> Self {
        let n = v.len();
        Self::from_fn(n, n, |i, j| v[i] * v[j].conj())
    }

    pub fn rows(&self) -> usize {
        self.0.nrows()
    }

    pub fn cols(&self) -> usize {
        self.0.ncols()
    }

    pub fn is_square(&self) -> bool {
        self.rows() == self.cols()
    }

    pub fn get(&self, r: usize, c: usize) -> C64 {
        self.0[(r, c)]
    }

    pub fn inner(&self) -> &DMatrix<C64> {
        &self.0
    }

    pub fn into_inner(self) -> DMatrix<C64> {
        self.0
    }

    pub fn from_inner(m: DMatrix<C64>) -> Self {
        Self(m)
    }

    /// Entries in row-major order.
    pub fn entries_row_major(&self) -> Vec<C64> {
        let mut out = Vec::with_capacity(self.rows() * self.cols());
        for r in 0..self.rows() {
            for c in 0..self.cols() {
                out.push(self.0[(r, c)]);
            }
        }
        out
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        self.0.column(j).iter().copied().collect()
    }

    pub fn dagger(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn conj(&self) -> Self {
        Self(self.0.map(|z| z.conj()))
    }

    pub fn transpose(&self) -> Self {
        Self(self.0.transpose())
    }

    pub fn matmul(&self, other: &Self) -> MebResult<Self> {
        matmul(self, other)
    }

    pub fn scale(&self, s: C64) -> Self {
        Self(self.0.map(|z| z * s))
    }

    pub fn add(&self, other: &Self) -> MebResult<Self> {
        self.same_shape(other)?;
        Ok(Self(&self.0 + &other.0))
    }

    pub fn sub(&self, other: &Self) -> MebResult<Self> {
        self.same_shape(other)?;
        Ok(Self(&self.0 - &other.0))
    }

    pub fn trace(&self) -> C64 {
        self.0.trace()
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        if self.rows() != other.rows() || self.cols() != other.cols() {
            return f64::INFINITY;
        }
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest entrywise modulus of `A - A†`.
    pub fn hermiticity_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        self.max_abs_diff(&self.dagger())
    }

    /// `⟨u|A|v⟩`.
    pub fn sandwich(&self, u: &[C64], v: &[C64]) -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        for (i, ui) in u.iter().enumerate() {
            let mut row = C64::new(0.0, 0.0);
            for (j, vj) in v.iter().enumerate() {
                row += self.0[(i, j)] * vj;
            }
            acc += ui.conj() * row;
        }
        acc
    }

    fn same_shape(&self, other: &Self) -> MebResult<()> {
        if self.rows() != other.rows() || self.cols() != other.cols() {
            return Err(MebError::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows(),
                self.cols(),
                other.rows(),
                other.cols()
            )));
        }
        Ok(())
    }
}

pub fn matmul(a: &CMatrix, b: &CMatrix) -> MebResult<CMatrix> {
    if a.cols() != b.rows() {
        return Err(MebError::DimensionMismatch(format!(
            "cannot multiply {}x{} by {}x{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    Ok(CMatrix(&a.0 * &b.0))
}

pub fn dagger(a: &CMatrix) -> CMatrix {
    a.dagger()
}

/// Kronecker product; `(A ⊗ B)[(i,k),(j,l)] = A[i,j] B[k,l]`.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    CMatrix(a.0.kronecker(&b.0))
}

/// True iff every entry of `|A†A − I|` is at most `tol`.
pub fn is_unitary(a: &CMatrix, tol: f64) -> bool {
    unitarity_residual(a) <= tol
}

pub fn unitarity_residual(a: &CMatrix) -> f64 {
    if !a.is_square() {
        return f64::INFINITY;
    }
    let prod = CMatrix(a.0.adjoint() * &a.0);
    prod.max_abs_diff(&CMatrix::identity(a.rows()))
}

/// Eigenvalues of a Hermitian matrix, sorted descending.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianSpectrum {
    pub eigenvalues: Vec<f64>,
}

impl HermitianSpectrum {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn max(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(f64::NAN)
    }

    pub fn min(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(f64::NAN)
    }

    pub fn sum(&self) -> f64 {
        self.eigenvalues.iter().sum()
    }

    /// Sorts arbitrary values descending. Ties keep their input order.
    pub fn from_unsorted(mut values: Vec<f64>) -> Self {
        values.sort_by(|a, b| b.total_cmp(a));
        Self { eigenvalues: values }
    }

    /// Largest absolute difference against another spectrum of the same
    /// length, comparing sorted entries pairwise (multiset comparison).
    pub fn max_deviation(&self, other: &Self) -> f64 {
        if self.len() != other.len() {
            return f64::INFINITY;
        }
        self.eigenvalues
            .iter()
            .zip(&other.eigenvalues)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

fn check_hermitian(a: &CMatrix, tol: f64) -> MebResult<()> {
    if !a.is_square() {
        return Err(MebError::DimensionMismatch(format!(
            "eigenvalues of a {}x{} matrix",
            a.rows(),
            a.cols()
        )));
    }
    let defect = a.hermiticity_defect();
    if defect > tol {
        return Err(MebError::NotHermitian(defect));
    }
    Ok(())
}

fn symmetrized(a: &CMatrix) -> DMatrix<C64> {
    (&a.0 + a.0.adjoint()).map(|z| z * 0.5)
}

pub fn hermitian_eigenvalues(a: &CMatrix, tol: f64) -> MebResult<HermitianSpectrum> {
    check_hermitian(a, tol)?;
    let eig = symmetrized(a).symmetric_eigenvalues();
    Ok(HermitianSpectrum::from_unsorted(eig.iter().copied().collect()))
}

/// `f(A) = V f(Λ) V†` for Hermitian `A`, together with its spectrum.
pub fn hermitian_function(a: &CMatrix, tol: f64, f: impl Fn(f64) -> f64) -> MebResult<(HermitianSpectrum, CMatrix)> {
    check_hermitian(a, tol)?;
    let eig = symmetrized(a).symmetric_eigen();
    let mapped = DMatrix::from_diagonal(&eig.eigenvalues.map(|x| C64::new(f(x), 0.0)));
    let out = &eig.eigenvectors * mapped * eig.eigenvectors.adjoint();
    let spectrum = HermitianSpectrum::from_unsorted(eig.eigenvalues.iter().copied().collect());
    Ok((spectrum, CMatrix(out)))
}

/// Entrywise squared modulus, `Q_kl = |U_kl|²`.
pub fn unistochastic_of(u: &CMatrix) -> RMatrix {
    u.0.map(|z| z.norm_sqr())
}

/// Largest deviation of any row or column sum from one.
pub fn bistochastic_defect(m: &RMatrix) -> f64 {
    let rows = m.row_iter().map(|r| (r.sum() - 1.0).abs());
    let cols = m.column_iter().map(|c| (c.sum() - 1.0).abs());
    rows.chain(cols).fold(0.0, f64::max)
}

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn cis(phase: f64) -> C64 {
    C64::from_polar(1.0, phase)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hadamard() -> CMatrix {
        let h = 0.5f64.sqrt();
        CMatrix::new(2, 2, vec![c(h, 0.0), c(h, 0.0), c(h, 0.0), c(-h, 0.0)]).unwrap()
    }

    #[test]
    fn identity_products() {
        let i2 = CMatrix::identity(2);
        assert_eq!(matmul(&i2, &i2).unwrap(), i2);
        assert_eq!(kron(&i2, &i2), CMatrix::identity(4));
    }

    #[test]
    fn hadamard_is_an_involution() {
        let h = hadamard();
        let hh = matmul(&h, &h).unwrap();
        assert!(hh.max_abs_diff(&CMatrix::identity(2)) < 1e-15);
    }

    #[test]
    fn matmul_rejects_bad_shapes() {
        let a = CMatrix::zeros(2, 3);
        assert!(matches!(matmul(&a, &a), Err(MebError::DimensionMismatch(_))));
    }

    #[test]
    fn new_rejects_nan_and_bad_length() {
        assert!(CMatrix::new(1, 1, vec![c(f64::NAN, 0.0)]).is_err());
        assert!(CMatrix::new(2, 2, vec![c(1.0, 0.0)]).is_err());
    }

    #[test]
    fn dagger_of_phase_diagonal() {
        let a = 0.7;
        let d = CMatrix::diag(&[c(1.0, 0.0), cis(a)]);
        let expected = CMatrix::diag(&[c(1.0, 0.0), cis(-a)]);
        assert!(d.dagger().max_abs_diff(&expected) < 1e-15);
        let sym = CMatrix::new(2, 2, vec![c(1.0, 0.0), c(2.0, 0.0), c(2.0, 0.0), c(3.0, 0.0)])
            .unwrap();
        assert_eq!(sym.dagger(), sym);
        assert_eq!(d.dagger().dagger(), d);
    }

    #[test]
    fn kron_shape() {
        let k = kron(&CMatrix::identity(2), &CMatrix::identity(3));
        assert_eq!((k.rows(), k.cols()), (6, 6));
    }

    #[test]
    fn unitarity_checks() {
        let ones = CMatrix::from_fn(2, 2, |_, _| c(1.0, 0.0));
        assert!(!is_unitary(&ones, 1e-12));
        let h = hadamard();
        assert!(is_unitary(&h, 1e-12));
        let du = matmul(&CMatrix::diag(&[cis(0.3), cis(-1.1)]), &h).unwrap();
        assert!(is_unitary(&du, 1e-12));
        assert!(matmul(&du.dagger(), &du).unwrap().max_abs_diff(&CMatrix::identity(2)) < 1e-12);
    }

    #[test]
    fn eigenvalues_of_diagonal_and_pauli() {
        let d = CMatrix::diag(&[c(3.0, 0.0), c(1.0, 0.0), c(2.0, 0.0)]);
        assert_eq!(hermitian_eigenvalues(&d, 1e-12).unwrap().eigenvalues, vec![3.0, 2.0, 1.0]);
        let delta = -0.37;
        let x = CMatrix::new(2, 2, vec![c(0.0, 0.0), c(delta, 0.0), c(delta, 0.0), c(0.0, 0.0)])
            .unwrap();
        let s = hermitian_eigenvalues(&x, 1e-12).unwrap();
        assert!((s.eigenvalues[0] - delta.abs()).abs() < 1e-15);
        assert!((s.eigenvalues[1] + delta.abs()).abs() < 1e-15);
    }

    #[test]
    fn eigenvalues_reject_non_hermitian() {
        let a = CMatrix::new(2, 2, vec![c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)])
            .unwrap();
        assert!(matches!(hermitian_eigenvalues(&a, 1e-12), Err(MebError::NotHermitian(_))));
    }

    #[test]
    fn complex_hermitian_function_reconstructs() {
        let a = CMatrix::new(
            3,
            3,
            vec![c(2.0, 0.0), c(0.0, 1.0), c(0.0, 0.0), c(0.0, -1.0), c(2.0, 0.0), c(1.0, 1.0), c(0.0, 0.0), c(1.0, -1.0), c(3.0, 0.0)],
        )
        .unwrap();
        let (spectrum, same) = hermitian_function(&a, 1e-12, |x| x).unwrap();
        assert!(same.max_abs_diff(&a) < 1e-14);
        assert!((spectrum.sum() - 7.0).abs() < 1e-14);
        assert_eq!(hermitian_eigenvalues(&a, 1e-12).unwrap(), spectrum);
        let (_, inv) = hermitian_function(&a, 1e-12, f64::recip).unwrap();
        assert!(a.matmul(&inv).unwrap().max_abs_diff(&CMatrix::identity(3)) < 1e-14);
    }

    #[test]
    fn unistochastic_of_identity() {
        let q = unistochastic_of(&CMatrix::identity(3));
        assert_eq!(q, RMatrix::identity(3, 3));
        assert!(bistochastic_defect(&q) < 1e-15);
    }
}
