//! Dense Hermitian linear algebra.
//!
//! [`HermMatrix`] is the numeric carrier used throughout the crate. Every
//! constructor either checks conjugate symmetry and then projects onto the
//! Hermitian subspace, or (crate-internally) projects unconditionally when
//! the result is Hermitian by construction. Projection is idempotent, so a
//! matrix that passes through several constructors keeps its exact bits.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;

pub(crate) const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub(crate) const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Shared numerical tolerances.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Maximum entrywise `|M[i][j] - conj(M[j][i])|` accepted by constructors.
    pub hermiticity: f64,
    /// Eigenvalues down to `-psd` still count as positive semidefinite.
    pub psd: f64,
    /// Allowed deviation of a density matrix trace from 1.
    pub trace: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            hermiticity: 1e-12,
            psd: 1e-10,
            trace: 1e-10,
        }
    }
}

/// A square complex Hermitian matrix.
#[derive(Clone, PartialEq)]
pub struct HermMatrix {
    inner: CMatrix,
}

impl fmt::Debug for HermMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HermMatrix({}x{}) {}", self.dim(), self.dim(), self.inner)
    }
}

fn check_square(m: &CMatrix) -> Result<()> {
    if m.nrows() != m.ncols() {
        return Err(Error::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    if m.nrows() == 0 {
        return Err(Error::Empty);
    }
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            let z = m[(i, j)];
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(Error::NonFinite { row: i, col: j });
            }
        }
    }
    Ok(())
}

/// Largest entrywise deviation from conjugate symmetry.
pub fn asymmetry(m: &CMatrix) -> f64 {
    let n = m.nrows().min(m.ncols());
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

fn symmetrize(mut m: CMatrix) -> CMatrix {
    let n = m.nrows();
    for i in 0..n {
        m[(i, i)] = Complex64::new(m[(i, i)].re, 0.0);
        for j in (i + 1)..n {
            let avg = (m[(i, j)] + m[(j, i)].conj()) * 0.5;
            m[(i, j)] = avg;
            m[(j, i)] = avg.conj();
        }
    }
    m
}

impl HermMatrix {
    /// Validates and symmetrizes `m` using the default hermiticity tolerance.
    pub fn new(m: CMatrix) -> Result<Self> {
        Self::with_tolerance(m, &Tolerances::default())
    }

    pub fn with_tolerance(m: CMatrix, tol: &Tolerances) -> Result<Self> {
        check_square(&m)?;
        let asym = asymmetry(&m);
        if asym > tol.hermiticity {
            return Err(Error::NotHermitian { asymmetry: asym });
        }
        Ok(HermMatrix {
            inner: symmetrize(m),
        })
    }

    /// Projects onto the Hermitian part; for values Hermitian by construction.
    pub(crate) fn from_hermitian_part(m: CMatrix) -> Self {
        debug_assert_eq!(m.nrows(), m.ncols());
        HermMatrix {
            inner: symmetrize(m),
        }
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let n = rows.len();
        let mut m = CMatrix::zeros(n, n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::NotSquare {
                    rows: n,
                    cols: row.len(),
                });
            }
            for (j, &x) in row.iter().enumerate() {
                m[(i, j)] = Complex64::new(x, 0.0);
            }
        }
        Self::new(m)
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        let mut m = CMatrix::zeros(n, n);
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = Complex64::new(d, 0.0);
        }
        HermMatrix { inner: m }
    }

    pub fn identity(dim: usize) -> Self {
        HermMatrix {
            inner: CMatrix::identity(dim, dim),
        }
    }

    pub fn zeros(dim: usize) -> Self {
        HermMatrix {
            inner: CMatrix::zeros(dim, dim),
        }
    }

    /// The rank-one projector `v v*` onto the normalized vector `v`.
    pub fn projector(v: &DVector<Complex64>) -> Result<Self> {
        let norm = v.norm();
        if !norm.is_finite() || norm <= 0.0 {
            return Err(Error::Numerical {
                message: "cannot project onto a zero or non-finite vector".into(),
                iteration: None,
            });
        }
        let u = v / Complex64::new(norm, 0.0);
        Ok(Self::from_hermitian_part(&u * u.adjoint()))
    }

    pub fn dim(&self) -> usize {
        self.inner.nrows()
    }

    pub fn as_matrix(&self) -> &CMatrix {
        &self.inner
    }

    pub fn into_matrix(self) -> CMatrix {
        self.inner
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.inner[(i, j)]
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim()).map(|i| self.inner[(i, i)].re).sum()
    }

    /// Transpose in the computational basis (equal to entrywise conjugation).
    pub fn transpose(&self) -> Self {
        HermMatrix {
            inner: self.inner.transpose(),
        }
    }

    pub fn scale(&self, c: f64) -> Self {
        HermMatrix {
            inner: &self.inner * Complex64::new(c, 0.0),
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        same_dim("add", self, other)?;
        Ok(HermMatrix {
            inner: &self.inner + &other.inner,
        })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        same_dim("sub", self, other)?;
        Ok(HermMatrix {
            inner: &self.inner - &other.inner,
        })
    }

    /// `self + c * I`.
    pub fn shift(&self, c: f64) -> Self {
        let mut m = self.inner.clone();
        for i in 0..self.dim() {
            m[(i, i)] += Complex64::new(c, 0.0);
        }
        HermMatrix { inner: m }
    }

    /// `K self K*` for an arbitrary square `K` of matching dimension.
    pub fn congruence(&self, k: &CMatrix) -> Result<Self> {
        if k.ncols() != self.dim() {
            return Err(Error::dimension("congruence", self.dim(), k.ncols()));
        }
        Ok(Self::from_hermitian_part(k * &self.inner * k.adjoint()))
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim(), other.dim(), "max_abs_diff: dimension mismatch");
        self.inner
            .iter()
            .zip(other.inner.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn eig(&self) -> Result<Spectrum> {
        eig(self)
    }

    pub fn max_eigenvalue(&self) -> Result<f64> {
        Ok(self.eig()?.max())
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        Ok(self.eig()?.min())
    }

    /// True when every eigenvalue is at least `-tol`.
    pub fn is_psd(&self, tol: f64) -> Result<bool> {
        Ok(self.min_eigenvalue()? >= -tol)
    }
}

fn same_dim(context: &'static str, a: &HermMatrix, b: &HermMatrix) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::dimension(context, a.dim(), b.dim()));
    }
    Ok(())
}

impl Add for &HermMatrix {
    type Output = HermMatrix;

    fn add(self, rhs: &HermMatrix) -> HermMatrix {
        self.checked_add(rhs).expect("HermMatrix addition")
    }
}

impl Sub for &HermMatrix {
    type Output = HermMatrix;

    fn sub(self, rhs: &HermMatrix) -> HermMatrix {
        self.checked_sub(rhs).expect("HermMatrix subtraction")
    }
}

impl Add for HermMatrix {
    type Output = HermMatrix;

    fn add(self, rhs: HermMatrix) -> HermMatrix {
        &self + &rhs
    }
}

impl Sub for HermMatrix {
    type Output = HermMatrix;

    fn sub(self, rhs: HermMatrix) -> HermMatrix {
        &self - &rhs
    }
}

impl Mul<f64> for &HermMatrix {
    type Output = HermMatrix;

    fn mul(self, rhs: f64) -> HermMatrix {
        self.scale(rhs)
    }
}

/// A density matrix: positive semidefinite with unit trace.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    base: HermMatrix,
}

impl DensityMatrix {
    pub fn new(base: HermMatrix) -> Result<Self> {
        Self::with_tolerance(base, &Tolerances::default())
    }

    pub fn with_tolerance(base: HermMatrix, tol: &Tolerances) -> Result<Self> {
        let tr = base.trace();
        if (tr - 1.0).abs() > tol.trace {
            return Err(Error::InvalidDensity(format!("trace is {tr}, expected 1")));
        }
        let min = base.min_eigenvalue()?;
        if min < -tol.psd {
            return Err(Error::InvalidDensity(format!(
                "minimum eigenvalue {min:e} is negative"
            )));
        }
        Ok(DensityMatrix { base })
    }

    pub(crate) fn new_unchecked(base: HermMatrix) -> Self {
        DensityMatrix { base }
    }

    /// `I / dim`.
    pub fn maximally_mixed(dim: usize) -> Self {
        DensityMatrix {
            base: HermMatrix::identity(dim).scale(1.0 / dim as f64),
        }
    }

    pub fn pure(v: &DVector<Complex64>) -> Result<Self> {
        Ok(DensityMatrix {
            base: HermMatrix::projector(v)?,
        })
    }

    /// Diagonal density from a probability vector.
    pub fn from_probabilities(p: &[f64]) -> Result<Self> {
        Self::new(HermMatrix::from_diagonal(p))
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    pub fn as_herm(&self) -> &HermMatrix {
        &self.base
    }

    pub fn into_herm(self) -> HermMatrix {
        self.base
    }

    pub fn transpose(&self) -> Self {
        DensityMatrix {
            base: self.base.transpose(),
        }
    }
}

impl AsRef<HermMatrix> for DensityMatrix {
    fn as_ref(&self) -> &HermMatrix {
        &self.base
    }
}

/// Spectral decomposition with eigenvalues sorted from largest to smallest.
#[derive(Clone, Debug)]
pub struct Spectrum {
    eigenvalues: Vec<f64>,
    /// Column `k` is the unit eigenvector of `eigenvalues[k]`.
    eigenvectors: CMatrix,
}

impl Spectrum {
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenvectors(&self) -> &CMatrix {
        &self.eigenvectors
    }

    pub fn eigenvector(&self, k: usize) -> DVector<Complex64> {
        self.eigenvectors.column(k).into_owned()
    }

    /// λ₁, the largest eigenvalue.
    pub fn max(&self) -> f64 {
        self.eigenvalues[0]
    }

    /// λ_n, the smallest eigenvalue.
    pub fn min(&self) -> f64 {
        self.eigenvalues[self.eigenvalues.len() - 1]
    }

    /// `Σ f(λ_k) v_k v_k*`.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> HermMatrix {
        let n = self.eigenvalues.len();
        let mut scaled = self.eigenvectors.clone();
        for (k, &lambda) in self.eigenvalues.iter().enumerate() {
            let w = Complex64::new(f(lambda), 0.0);
            for i in 0..n {
                scaled[(i, k)] *= w;
            }
        }
        HermMatrix::from_hermitian_part(scaled * self.eigenvectors.adjoint())
    }

    pub fn reconstruct(&self) -> HermMatrix {
        self.map(|x| x)
    }
}

fn numerical(message: impl Into<String>) -> Error {
    Error::Numerical {
        message: message.into(),
        iteration: None,
    }
}

/// Full Hermitian eigendecomposition.
///
/// Ties are ordered by the position the backend produced them in, so the
/// result is deterministic for a given input.
pub fn eig(a: &HermMatrix) -> Result<Spectrum> {
    let n = a.dim();
    let max_iter = 1000 * n.max(1);
    let decomposition = SymmetricEigen::try_new(a.inner.clone(), f64::EPSILON, max_iter)
        .ok_or_else(|| {
            numerical(format!(
                "Hermitian eigensolver did not converge within {max_iter} iterations (dim {n})"
            ))
        })?;

    let mut order: Vec<usize> = (0..n).collect();
    let values = &decomposition.eigenvalues;
    if values.iter().any(|v| !v.is_finite()) {
        return Err(numerical("eigensolver produced a non-finite eigenvalue"));
    }
    // stable sort: equal eigenvalues keep backend order
    order.sort_by(|&i, &j| values[j].partial_cmp(&values[i]).unwrap());

    let mut vectors = CMatrix::zeros(n, n);
    for (k, &src) in order.iter().enumerate() {
        vectors.set_column(k, &decomposition.eigenvectors.column(src));
    }
    Ok(Spectrum {
        eigenvalues: order.iter().map(|&i| values[i]).collect(),
        eigenvectors: vectors,
    })
}

/// `Tr(A* B)`, real for Hermitian arguments.
pub fn hs_inner(a: &HermMatrix, b: &HermMatrix) -> Result<f64> {
    same_dim("hs_inner", a, b)?;
    Ok(a.inner
        .iter()
        .zip(b.inner.iter())
        .map(|(x, y)| (x.conj() * y).re)
        .sum())
}

/// Largest absolute eigenvalue.
pub fn spectral_norm(a: &HermMatrix) -> Result<f64> {
    let s = eig(a)?;
    Ok(s.max().abs().max(s.min().abs()))
}

/// Sum of absolute eigenvalues.
pub fn trace_norm(a: &HermMatrix) -> Result<f64> {
    Ok(eig(a)?.eigenvalues.iter().map(|x| x.abs()).sum())
}

/// Matrix exponential through the spectral decomposition.
pub fn mat_exp(a: &HermMatrix) -> Result<HermMatrix> {
    Ok(eig(a)?.map(f64::exp))
}

/// `exp(X) / Tr(exp(X))`, evaluated as `exp(X - λ₁ I)` normalized so the
/// exponent never overflows.
pub fn gibbs_state(x: &HermMatrix) -> Result<DensityMatrix> {
    let spectrum = eig(x)?;
    let top = spectrum.max();
    let partition: f64 = spectrum.eigenvalues.iter().map(|l| (l - top).exp()).sum();
    if !partition.is_finite() || partition < 1.0 {
        return Err(numerical(format!("invalid partition sum {partition}")));
    }
    Ok(DensityMatrix::new_unchecked(
        spectrum.map(|l| (l - top).exp() / partition),
    ))
}

/// Square root of a positive semidefinite matrix's inverse, `A^{-1/2}`.
pub(crate) fn inverse_sqrt(spectrum: &Spectrum) -> HermMatrix {
    spectrum.map(|l| 1.0 / l.sqrt())
}

/// Kronecker product `A ⊗ B`.
pub fn kron(a: &HermMatrix, b: &HermMatrix) -> HermMatrix {
    HermMatrix {
        inner: a.inner.kronecker(&b.inner),
    }
}

fn check_factorization(context: &'static str, dim: usize, n: usize, m: usize) -> Result<()> {
    if n == 0 || m == 0 || n.checked_mul(m) != Some(dim) {
        return Err(Error::dimension(context, n.saturating_mul(m), dim));
    }
    Ok(())
}

/// Traces out the second factor of an operator on `C^n ⊗ C^m` (general complex input).
pub fn partial_trace_b_general(mat: &CMatrix, n: usize, m: usize) -> Result<CMatrix> {
    check_factorization("partial_trace_B", mat.nrows(), n, m)?;
    check_factorization("partial_trace_B", mat.ncols(), n, m)?;
    Ok(CMatrix::from_fn(n, n, |i, k| {
        (0..m).map(|j| mat[(i * m + j, k * m + j)]).sum()
    }))
}

/// Traces out the first factor of an operator on `C^n ⊗ C^m` (general complex input).
pub fn partial_trace_a_general(mat: &CMatrix, n: usize, m: usize) -> Result<CMatrix> {
    check_factorization("partial_trace_A", mat.nrows(), n, m)?;
    check_factorization("partial_trace_A", mat.ncols(), n, m)?;
    Ok(CMatrix::from_fn(m, m, |j, l| {
        (0..n).map(|i| mat[(i * m + j, i * m + l)]).sum()
    }))
}

pub fn partial_trace_b(mat: &HermMatrix, n: usize, m: usize) -> Result<HermMatrix> {
    Ok(HermMatrix::from_hermitian_part(partial_trace_b_general(
        &mat.inner, n, m,
    )?))
}

pub fn partial_trace_a(mat: &HermMatrix, n: usize, m: usize) -> Result<HermMatrix> {
    Ok(HermMatrix::from_hermitian_part(partial_trace_a_general(
        &mat.inner, n, m,
    )?))
}

/// The matrix unit `E_{i,j}` of dimension `dim`.
pub fn matrix_unit(dim: usize, i: usize, j: usize) -> CMatrix {
    let mut e = CMatrix::zeros(dim, dim);
    e[(i, j)] = ONE;
    e
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn epr() -> HermMatrix {
        let mut m = CMatrix::zeros(4, 4);
        for &i in &[0, 3] {
            for &j in &[0, 3] {
                m[(i, j)] = c(0.5, 0.0);
            }
        }
        HermMatrix::new(m).unwrap()
    }

    #[test]
    fn rejects_non_hermitian_and_symmetrizes_small_drift() {
        let bad = CMatrix::from_row_slice(2, 2, &[ONE, c(1.0, 0.0), ZERO, ONE]);
        assert!(matches!(
            HermMatrix::new(bad),
            Err(Error::NotHermitian { .. })
        ));

        let drift = CMatrix::from_row_slice(
            2,
            2,
            &[c(1.0, 1e-14), c(0.5, 0.25), c(0.5 + 1e-13, -0.25), ONE],
        );
        let h = HermMatrix::new(drift).unwrap();
        assert_eq!(h.get(0, 0).im, 0.0);
        assert_eq!(h.get(0, 1), h.get(1, 0).conj());
    }

    #[test]
    fn rejects_empty_and_rectangular() {
        assert_eq!(HermMatrix::new(CMatrix::zeros(0, 0)), Err(Error::Empty));
        assert!(matches!(
            HermMatrix::new(CMatrix::zeros(2, 3)),
            Err(Error::NotSquare { rows: 2, cols: 3 })
        ));
    }

    #[test]
    fn hs_inner_examples() {
        let a = HermMatrix::from_diagonal(&[1.0, 2.0]);
        let b = HermMatrix::from_diagonal(&[3.0, 4.0]);
        assert_eq!(hs_inner(&a, &b).unwrap(), 11.0);

        let rho = DensityMatrix::from_probabilities(&[0.3, 0.7]).unwrap();
        let one = hs_inner(&HermMatrix::identity(2), rho.as_herm()).unwrap();
        assert!((one - 1.0).abs() < 1e-15);

        let x = HermMatrix::from_real_rows(&[&[1.0, 2.0], &[2.0, -3.0]]).unwrap();
        assert_eq!(hs_inner(&x, &x).unwrap(), 1.0 + 4.0 + 4.0 + 9.0);

        assert!(matches!(
            hs_inner(&a, &HermMatrix::identity(3)),
            Err(Error::Dimension { .. })
        ));
    }

    #[test]
    fn eig_diagonal_and_exchange() {
        let s = eig(&HermMatrix::from_diagonal(&[3.0, 1.0, 2.0])).unwrap();
        assert_eq!(s.eigenvalues(), &[3.0, 2.0, 1.0]);

        let x = HermMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap();
        let s = eig(&x).unwrap();
        assert!((s.max() - 1.0).abs() < 1e-14);
        assert!((s.min() + 1.0).abs() < 1e-14);
    }

    #[test]
    fn eig_complex_reconstructs() {
        let m = CMatrix::from_row_slice(
            3,
            3,
            &[
                c(2.0, 0.0),
                c(0.5, -1.0),
                c(0.0, 0.3),
                c(0.5, 1.0),
                c(-1.0, 0.0),
                c(0.2, 0.2),
                c(0.0, -0.3),
                c(0.2, -0.2),
                c(0.7, 0.0),
            ],
        );
        let h = HermMatrix::new(m).unwrap();
        let s = eig(&h).unwrap();
        assert!(s.reconstruct().max_abs_diff(&h) < 1e-12);
        let v = s.eigenvectors();
        let gram = v.adjoint() * v;
        assert!((gram - CMatrix::identity(3, 3)).norm() < 1e-12);
        assert!(s.eigenvalues().windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn norms() {
        let a = HermMatrix::from_diagonal(&[2.0, -3.0]);
        assert_eq!(spectral_norm(&a).unwrap(), 3.0);
        assert_eq!(trace_norm(&a).unwrap(), 5.0);
        let z = HermMatrix::zeros(3);
        assert_eq!(spectral_norm(&z).unwrap(), 0.0);
        assert_eq!(trace_norm(&z).unwrap(), 0.0);
        let rho = DensityMatrix::from_probabilities(&[0.25, 0.25, 0.5]).unwrap();
        assert!((trace_norm(rho.as_herm()).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn mat_exp_examples() {
        let e0 = mat_exp(&HermMatrix::zeros(3)).unwrap();
        assert!(e0.max_abs_diff(&HermMatrix::identity(3)) < 1e-15);

        let e = mat_exp(&HermMatrix::from_diagonal(&[2f64.ln(), 0.0])).unwrap();
        assert!(e.max_abs_diff(&HermMatrix::from_diagonal(&[2.0, 1.0])) < 1e-14);
    }

    /// Truncated power series, 30 terms.
    fn exp_series(a: &CMatrix, terms: usize) -> CMatrix {
        let n = a.nrows();
        let mut sum = CMatrix::identity(n, n);
        let mut term = CMatrix::identity(n, n);
        for k in 1..terms {
            term = &term * a / Complex64::new(k as f64, 0.0);
            sum += &term;
        }
        sum
    }

    #[test]
    fn mat_exp_matches_series_oracle() {
        let t = 0.7;
        let x = HermMatrix::from_real_rows(&[&[0.0, t], &[t, 0.0]]).unwrap();
        let oracle = exp_series(x.as_matrix(), 30);
        // the series oracle agrees with the closed form cosh/sinh
        assert!((oracle[(0, 0)].re - t.cosh()).abs() < 1e-15);
        assert!((oracle[(0, 1)].re - t.sinh()).abs() < 1e-15);
        let e = mat_exp(&x).unwrap();
        assert!((e.as_matrix() - &oracle).norm() < 1e-13);
    }

    #[test]
    fn gibbs_state_survives_large_exponents() {
        let x = HermMatrix::from_diagonal(&[2000.0, 1999.0, -5000.0]);
        let g = gibbs_state(&x).unwrap();
        let e = std::f64::consts::E;
        assert!((g.as_herm().get(0, 0).re - e / (e + 1.0)).abs() < 1e-12);
        assert!((g.as_herm().trace() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn kron_examples() {
        let i4 = kron(&HermMatrix::identity(2), &HermMatrix::identity(2));
        assert_eq!(i4, HermMatrix::identity(4));

        let sigma = HermMatrix::from_real_rows(&[&[0.6, 0.2], &[0.2, 0.4]]).unwrap();
        let k = kron(&HermMatrix::from_diagonal(&[1.0, 0.0]), &sigma);
        for i in 0..4 {
            for j in 0..4 {
                let expected = if i < 2 && j < 2 {
                    sigma.get(i, j)
                } else {
                    ZERO
                };
                assert_eq!(k.get(i, j), expected);
            }
        }
    }

    #[test]
    fn partial_trace_examples() {
        let rho = HermMatrix::from_real_rows(&[&[0.7, 0.1], &[0.1, 0.3]]).unwrap();
        let sigma = HermMatrix::from_diagonal(&[0.2, 0.3, 0.5]).scale(2.0);
        let prod = kron(&rho, &sigma);
        let tb = partial_trace_b(&prod, 2, 3).unwrap();
        assert!(tb.max_abs_diff(&rho.scale(2.0)) < 1e-15);
        let ta = partial_trace_a(&prod, 2, 3).unwrap();
        assert!(ta.max_abs_diff(&sigma) < 1e-15);

        let t = partial_trace_b(&HermMatrix::identity(6), 2, 3).unwrap();
        assert_eq!(t, HermMatrix::identity(2).scale(3.0));

        // EPR projector: entrywise sum over the traced index gives I/2
        let t = partial_trace_b(&epr(), 2, 2).unwrap();
        assert_eq!(t, HermMatrix::identity(2).scale(0.5));

        assert!(matches!(
            partial_trace_b(&HermMatrix::identity(6), 4, 2),
            Err(Error::Dimension { .. })
        ));
        assert!(partial_trace_a(&HermMatrix::identity(6), 0, 6).is_err());
    }

    #[test]
    fn density_validation() {
        assert!(DensityMatrix::from_probabilities(&[0.5, 0.6]).is_err());
        assert!(DensityMatrix::from_probabilities(&[1.5, -0.5]).is_err());
        let rho = DensityMatrix::maximally_mixed(4);
        assert!((rho.as_herm().trace() - 1.0).abs() < 1e-15);
    }
}
