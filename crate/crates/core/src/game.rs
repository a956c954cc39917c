//! Payoff observables, referee measurements, and the Choi-Jamiołkowski
//! correspondence between observables on `C^n ⊗ C^m` and super-operators
//! mapping `m×m` matrices to `n×n` matrices.
//!
//! Joint-space indices are laid out as `(i, j) ↦ i·m + j`, with `i` the
//! Alice index and `j` the Bob index.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::herm::{
    eig, hs_inner, kron, matrix_unit, spectral_norm, CMatrix, DensityMatrix, HermMatrix,
    Tolerances, ZERO,
};

/// A Hermitian payoff observable `R` on the joint space of Alice (dimension
/// `n`) and Bob (dimension `m`).
#[derive(Clone, Debug, PartialEq)]
pub struct PayoffObservable {
    n: usize,
    m: usize,
    r: HermMatrix,
}

impl PayoffObservable {
    pub fn new(n: usize, m: usize, r: HermMatrix) -> Result<Self> {
        if n == 0 || m == 0 || n.checked_mul(m) != Some(r.dim()) {
            return Err(Error::dimension(
                "payoff observable",
                n.saturating_mul(m),
                r.dim(),
            ));
        }
        Ok(PayoffObservable { n, m, r })
    }

    /// `R = Σ_a v(a) R_a`.
    pub fn from_measurement(meas: &Measurement) -> Result<Self> {
        let mut acc = CMatrix::zeros(meas.n * meas.m, meas.n * meas.m);
        for outcome in &meas.outcomes {
            acc += outcome.operator.as_matrix() * Complex64::new(outcome.payoff, 0.0);
        }
        Ok(PayoffObservable {
            n: meas.n,
            m: meas.m,
            r: HermMatrix::from_hermitian_part(acc),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn matrix(&self) -> &HermMatrix {
        &self.r
    }

    /// `‖R‖`.
    pub fn norm(&self) -> Result<f64> {
        spectral_norm(&self.r)
    }

    pub fn superop(&self) -> GameSuperOp {
        GameSuperOp {
            n: self.n,
            m: self.m,
            choi: self.r.clone(),
        }
    }

    /// Alice's expected payoff `⟨R, ρ⊗σ⟩`.
    pub fn expected_payoff(&self, rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
        if rho.dim() != self.n {
            return Err(Error::dimension("expected_payoff (rho)", self.n, rho.dim()));
        }
        if sigma.dim() != self.m {
            return Err(Error::dimension(
                "expected_payoff (sigma)",
                self.m,
                sigma.dim(),
            ));
        }
        hs_inner(&self.r, &kron(rho.as_herm(), sigma.as_herm()))
    }

    /// Translates and scales `R` so its spectrum spans exactly `[0, 1]`.
    pub fn rescale(&self) -> Result<RescaledGame> {
        let spectrum = eig(&self.r)?;
        let top = spectrum.max();
        let bottom = spectrum.min();
        let norm = top.abs().max(bottom.abs());
        let scale = top - bottom;
        if scale <= Tolerances::default().hermiticity * norm.max(1.0) {
            return Err(Error::DegenerateGame {
                value: 0.5 * (top + bottom),
            });
        }
        let p = self.r.shift(-bottom).scale(1.0 / scale);
        Ok(RescaledGame {
            observable: PayoffObservable {
                n: self.n,
                m: self.m,
                r: p,
            },
            shift: bottom,
            scale,
            delta_factor: scale / norm,
        })
    }
}

/// `P = (R − λ_min(R)·I) / (λ_max(R) − λ_min(R))` together with the affine
/// map back to the original payoffs.
#[derive(Clone, Debug)]
pub struct RescaledGame {
    pub observable: PayoffObservable,
    /// `λ_min(R)`.
    pub shift: f64,
    /// `λ_max(R) − λ_min(R)`.
    pub scale: f64,
    /// `scale / ‖R‖`, at most 2. An ε-approximate equilibrium of `P` is a
    /// `delta_factor·ε`-approximate equilibrium of `R`.
    pub delta_factor: f64,
}

impl RescaledGame {
    /// Maps a payoff of `P` to the corresponding payoff of `R`.
    pub fn to_original(&self, payoff: f64) -> f64 {
        self.shift + self.scale * payoff
    }
}

/// One outcome of the referee's measurement.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub label: String,
    pub operator: HermMatrix,
    pub payoff: f64,
}

/// A complete measurement on the joint space with real payoffs per outcome.
#[derive(Clone, Debug, PartialEq)]
pub struct Measurement {
    n: usize,
    m: usize,
    outcomes: Vec<Outcome>,
}

impl Measurement {
    pub fn new(n: usize, m: usize, outcomes: Vec<Outcome>) -> Result<Self> {
        Self::with_tolerance(n, m, outcomes, &Tolerances::default())
    }

    pub fn with_tolerance(
        n: usize,
        m: usize,
        outcomes: Vec<Outcome>,
        tol: &Tolerances,
    ) -> Result<Self> {
        if outcomes.is_empty() {
            return Err(Error::InvalidMeasurement("no outcomes".into()));
        }
        let dim = n
            .checked_mul(m)
            .filter(|&d| d > 0)
            .ok_or_else(|| Error::InvalidMeasurement(format!("invalid dimensions {n}x{m}")))?;
        let mut sum = HermMatrix::zeros(dim);
        for (k, outcome) in outcomes.iter().enumerate() {
            if outcome.operator.dim() != dim {
                return Err(Error::InvalidMeasurement(format!(
                    "operator {k} ({}) has dimension {}, expected {dim}",
                    outcome.label,
                    outcome.operator.dim()
                )));
            }
            if outcomes[..k].iter().any(|o| o.label == outcome.label) {
                return Err(Error::InvalidMeasurement(format!(
                    "duplicate outcome label {:?}",
                    outcome.label
                )));
            }
            if !outcome.payoff.is_finite() {
                return Err(Error::InvalidMeasurement(format!(
                    "outcome {:?} has a non-finite payoff",
                    outcome.label
                )));
            }
            let min = outcome.operator.min_eigenvalue()?;
            if min < -tol.psd {
                return Err(Error::InvalidMeasurement(format!(
                    "operator {k} ({}) is not positive semidefinite (minimum eigenvalue {min:e})",
                    outcome.label
                )));
            }
            sum = &sum + &outcome.operator;
        }
        let residual = spectral_norm(&sum.shift(-1.0))?;
        if residual > 1e-10 {
            return Err(Error::InvalidMeasurement(format!(
                "operators do not sum to the identity (residual {residual:e})"
            )));
        }
        Ok(Measurement { n, m, outcomes })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn outcomes(&self) -> &[Outcome] {
        &self.outcomes
    }
}

/// A super-operator `Φ: L(C^m) → L(C^n)` held by its Choi-Jamiołkowski
/// matrix `R`, so that `Φ(B) = Tr_B(R (I ⊗ Bᵀ))`.
#[derive(Clone, Debug, PartialEq)]
pub struct GameSuperOp {
    n: usize,
    m: usize,
    choi: HermMatrix,
}

impl GameSuperOp {
    pub fn from_choi(n: usize, m: usize, choi: HermMatrix) -> Result<Self> {
        Ok(PayoffObservable::new(n, m, choi)?.superop())
    }

    pub fn from_observable(obs: &PayoffObservable) -> Self {
        obs.superop()
    }

    /// Rebuilds the observable as `Σ_{i,j} Φ(E_ij) ⊗ E_ij`, evaluating the
    /// map on the matrix-unit basis.
    pub fn to_observable(&self) -> PayoffObservable {
        let images = self.matrix_unit_images();
        let r = observable_from_images(self.n, self.m, &images)
            .expect("images of a valid super-operator have consistent dimensions");
        PayoffObservable {
            n: self.n,
            m: self.m,
            r,
        }
    }

    /// `Φ(E_ij)` for all `i, j < m`, row-major in `(i, j)`.
    pub fn matrix_unit_images(&self) -> Vec<CMatrix> {
        let mut images = Vec::with_capacity(self.m * self.m);
        for i in 0..self.m {
            for j in 0..self.m {
                images.push(self.apply_unit(i, j));
            }
        }
        images
    }

    fn apply_unit(&self, j: usize, l: usize) -> CMatrix {
        let (n, m) = (self.n, self.m);
        let r = self.choi.as_matrix();
        CMatrix::from_fn(n, n, |i, k| r[(i * m + j, k * m + l)])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn choi(&self) -> &HermMatrix {
        &self.choi
    }

    /// `Φ(B)` for an arbitrary complex `m×m` matrix.
    pub fn apply_general(&self, b: &CMatrix) -> Result<CMatrix> {
        let (n, m) = (self.n, self.m);
        if b.nrows() != m || b.ncols() != m {
            return Err(Error::dimension("apply", m, b.nrows().max(b.ncols())));
        }
        let r = self.choi.as_matrix();
        // Φ(B)_{ik} = Σ_{j,l} R[(i,j),(k,l)] B[j,l]
        let mut out = CMatrix::zeros(n, n);
        for k in 0..n {
            for l in 0..m {
                let col = k * m + l;
                for j in 0..m {
                    let bjl = b[(j, l)];
                    if bjl == ZERO {
                        continue;
                    }
                    for i in 0..n {
                        out[(i, k)] += r[(i * m + j, col)] * bjl;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn apply(&self, b: &HermMatrix) -> Result<HermMatrix> {
        Ok(HermMatrix::from_hermitian_part(
            self.apply_general(b.as_matrix())?,
        ))
    }

    /// `Φ*(A) = (Tr_A((A ⊗ I) R))ᵀ`, the adjoint with respect to the
    /// Hilbert-Schmidt inner product.
    pub fn apply_adjoint(&self, a: &HermMatrix) -> Result<HermMatrix> {
        let (n, m) = (self.n, self.m);
        if a.dim() != n {
            return Err(Error::dimension("apply_adjoint", n, a.dim()));
        }
        let r = self.choi.as_matrix();
        let am = a.as_matrix();
        // Φ*(A)_{jl} = Σ_{i,k} A[i,k] R[(k,l),(i,j)]
        let mut out = CMatrix::zeros(m, m);
        for i in 0..n {
            for j in 0..m {
                let col = i * m + j;
                for k in 0..n {
                    let aik = am[(i, k)];
                    if aik == ZERO {
                        continue;
                    }
                    for l in 0..m {
                        out[(j, l)] += aik * r[(k * m + l, col)];
                    }
                }
            }
        }
        Ok(HermMatrix::from_hermitian_part(out))
    }
}

/// `R = Σ_{i,j} images[i·m + j] ⊗ E_ij`.
pub fn observable_from_images(n: usize, m: usize, images: &[CMatrix]) -> Result<HermMatrix> {
    if images.len() != m * m {
        return Err(Error::dimension("super-operator images", m * m, images.len()));
    }
    let mut r = CMatrix::zeros(n * m, n * m);
    for i in 0..m {
        for j in 0..m {
            let img = &images[i * m + j];
            if img.nrows() != n || img.ncols() != n {
                return Err(Error::dimension("super-operator image", n, img.nrows()));
            }
            r += img.kronecker(&matrix_unit(m, i, j));
        }
    }
    HermMatrix::new(r)
}

/// `Σ_{i,j} E_ij ⊗ E_ij`, the Choi matrix of the identity map on `C^d`.
pub fn identity_map_choi(d: usize) -> HermMatrix {
    let mut r = CMatrix::zeros(d * d, d * d);
    for i in 0..d {
        for j in 0..d {
            r[(i * d + i, j * d + j)] = Complex64::new(1.0, 0.0);
        }
    }
    HermMatrix::from_hermitian_part(r)
}
