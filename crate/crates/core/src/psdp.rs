//! Strictly positive semidefinite programs in super-operator form:
//!
//! ```text
//!   primal: maximize ⟨B, Y⟩  s.t.  Ψ(Y) ≼ A,  Y ≽ 0
//!   dual:   minimize ⟨A, X⟩  s.t.  Ψ*(X) ≽ B, X ≽ 0
//! ```
//!
//! The instance is brought to normal form
//! `Φ(Y) = A^{-1/2} Ψ(B^{-1/2} Y B^{-1/2}) A^{-1/2}` with identity
//! right-hand sides, whose optimum is the reciprocal of the game value
//! `α(Φ)`. Feasible points of the normal form map back to the original
//! instance by `Y = B^{-1/2} Y' B^{-1/2}` and `X = A^{-1/2} X' A^{-1/2}`;
//! both substitutions preserve the objective (`⟨B, Y⟩ = Tr Y'`,
//! `⟨A, X⟩ = Tr X'`) and the constraints (they are congruences by the
//! positive definite `A^{1/2}`, `B^{1/2}`).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::game::{GameSuperOp, PayoffObservable};
use crate::herm::{eig, hs_inner, inverse_sqrt, spectral_norm, CMatrix, HermMatrix, Tolerances};
use crate::mmw::{solve, SolverParams};

const POSITIVITY_PROBES: usize = 32;
const POSITIVITY_SEED: u64 = 0x005e_ed0f_9051;

#[derive(Clone, Debug)]
pub struct SuperOpSdp {
    a: HermMatrix,
    b: HermMatrix,
    psi: GameSuperOp,
    strict: bool,
}

impl SuperOpSdp {
    /// `a` is `n×n`, `b` is `m×m` and `psi_choi` is the Choi matrix of
    /// `Ψ: L(C^m) → L(C^n)`.
    pub fn new(a: HermMatrix, b: HermMatrix, psi_choi: HermMatrix) -> Result<Self> {
        let psi = GameSuperOp::from_choi(a.dim(), b.dim(), psi_choi)?;
        let tol = Tolerances::default();
        check_positive_map(&psi, &tol)?;
        let sdp = SuperOpSdp {
            a,
            b,
            psi,
            strict: false,
        };
        let strict = sdp.strictness_violation().is_none();
        Ok(SuperOpSdp { strict, ..sdp })
    }

    pub fn a(&self) -> &HermMatrix {
        &self.a
    }

    pub fn b(&self) -> &HermMatrix {
        &self.b
    }

    pub fn psi(&self) -> &GameSuperOp {
        &self.psi
    }

    /// `A ≻ 0`, `B ≻ 0` and `Ψ(I) ≻ 0`, with eigenvalues bounded away from
    /// zero relative to each matrix's norm.
    pub fn is_strict(&self) -> bool {
        self.strict
    }

    fn strictness_violation(&self) -> Option<Error> {
        let psi_of_identity = match self.psi.apply(&HermMatrix::identity(self.b.dim())) {
            Ok(x) => x,
            Err(e) => return Some(e),
        };
        let tol = Tolerances::default().psd;
        for (which, mat) in [("A", &self.a), ("B", &self.b), ("Psi(I)", &psi_of_identity)] {
            let spectrum = match eig(mat) {
                Ok(s) => s,
                Err(e) => return Some(e),
            };
            let floor = tol * spectrum.max().abs().max(1.0);
            if spectrum.min() <= floor {
                return Some(Error::NotStrictlyPositive {
                    which,
                    min_eigenvalue: spectrum.min(),
                });
            }
        }
        None
    }
}

/// Evaluates `Ψ` on random rank-one projectors and the matrix-unit diagonal.
fn check_positive_map(psi: &GameSuperOp, tol: &Tolerances) -> Result<()> {
    let m = psi.m();
    let mut rng = ChaCha8Rng::seed_from_u64(POSITIVITY_SEED);
    let mut probes: Vec<HermMatrix> = (0..m)
        .map(|k| {
            let mut d = vec![0.0; m];
            d[k] = 1.0;
            HermMatrix::from_diagonal(&d)
        })
        .collect();
    for _ in 0..POSITIVITY_PROBES {
        let v = nalgebra::DVector::from_fn(m, |_, _| {
            num_complex::Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
        });
        if let Ok(p) = HermMatrix::projector(&v) {
            probes.push(p);
        }
    }
    for probe in probes {
        let min = eig(&psi.apply(&probe)?)?.min();
        if min < -1e-9_f64.max(tol.psd) {
            return Err(Error::NotPositive { min_eigenvalue: min });
        }
    }
    Ok(())
}

/// The normal form together with the congruences needed to map points back.
#[derive(Clone, Debug)]
pub struct NormalForm {
    pub phi: GameSuperOp,
    /// `A^{-1/2}`.
    pub a_inv_sqrt: HermMatrix,
    /// `B^{-1/2}`.
    pub b_inv_sqrt: HermMatrix,
}

impl NormalForm {
    /// Normal-form primal point to the original instance.
    pub fn primal_to_original(&self, y: &HermMatrix) -> Result<HermMatrix> {
        y.congruence(self.b_inv_sqrt.as_matrix())
    }

    /// Normal-form dual point to the original instance.
    pub fn dual_to_original(&self, x: &HermMatrix) -> Result<HermMatrix> {
        x.congruence(self.a_inv_sqrt.as_matrix())
    }
}

/// Transforms a strictly positive instance into normal form.
///
/// With `K = A^{-1/2}` and `L = B^{-1/2}`, the Choi matrix of
/// `Y ↦ K Ψ(L Y L) K` is `(K ⊗ Lᵀ) R_Ψ (K ⊗ Lᵀ)*`.
pub fn to_normal_form(sdp: &SuperOpSdp) -> Result<NormalForm> {
    if let Some(err) = sdp.strictness_violation() {
        return Err(err);
    }
    let a_inv_sqrt = inverse_sqrt(&eig(&sdp.a)?);
    let b_inv_sqrt = inverse_sqrt(&eig(&sdp.b)?);
    let lift: CMatrix = a_inv_sqrt
        .as_matrix()
        .kronecker(&b_inv_sqrt.as_matrix().transpose());
    let choi = sdp.psi.choi().congruence(&lift)?;
    Ok(NormalForm {
        phi: GameSuperOp::from_choi(sdp.a.dim(), sdp.b.dim(), choi)?,
        a_inv_sqrt,
        b_inv_sqrt,
    })
}

#[derive(Clone, Debug)]
pub struct PsdpResult {
    /// `1/α̃` with `α̃` the expected payoff of the approximate equilibrium.
    pub opt_estimate: f64,
    /// `⟨B, primal_y⟩`, a certified lower bound on the optimum.
    pub opt_lo: f64,
    /// `⟨A, dual_x⟩`, a certified upper bound on the optimum.
    pub opt_hi: f64,
    /// Feasible for the original primal: `Ψ(Y) ≼ A`, `Y ≽ 0`.
    pub primal_y: HermMatrix,
    /// Feasible for the original dual: `Ψ*(X) ≽ B`, `X ≽ 0`.
    pub dual_x: HermMatrix,
    /// Approximate game value `α̃(Φ)` of the normal form.
    pub alpha: f64,
    /// Certified bracket `[value_lo, value_hi] ∋ α(Φ)`.
    pub alpha_lo: f64,
    pub alpha_hi: f64,
    /// `‖R_Φ‖` for the normal-form Choi matrix.
    pub choi_norm: f64,
    pub iterations: usize,
}

/// Approximates the optimum of a strictly positive instance through the
/// game associated with its normal form.
pub fn solve_psdp(sdp: &SuperOpSdp, epsilon: f64) -> Result<PsdpResult> {
    solve_psdp_with(sdp, &SolverParams::new(epsilon))
}

pub fn solve_psdp_with(sdp: &SuperOpSdp, params: &SolverParams) -> Result<PsdpResult> {
    let normal = to_normal_form(sdp)?;
    let (n, m) = (normal.phi.n(), normal.phi.m());
    let observable = PayoffObservable::new(n, m, normal.phi.choi().clone())?;
    let choi_norm = spectral_norm(observable.matrix())?;

    let game = solve(&observable, params)?;
    if game.value_lo <= 0.0 {
        return Err(Error::ValueTooSmall {
            value_lo: game.value_lo,
        });
    }

    let rho = game.rho.as_herm();
    let sigma = game.sigma_untransposed();
    // exact scalings: λ_max(Φ(Y')) = 1 and λ_min(Φ*(X')) = 1
    let y_normal = sigma.as_herm().scale(1.0 / game.value_hi);
    let x_normal = rho.scale(1.0 / game.value_lo);

    let primal_y = normal.primal_to_original(&y_normal)?;
    let dual_x = normal.dual_to_original(&x_normal)?;
    let opt_lo = hs_inner(&sdp.b, &primal_y)?;
    let opt_hi = hs_inner(&sdp.a, &dual_x)?;
    let opt_estimate = (1.0 / game.value_mid).clamp(opt_lo.min(opt_hi), opt_hi.max(opt_lo));

    Ok(PsdpResult {
        opt_estimate,
        opt_lo,
        opt_hi,
        primal_y,
        dual_x,
        alpha: game.value_mid,
        alpha_lo: game.value_lo,
        alpha_hi: game.value_hi,
        choi_norm,
        iterations: game.iterations,
    })
}

/// Constraint residuals on the original instance:
/// `(λ_max(Ψ(Y) − A), λ_min(Ψ*(X) − B))`. Feasibility means the first is
/// `≤ 0` and the second `≥ 0`, up to rounding.
pub fn feasibility_residuals(sdp: &SuperOpSdp, result: &PsdpResult) -> Result<(f64, f64)> {
    let primal = sdp.psi.apply(&result.primal_y)?.checked_sub(&sdp.a)?;
    let dual = sdp.psi.apply_adjoint(&result.dual_x)?.checked_sub(&sdp.b)?;
    Ok((eig(&primal)?.max(), eig(&dual)?.min()))
}
