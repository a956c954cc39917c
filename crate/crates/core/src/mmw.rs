//! Matrix multiplicative weights for zero-sum quantum games.
//!
//! The iteration runs on an observable with `0 ≼ R ≼ I`. Alice's state at
//! step `j` is the Gibbs state of `μ Σ_{i<j} Φ(σ_i)` and Bob's is the Gibbs
//! state of `-μ Σ_{i<j} Φ*(ρ_i)`; the output is the average of the first
//! `N` iterates. Bob's reported state is the transpose of the averaged
//! `σ`, which is what plays against Alice in `⟨R, ρ⊗σᵀ⟩`.
//!
//! Every result carries an a-posteriori certificate computed directly from
//! the returned pair, so floating-point error in the iteration can only
//! weaken the reported accuracy, never invalidate it.

use crate::error::{Error, Result};
use crate::game::{GameSuperOp, PayoffObservable};
use crate::herm::{eig, gibbs_state, hs_inner, CMatrix, DensityMatrix, HermMatrix, Tolerances};

#[derive(Debug, Clone, PartialEq)]
pub struct SolverParams {
    /// Target accuracy in `(0, 1]`.
    pub epsilon: f64,
    /// Replaces the default step size `ε/8`.
    pub mu_override: Option<f64>,
    /// Replaces the default iteration count `⌈64 ln(nm)/ε²⌉`.
    pub iter_override: Option<usize>,
    /// Record per-iteration payoffs and check the regret bounds.
    pub record_trace: bool,
    /// When the observable has to be rescaled, iterate at `ε/delta_factor`
    /// so the guarantee holds for the original observable. Otherwise the
    /// rescaled game is iterated at `ε` and the guarantee degrades by
    /// `delta_factor ≤ 2`.
    pub guarantee_on_original: bool,
}

impl SolverParams {
    pub fn new(epsilon: f64) -> Self {
        SolverParams {
            epsilon,
            mu_override: None,
            iter_override: None,
            record_trace: false,
            guarantee_on_original: true,
        }
    }

    pub fn with_trace(mut self) -> Self {
        self.record_trace = true;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.0 && self.epsilon <= 1.0) {
            return Err(Error::InvalidParams(format!(
                "epsilon must lie in (0, 1], got {}",
                self.epsilon
            )));
        }
        if let Some(mu) = self.mu_override {
            if !(mu > 0.0 && mu.is_finite()) {
                return Err(Error::InvalidParams(format!(
                    "mu must be positive and finite, got {mu}"
                )));
            }
        }
        if self.iter_override == Some(0) {
            return Err(Error::InvalidParams("iteration count must be positive".into()));
        }
        Ok(())
    }

    fn overridden(&self) -> bool {
        self.mu_override.is_some() || self.iter_override.is_some()
    }
}

/// Default step size `μ = ε/8`.
pub fn default_mu(epsilon: f64) -> f64 {
    epsilon / 8.0
}

/// Default iteration count `N = ⌈64 ln(nm)/ε²⌉`, at least 1.
pub fn default_iterations(n: usize, m: usize, epsilon: f64) -> usize {
    let nm = (n * m) as f64;
    let raw = (64.0 * nm.ln() / (epsilon * epsilon)).ceil();
    (raw as usize).max(1)
}

/// Upper bound on the equilibrium gap of the iterated game after `N` steps
/// with step size `μ`: `2 sinh(μ) + ln(nm)/(μN)`.
pub fn gap_bound(n: usize, m: usize, mu: f64, iterations: usize) -> f64 {
    2.0 * mu.sinh() + regret_term(n * m, mu, iterations)
}

/// The additive term `ln(d)/(μN)` of the regret bounds.
pub fn regret_term(d: usize, mu: f64, iterations: usize) -> f64 {
    (d as f64).ln() / (mu * iterations as f64)
}

/// Spectral certificate for a candidate pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Certificate {
    /// `λ_min(Φ*(ρ))`: the payoff Alice is guaranteed against any reply.
    pub value_lo: f64,
    /// `λ_max(Φ(σ))`: the most Alice can obtain against Bob's state.
    pub value_hi: f64,
    pub gap: f64,
    /// `gap / ‖R‖` (zero when `R = 0`).
    pub certified_epsilon: f64,
}

fn check_pair(obs: &PayoffObservable, rho: &DensityMatrix, sigma_t: &DensityMatrix) -> Result<()> {
    if rho.dim() != obs.n() {
        return Err(Error::dimension("certificate (rho)", obs.n(), rho.dim()));
    }
    if sigma_t.dim() != obs.m() {
        return Err(Error::dimension("certificate (sigma)", obs.m(), sigma_t.dim()));
    }
    Ok(())
}

/// Certifies `(ρ, σ_T)` as a `gap/‖R‖`-approximate equilibrium of `R`.
///
/// `sigma_t` is Bob's state as it appears in `⟨R, ρ⊗σ_T⟩`.
pub fn equilibrium_gap(
    obs: &PayoffObservable,
    rho: &DensityMatrix,
    sigma_t: &DensityMatrix,
) -> Result<Certificate> {
    check_pair(obs, rho, sigma_t)?;
    let norm = obs.norm()?;
    let cert = spectral_certificate(&obs.superop(), rho, &sigma_t.transpose())?;
    Ok(Certificate {
        certified_epsilon: if norm > 0.0 { cert.gap / norm } else { 0.0 },
        ..cert
    })
}

/// Certificate in the super-operator picture; `sigma` is un-transposed.
/// `certified_epsilon` is left as the raw gap.
fn spectral_certificate(
    phi: &GameSuperOp,
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
) -> Result<Certificate> {
    let value_hi = eig(&phi.apply(sigma.as_herm())?)?.max();
    let value_lo = eig(&phi.apply_adjoint(rho.as_herm())?)?.min();
    let gap = value_hi - value_lo;
    Ok(Certificate {
        value_lo,
        value_hi,
        gap,
        certified_epsilon: gap,
    })
}

/// Alice's best reply to Bob's state `sigma_t`: the projector onto the top
/// eigenvector of `Φ(σ_Tᵀ)`.
pub fn best_response_alice(obs: &PayoffObservable, sigma_t: &DensityMatrix) -> Result<DensityMatrix> {
    if sigma_t.dim() != obs.m() {
        return Err(Error::dimension("best_response_alice", obs.m(), sigma_t.dim()));
    }
    let image = obs.superop().apply(sigma_t.transpose().as_herm())?;
    DensityMatrix::pure(&eig(&image)?.eigenvector(0))
}

/// Bob's best reply to `rho`, reported in the same convention as his input
/// to [`PayoffObservable::expected_payoff`].
pub fn best_response_bob(obs: &PayoffObservable, rho: &DensityMatrix) -> Result<DensityMatrix> {
    if rho.dim() != obs.n() {
        return Err(Error::dimension("best_response_bob", obs.n(), rho.dim()));
    }
    let image = obs.superop().apply_adjoint(rho.as_herm())?;
    let spectrum = eig(&image)?;
    let bottom = spectrum.eigenvector(obs.m() - 1);
    Ok(DensityMatrix::pure(&bottom)?.transpose())
}

/// The matrix multiplicative weights iteration on a fixed super-operator.
///
/// Holds the current pair `(ρ_j, σ_j)` and the running exponent sums.
pub struct MmwIteration<'a> {
    phi: &'a GameSuperOp,
    mu: f64,
    sum_alice: HermMatrix,
    sum_bob: HermMatrix,
    rho: DensityMatrix,
    sigma: DensityMatrix,
    step: usize,
}

impl<'a> MmwIteration<'a> {
    /// Starts from `ρ_0 = I/n`, `σ_0 = I/m`.
    pub fn new(phi: &'a GameSuperOp, mu: f64) -> Self {
        MmwIteration {
            phi,
            mu,
            sum_alice: HermMatrix::zeros(phi.n()),
            sum_bob: HermMatrix::zeros(phi.m()),
            rho: DensityMatrix::maximally_mixed(phi.n()),
            sigma: DensityMatrix::maximally_mixed(phi.m()),
            step: 0,
        }
    }

    pub fn step(&self) -> usize {
        self.step
    }

    pub fn rho(&self) -> &DensityMatrix {
        &self.rho
    }

    /// Bob's current iterate in the super-operator picture (un-transposed).
    pub fn sigma(&self) -> &DensityMatrix {
        &self.sigma
    }

    /// Consumes `(ρ_j, σ_j)`, returning `⟨ρ_j, Φ(σ_j)⟩`, and moves to `j+1`.
    pub fn advance(&mut self) -> Result<f64> {
        let j = self.step;
        let ctx = |e: Error| e.at_iteration(j);
        let alice_gain = self.phi.apply(self.sigma.as_herm()).map_err(ctx)?;
        let bob_loss = self.phi.apply_adjoint(self.rho.as_herm()).map_err(ctx)?;
        let payoff = hs_inner(self.rho.as_herm(), &alice_gain).map_err(ctx)?;

        self.sum_alice = &self.sum_alice + &alice_gain;
        self.sum_bob = &self.sum_bob + &bob_loss;
        self.rho = gibbs_state(&self.sum_alice.scale(self.mu)).map_err(ctx)?;
        self.sigma = gibbs_state(&self.sum_bob.scale(-self.mu)).map_err(ctx)?;
        self.step += 1;
        Ok(payoff)
    }
}

/// Both sides of the two regret inequalities for an averaged pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegretBounds {
    /// `λ_max(Φ(σ̄))`.
    pub alice_lhs: f64,
    /// `(e^μ/N) Σ p_j + ln(n)/(μN)`.
    pub alice_rhs: f64,
    /// `λ_min(Φ*(ρ̄))`.
    pub bob_lhs: f64,
    /// `(e^{-μ}/N) Σ p_j − ln(m)/(μN)`.
    pub bob_rhs: f64,
}

impl RegretBounds {
    pub fn holds(&self, slack: f64) -> bool {
        self.alice_lhs <= self.alice_rhs + slack && self.bob_lhs >= self.bob_rhs - slack
    }
}

/// Per-iteration record kept when `record_trace` is set.
#[derive(Debug, Clone, PartialEq)]
pub struct SolveTrace {
    /// `p_j = ⟨ρ_j, Φ(σ_j)⟩` for `j = 0..N`, on the iterated observable.
    pub payoffs: Vec<f64>,
    pub bounds: RegretBounds,
}

/// How the solved observable relates to the one iterated on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Reduction {
    /// `R` already satisfied `0 ≼ R ≼ I` with `λ_max(R) ≥ 1/2`.
    Direct,
    /// Iterated on `(R − shift·I)/scale`.
    Rescaled {
        shift: f64,
        scale: f64,
        delta_factor: f64,
    },
    /// `R = c·I`: every pair is an exact equilibrium.
    Degenerate,
}

#[derive(Debug, Clone)]
pub struct EquilibriumResult {
    pub rho: DensityMatrix,
    /// Bob's state as it enters `⟨R, ρ⊗σ⟩`, i.e. the transpose of the
    /// averaged iterate.
    pub sigma: DensityMatrix,
    pub value_lo: f64,
    pub value_mid: f64,
    pub value_hi: f64,
    pub gap: f64,
    pub certified_epsilon: f64,
    pub iterations: usize,
    pub mu: f64,
    /// Accuracy parameter the iteration actually ran at.
    pub epsilon_iterated: f64,
    pub reduction: Reduction,
    /// Certificate on the iterated observable (`0 ≼ P ≼ I`).
    pub iterated: Certificate,
    /// Bound on `certified_epsilon` implied by the default parameters;
    /// `None` when μ or N were overridden.
    pub a_priori_epsilon: Option<f64>,
    pub trace: Option<SolveTrace>,
}

impl EquilibriumResult {
    /// Bob's averaged iterate in the super-operator picture.
    pub fn sigma_untransposed(&self) -> DensityMatrix {
        self.sigma.transpose()
    }
}

/// Computes an approximate equilibrium of `obs` with certificates.
pub fn solve(obs: &PayoffObservable, params: &SolverParams) -> Result<EquilibriumResult> {
    params.validate()?;
    let tol = Tolerances::default();

    let game = match obs.rescale() {
        Ok(game) => game,
        Err(Error::DegenerateGame { .. }) => return degenerate(obs),
        Err(e) => return Err(e),
    };
    let (bottom, top) = (game.shift, game.shift + game.scale);
    let direct = bottom >= -tol.psd && top <= 1.0 + tol.psd && top >= 0.5;
    let (rescaled, epsilon_iterated) = if direct {
        (None, params.epsilon)
    } else if params.guarantee_on_original {
        let eps = params.epsilon / game.delta_factor.max(1.0);
        (Some(game), eps)
    } else {
        (Some(game), params.epsilon)
    };
    let iterated_obs = rescaled.as_ref().map_or(obs, |g| &g.observable);
    let (n, m) = (obs.n(), obs.m());

    let mu = params.mu_override.unwrap_or_else(|| default_mu(epsilon_iterated));
    let iterations = params
        .iter_override
        .unwrap_or_else(|| default_iterations(n, m, epsilon_iterated));

    let phi = iterated_obs.superop();
    let mut iteration = MmwIteration::new(&phi, mu);
    let mut rho_sum = CMatrix::zeros(n, n);
    let mut sigma_sum = CMatrix::zeros(m, m);
    let mut payoffs = params.record_trace.then(|| Vec::with_capacity(iterations));
    for _ in 0..iterations {
        rho_sum += iteration.rho().as_herm().as_matrix();
        sigma_sum += iteration.sigma().as_herm().as_matrix();
        let p = iteration.advance()?;
        if let Some(trace) = payoffs.as_mut() {
            trace.push(p);
        }
    }
    let inv = 1.0 / iterations as f64;
    let rho = average(rho_sum, inv)?;
    let sigma = average(sigma_sum, inv)?;

    let iterated = spectral_certificate(&phi, &rho, &sigma)?;
    let trace = payoffs.map(|payoffs| {
        let total: f64 = payoffs.iter().sum();
        let bounds = RegretBounds {
            alice_lhs: iterated.value_hi,
            alice_rhs: mu.exp() * total * inv + regret_term(n, mu, iterations),
            bob_lhs: iterated.value_lo,
            bob_rhs: (-mu).exp() * total * inv - regret_term(m, mu, iterations),
        };
        SolveTrace { payoffs, bounds }
    });

    let sigma_t = sigma.transpose();
    let cert = equilibrium_gap(obs, &rho, &sigma_t)?;
    let value_mid = obs.expected_payoff(&rho, &sigma_t)?;

    let (reduction, a_priori) = match &rescaled {
        None => (
            Reduction::Direct,
            // gap ≤ ε/2 on R itself, and ‖R‖ ≥ 1/2
            epsilon_iterated / (2.0 * obs.norm()?),
        ),
        Some(g) => (
            Reduction::Rescaled {
                shift: g.shift,
                scale: g.scale,
                delta_factor: g.delta_factor,
            },
            g.delta_factor * epsilon_iterated / 2.0,
        ),
    };

    Ok(EquilibriumResult {
        rho,
        sigma: sigma_t,
        value_lo: cert.value_lo,
        value_mid,
        value_hi: cert.value_hi,
        gap: cert.gap,
        certified_epsilon: cert.certified_epsilon,
        iterations,
        mu,
        epsilon_iterated,
        reduction,
        iterated,
        a_priori_epsilon: (!params.overridden()).then_some(a_priori),
        trace,
    })
}

fn average(sum: CMatrix, inv: f64) -> Result<DensityMatrix> {
    let herm = HermMatrix::new(sum * num_complex::Complex64::new(inv, 0.0))?;
    DensityMatrix::new(herm)
}

fn degenerate(obs: &PayoffObservable) -> Result<EquilibriumResult> {
    let rho = DensityMatrix::maximally_mixed(obs.n());
    let sigma = DensityMatrix::maximally_mixed(obs.m());
    let cert = equilibrium_gap(obs, &rho, &sigma)?;
    let value_mid = obs.expected_payoff(&rho, &sigma)?;
    Ok(EquilibriumResult {
        rho,
        sigma,
        value_lo: cert.value_lo,
        value_mid,
        value_hi: cert.value_hi,
        gap: cert.gap,
        certified_epsilon: cert.certified_epsilon,
        iterations: 0,
        mu: 0.0,
        epsilon_iterated: 0.0,
        reduction: Reduction::Degenerate,
        iterated: cert,
        a_priori_epsilon: Some(0.0),
        trace: None,
    })
}
