//! Approximate equilibria of zero-sum quantum games by matrix
//! multiplicative weights, and the induced approximation scheme for
//! strictly positive semidefinite programs.
//!
//! A game is given by a Hermitian payoff observable `R` on `C^n ⊗ C^m`:
//! Alice (maximizer) holds `ρ`, Bob (minimizer) holds `σ`, and Alice's
//! expected payoff is `⟨R, ρ⊗σ⟩`. See [`mmw::solve`] for the solver and
//! [`mmw::equilibrium_gap`] for the certificate it reports.

pub mod error;
pub mod game;
pub mod herm;
pub mod mmw;
pub mod oracle;
pub mod psdp;
pub mod random;

pub use error::{Error, Result};
pub use game::{GameSuperOp, Measurement, Outcome, PayoffObservable, RescaledGame};
pub use herm::{DensityMatrix, HermMatrix, Spectrum, Tolerances};
pub use mmw::{equilibrium_gap, solve, Certificate, EquilibriumResult, SolverParams};
pub use oracle::{classical_minimax_oracle, ClassicalSolution};
pub use psdp::{solve_psdp, to_normal_form, PsdpResult, SuperOpSdp};
