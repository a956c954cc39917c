//! Seedable generators for test and benchmark instances.

use nalgebra::DVector;
use num_complex::Complex64;
use rand::Rng;

use crate::error::Result;
use crate::game::{Measurement, Outcome, PayoffObservable};
use crate::herm::{eig, inverse_sqrt, CMatrix, DensityMatrix, HermMatrix};

fn centered<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    2.0 * rng.random::<f64>() - 1.0
}

/// Matrix with independent entries whose real and imaginary parts are
/// uniform on `[-1, 1]`.
pub fn complex_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| Complex64::new(centered(rng), centered(rng)))
}

/// `(G + G*)/2` for a random `G`.
pub fn hermitian<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> HermMatrix {
    let g = complex_matrix(rng, dim, dim);
    HermMatrix::from_hermitian_part((&g + g.adjoint()) * Complex64::new(0.5, 0.0))
}

/// `G G*` for a random `G` (rank `dim`, positive definite almost surely).
pub fn psd<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> HermMatrix {
    psd_with_rank(rng, dim, dim)
}

pub fn psd_with_rank<R: Rng + ?Sized>(rng: &mut R, dim: usize, rank: usize) -> HermMatrix {
    let g = complex_matrix(rng, dim, rank.max(1));
    HermMatrix::from_hermitian_part(&g * g.adjoint())
}

/// Random PSD matrix scaled so its largest eigenvalue is exactly 1.
pub fn unit_psd<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Result<HermMatrix> {
    let p = psd(rng, dim);
    let top = eig(&p)?.max();
    Ok(p.scale(1.0 / top))
}

pub fn density<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> DensityMatrix {
    let p = psd(rng, dim);
    let t = p.trace();
    DensityMatrix::new(p.scale(1.0 / t)).expect("normalized Gram matrix is a density")
}

pub fn pure_density<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> DensityMatrix {
    loop {
        let v = DVector::from_fn(dim, |_, _| Complex64::new(centered(rng), centered(rng)));
        if let Ok(d) = DensityMatrix::pure(&v) {
            return d;
        }
    }
}

pub fn observable<R: Rng + ?Sized>(rng: &mut R, n: usize, m: usize) -> Result<PayoffObservable> {
    PayoffObservable::new(n, m, hermitian(rng, n * m))
}

/// Observable with `0 ≼ R ≼ I` and `‖R‖ = 1`.
pub fn unit_psd_observable<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    m: usize,
) -> Result<PayoffObservable> {
    PayoffObservable::new(n, m, unit_psd(rng, n * m)?)
}

/// Complete measurement `R_a = S^{-1/2} P_a S^{-1/2}` built from random PSD
/// `P_a` with `S = Σ_a P_a`, and payoffs uniform on `[-1, 1]`.
pub fn measurement<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    m: usize,
    outcomes: usize,
) -> Result<Measurement> {
    let dim = n * m;
    let raw: Vec<HermMatrix> = (0..outcomes.max(1)).map(|_| psd(rng, dim)).collect();
    let total = raw
        .iter()
        .fold(HermMatrix::zeros(dim), |acc, p| &acc + p);
    let norm = inverse_sqrt(&eig(&total)?);
    let mut ops: Vec<HermMatrix> = raw
        .iter()
        .map(|p| p.congruence(norm.as_matrix()))
        .collect::<Result<_>>()?;
    // absorb the rounding residual of the normalization into the last operator
    let residual = ops
        .iter()
        .fold(HermMatrix::identity(dim), |acc, p| &acc - p);
    if let Some(last) = ops.last_mut() {
        *last = &*last + &residual;
    }
    let outcomes = ops
        .into_iter()
        .enumerate()
        .map(|(k, operator)| Outcome {
            label: format!("o{k}"),
            operator,
            payoff: centered(rng),
        })
        .collect();
    Measurement::new(n, m, outcomes)
}
