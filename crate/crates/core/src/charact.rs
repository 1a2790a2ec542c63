//! Rank-one and rank-one-projection characterizations of density operators.
//!
//! Two independent routes decide whether `A` has rank one:
//!
//! - an orthogonal certificate: `A ≠ 0` has rank one iff there are `d − 1`
//!   nonzero positive operators which together with `A` are mutually
//!   orthogonal;
//! - order totality: `A` has rank one iff its minorants `{T : 0 ≤ T ≤ A}`
//!   are totally ordered. [`order_totality_probe`] samples that set.

use nalgebra::Complex;
use rand::Rng;

use crate::error::{Error, Result};
use crate::fidelity::is_leq;
use crate::matcore::{CMatrix, DensityOperator, PureState, Spectrum};
use crate::random;
use crate::tol::{CERT_TOL, RANK_TOL, TRACE_TOL};

/// Witnesses `A₁, …, A_{d−1}` mutually orthogonal to each other and to `A`.
#[derive(Debug, Clone)]
pub struct OrthogonalCertificate {
    witnesses: Vec<DensityOperator>,
}

impl OrthogonalCertificate {
    pub fn witnesses(&self) -> &[DensityOperator] {
        &self.witnesses
    }
}

#[derive(Debug, Clone)]
pub enum CertificateOutcome {
    Certified(OrthogonalCertificate),
    /// No certificate exists: mutually orthogonal ranges would need total
    /// rank `rank + (d − 1) > d`.
    NotRankOne { rank: usize },
}

impl CertificateOutcome {
    pub fn is_certified(&self) -> bool {
        matches!(self, CertificateOutcome::Certified(_))
    }
}

/// Count of eigenvalues above `RANK_TOL · λ_max`.
pub fn numerical_rank(spectrum: &Spectrum) -> usize {
    let top = spectrum.max();
    if top <= 0.0 {
        return 0;
    }
    spectrum.eigenvalues().iter().filter(|&&l| l > RANK_TOL * top).count()
}

/// Builds the orthogonal certificate for a rank-one `A`: the projections
/// onto an orthonormal basis of the complement of its range.
pub fn rank_one_certificate(a: &DensityOperator) -> Result<CertificateOutcome> {
    if a.trace() <= CERT_TOL {
        return Err(Error::ZeroOperator);
    }
    let spectrum = a.spectrum()?;
    let rank = numerical_rank(&spectrum);
    if rank != 1 {
        return Ok(CertificateOutcome::NotRankOne { rank });
    }
    let witnesses = (1..a.dim())
        .map(|i| PureState::new(spectrum.eigenvector(i)).map(|x| x.projection()))
        .collect::<Result<Vec<_>>>()?;
    Ok(CertificateOutcome::Certified(OrthogonalCertificate { witnesses }))
}

/// Numerical rank exactly one. The zero operator is not rank one.
pub fn is_rank_one(a: &DensityOperator) -> bool {
    if a.trace() <= CERT_TOL {
        return false;
    }
    a.spectrum().map(|s| numerical_rank(&s) == 1).unwrap_or(false)
}

/// Rank one with unit trace.
pub fn is_rank_one_projection(a: &DensityOperator) -> bool {
    is_rank_one(a) && (a.trace() - 1.0).abs() <= TRACE_TOL
}

/// `A^{1/2} M A^{1/2}` with `M = u·W*W/‖W*W‖`, which satisfies
/// `0 ≤ D ≤ A` because `0 ≤ M ≤ I`.
fn sample_minorant<R: Rng + ?Sized>(rng: &mut R, root: &DensityOperator) -> Result<DensityOperator> {
    let d = root.dim();
    let w = random::gaussian_matrix(rng, d, d);
    let gram = DensityOperator::from_congruence(&(w.adjoint() * &w))?;
    let norm = gram.spectrum()?.max();
    let u = 1.0 - rng.random::<f64>();
    let contraction: CMatrix = gram.entries() * Complex::new(u / norm, 0.0);
    DensityOperator::from_congruence(&(root.entries() * contraction * root.entries()))
}

/// Draws `samples` minorants `D = A^{1/2} M A^{1/2}` of `A`, where
/// `M = u·W*W/‖W*W‖` for a complex Gaussian `W` and `u` uniform in `(0, 1]`,
/// and reports whether they form a chain under `≤`.
///
/// The samples are sorted by trace and only neighbours are compared. That is
/// the same test as comparing every pair: `S ≤ T` forces `tr S ≤ tr T`, so a
/// chain is ordered by trace, and comparable neighbours chain by transitivity.
pub fn order_totality_probe(a: &DensityOperator, samples: usize, seed: u64) -> Result<bool> {
    if a.trace() <= CERT_TOL {
        return Err(Error::ZeroOperator);
    }
    let root = a.sqrt()?;
    let mut rng = random::rng(seed, 0);
    let mut minorants = (0..samples)
        .map(|_| sample_minorant(&mut rng, &root))
        .collect::<Result<Vec<_>>>()?;
    minorants.sort_by(|x, y| x.trace().total_cmp(&y.trace()));
    for pair in minorants.windows(2) {
        if !is_leq(&pair[0], &pair[1])? && !is_leq(&pair[1], &pair[0])? {
            return Ok(false);
        }
    }
    Ok(true)
}
