//! Fidelity `F(A,B) = tr (A^{1/2} B A^{1/2})^{1/2}`, the partial sums
//! `F_m⁺` of its eigenvalues, and the order and orthogonality predicates on
//! density operators.
//!
//! The eigenvalues of `(A^{1/2} B A^{1/2})^{1/2}` are the singular values of
//! `A^{1/2} B^{1/2}`, since `XX* = A^{1/2} B A^{1/2}` for that product. They
//! are computed by an SVD of the product rather than as square roots of the
//! eigenvalues of `A^{1/2} B A^{1/2}`: a rounding-level eigenvalue `ε` there
//! would turn into an error of `√ε` in the fidelity.

use nalgebra::SVD;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matcore::{ensure_same_dim, DensityOperator, PureState};
use crate::tol::{NUM_TOL, ORDER_TOL, ORTH_TOL};

#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
pub struct FidelityValue {
    value: f64,
}

impl FidelityValue {
    fn new(value: f64) -> Self {
        debug_assert!(value >= -NUM_TOL, "fidelity {value} below clip band");
        Self {
            value: value.max(0.0),
        }
    }

    pub fn value(self) -> f64 {
        self.value
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PartialFidelityValue {
    m: usize,
    value: f64,
}

impl PartialFidelityValue {
    pub fn m(self) -> usize {
        self.m
    }

    pub fn value(self) -> f64 {
        self.value
    }
}

/// Eigenvalues of `(A^{1/2} B A^{1/2})^{1/2}`, non-increasing.
pub fn fidelity_spectrum(a: &DensityOperator, b: &DensityOperator) -> Result<Vec<f64>> {
    ensure_same_dim(a.dim(), b.dim())?;
    let d = a.dim();
    if a.is_zero() || b.is_zero() {
        return Ok(vec![0.0; d]);
    }
    let product = a.sqrt()?.entries() * b.sqrt()?.entries();
    let svd = SVD::try_new(product, false, false, f64::EPSILON, 1000.max(100 * d * d))
        .ok_or_else(|| Error::SolverFailure("SVD did not converge".into()))?;
    let mut values: Vec<f64> = svd.singular_values.iter().copied().collect();
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::SolverFailure("non-finite singular value".into()));
    }
    values.sort_by(|x, y| y.total_cmp(x));
    Ok(values)
}

pub fn fidelity(a: &DensityOperator, b: &DensityOperator) -> Result<FidelityValue> {
    let values = fidelity_spectrum(a, b)?;
    Ok(FidelityValue::new(values.iter().sum()))
}

/// Sum of the `m` largest eigenvalues of `(A^{1/2} B A^{1/2})^{1/2}`,
/// multiplicities counted. `m = dim` gives [`fidelity`] bit for bit.
pub fn partial_fidelity(a: &DensityOperator, b: &DensityOperator, m: usize) -> Result<PartialFidelityValue> {
    ensure_same_dim(a.dim(), b.dim())?;
    if m == 0 || m > a.dim() {
        return Err(Error::BadM { m, dim: a.dim() });
    }
    let values = fidelity_spectrum(a, b)?;
    Ok(PartialFidelityValue {
        m,
        value: values[..m].iter().sum::<f64>().max(0.0),
    })
}

/// `|⟨x, y⟩|`, the fidelity of the two rank-one projections.
pub fn fidelity_pure(x: &PureState, y: &PureState) -> Result<FidelityValue> {
    Ok(FidelityValue::new(x.inner(y)?.norm()))
}

/// `tr AB`.
pub fn trace_product(a: &DensityOperator, b: &DensityOperator) -> Result<f64> {
    ensure_same_dim(a.dim(), b.dim())?;
    let (x, y) = (a.entries(), b.entries());
    // tr AB = Σ_ij A_ij B_ji = Σ_ij A_ij conj(B_ij) for Hermitian B
    Ok(x.iter().zip(y.iter()).map(|(p, q)| (p * q.conj()).re).sum())
}

/// `A ≤ B` in the Loewner order: the smallest eigenvalue of `B − A` is at
/// least `-ORDER_TOL·(1 + ‖B − A‖)`, spectral norm.
pub fn is_leq(a: &DensityOperator, b: &DensityOperator) -> Result<bool> {
    ensure_same_dim(a.dim(), b.dim())?;
    let spectrum = b.matrix().sub(a.matrix())?.eig()?;
    Ok(spectrum.min() >= -ORDER_TOL * (1.0 + spectrum.norm()))
}

/// `AB = 0`, tested as `‖AB‖_F ≤ ORTH_TOL·(1 + ‖A‖_F ‖B‖_F)`.
pub fn is_orthogonal(a: &DensityOperator, b: &DensityOperator) -> Result<bool> {
    ensure_same_dim(a.dim(), b.dim())?;
    let product = (a.entries() * b.entries()).norm();
    let scale = a.matrix().frobenius_norm() * b.matrix().frobenius_norm();
    Ok(product <= ORTH_TOL * (1.0 + scale))
}
