//! Hermitian matrices, density operators, spectra and pure states.
//!
//! Everything here is immutable once constructed. A [`HermitianMatrix`] is
//! exactly Hermitian (the constructor stores `(M + M*)/2` with a real
//! diagonal), and a [`DensityOperator`] is a Hermitian matrix whose spectrum
//! was checked to be non-negative up to [`PSD_TOL`].

use nalgebra::{Complex, DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};
use crate::tol::{EIG_TOL, HERMITICITY_TOL, NOISE_FLOOR_ULPS, PHASE_TOL, PSD_TOL, TRACE_TOL, UNIT_TOL};

pub type ComplexScalar = Complex<f64>;
pub type CMatrix = DMatrix<ComplexScalar>;
pub type CVector = DVector<ComplexScalar>;

pub(crate) const ZERO: ComplexScalar = Complex { re: 0.0, im: 0.0 };
pub(crate) const ONE: ComplexScalar = Complex { re: 1.0, im: 0.0 };

fn check_square_finite(m: &CMatrix) -> Result<()> {
    if m.nrows() != m.ncols() {
        return Err(Error::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    if m.nrows() == 0 {
        return Err(Error::EmptyMatrix);
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

/// A `d × d` complex Hermitian matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    entries: CMatrix,
}

impl HermitianMatrix {
    /// Validates that `m` is Hermitian within [`HERMITICITY_TOL`] (relative to
    /// `1 + ‖m‖_F`) and stores its exact Hermitian part.
    pub fn new(m: CMatrix) -> Result<Self> {
        check_square_finite(&m)?;
        let deviation = (&m - m.adjoint()).norm();
        if deviation > HERMITICITY_TOL * (1.0 + m.norm()) {
            return Err(Error::NotHermitian { deviation });
        }
        Ok(Self::symmetrized(&m))
    }

    /// Stores the Hermitian part `(m + m*)/2` without checking how far `m`
    /// was from Hermitian. Used for products that are Hermitian in exact
    /// arithmetic.
    pub fn hermitian_part(m: &CMatrix) -> Result<Self> {
        check_square_finite(m)?;
        Ok(Self::symmetrized(m))
    }

    fn symmetrized(m: &CMatrix) -> Self {
        let d = m.nrows();
        let mut out = CMatrix::zeros(d, d);
        for i in 0..d {
            out[(i, i)] = Complex::new(m[(i, i)].re, 0.0);
            for j in (i + 1)..d {
                let z = (m[(i, j)] + m[(j, i)].conj()) * 0.5;
                // `+ 0.0` keeps zero imaginary parts positive on both sides
                out[(i, j)] = Complex::new(z.re, z.im + 0.0);
                out[(j, i)] = Complex::new(z.re, -z.im + 0.0);
            }
        }
        Self { entries: out }
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Result<Self> {
        let v = DVector::from_iterator(diag.len(), diag.iter().map(|&x| Complex::new(x, 0.0)));
        Self::new(CMatrix::from_diagonal(&v))
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            entries: CMatrix::zeros(dim, dim),
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            entries: CMatrix::identity(dim, dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.entries
    }

    pub fn into_matrix(self) -> CMatrix {
        self.entries
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim()).map(|i| self.entries[(i, i)].re).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries.norm()
    }

    /// Entrywise complex conjugate in the canonical basis (equal to the
    /// transpose for a Hermitian matrix).
    pub fn conj(&self) -> Self {
        Self {
            entries: self.entries.map(|z| z.conj()),
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        ensure_same_dim(self.dim(), other.dim())?;
        Ok(Self::symmetrized(&(&self.entries - &other.entries)))
    }

    pub fn eig(&self) -> Result<Spectrum> {
        eig_hermitian(self)
    }
}

pub(crate) fn ensure_same_dim(left: usize, right: usize) -> Result<()> {
    if left != right {
        return Err(Error::DimensionMismatch { left, right });
    }
    Ok(())
}

/// Eigenvalues in non-increasing order with their orthonormal eigenvectors
/// as the columns of a unitary matrix.
#[derive(Debug, Clone)]
pub struct Spectrum {
    eigenvalues: Vec<f64>,
    eigenvectors: CMatrix,
}

impl Spectrum {
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenvectors(&self) -> &CMatrix {
        &self.eigenvectors
    }

    pub fn eigenvector(&self, i: usize) -> CVector {
        self.eigenvectors.column(i).into_owned()
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn max(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn min(&self) -> f64 {
        self.eigenvalues[self.eigenvalues.len() - 1]
    }

    /// Spectral norm of the decomposed matrix.
    pub fn norm(&self) -> f64 {
        self.max().abs().max(self.min().abs())
    }

    /// `V f(Λ) V*`.
    pub fn map_eigenvalues(&self, f: impl Fn(f64) -> f64) -> HermitianMatrix {
        let d = self.dim();
        let mut scaled = self.eigenvectors.clone();
        for j in 0..d {
            let s = f(self.eigenvalues[j]);
            scaled.column_mut(j).scale_mut(s);
        }
        HermitianMatrix::symmetrized(&(scaled * self.eigenvectors.adjoint()))
    }

    pub fn reconstruct(&self) -> HermitianMatrix {
        self.map_eigenvalues(|l| l)
    }
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues sorted
/// non-increasing with ties kept in solver order.
///
/// The decomposition is checked against its own reconstruction and
/// orthonormality residuals before it is returned.
pub fn eig_hermitian(m: &HermitianMatrix) -> Result<Spectrum> {
    let d = m.dim();
    let max_iter = 1000.max(100 * d * d);
    let eig = SymmetricEigen::try_new(m.entries.clone(), f64::EPSILON, max_iter)
        .ok_or_else(|| Error::SolverFailure(format!("no convergence in {max_iter} sweeps (d = {d})")))?;

    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let eigenvalues: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut eigenvectors = CMatrix::zeros(d, d);
    for (dst, &src) in order.iter().enumerate() {
        eigenvectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    if eigenvalues.iter().any(|l| !l.is_finite()) {
        return Err(Error::SolverFailure("non-finite eigenvalue".into()));
    }

    let spectrum = Spectrum {
        eigenvalues,
        eigenvectors,
    };
    let residual = (spectrum.reconstruct().entries - &m.entries).norm();
    if residual > EIG_TOL * (1.0 + m.frobenius_norm()) {
        return Err(Error::SolverFailure(format!("reconstruction residual {residual:e}")));
    }
    let gram = spectrum.eigenvectors.adjoint() * &spectrum.eigenvectors;
    let orth = (gram - CMatrix::identity(d, d)).norm();
    if orth > EIG_TOL {
        return Err(Error::SolverFailure(format!("eigenvectors not orthonormal ({orth:e})")));
    }
    Ok(spectrum)
}

/// A positive semidefinite Hermitian matrix with finite trace.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    matrix: HermitianMatrix,
    trace: f64,
}

/// Accepts `m` as a density operator.
///
/// Eigenvalues in `[-PSD_TOL·‖m‖, 0)` are clipped to zero and the matrix is
/// reassembled; anything more negative is rejected. With
/// `require_unit_trace` the trace must be within [`TRACE_TOL`] of one.
pub fn validate_density(m: HermitianMatrix, require_unit_trace: bool) -> Result<DensityOperator> {
    let spectrum = eig_hermitian(&m)?;
    let min = spectrum.min();
    if min < -PSD_TOL * spectrum.norm() {
        return Err(Error::NotPositive { min_eigenvalue: min });
    }
    let matrix = if min < 0.0 {
        spectrum.map_eigenvalues(|l| l.max(0.0))
    } else {
        m
    };
    let trace = matrix.trace();
    if require_unit_trace && (trace - 1.0).abs() > TRACE_TOL {
        return Err(Error::NotNormalized { trace });
    }
    Ok(DensityOperator { matrix, trace })
}

/// Principal square root via the eigendecomposition.
///
/// Eigenvalues at or below the rounding floor `NOISE_FLOOR_ULPS·d·ε·λ_max`
/// (which includes every negative one) map to zero.
pub fn sqrt_psd(a: &DensityOperator) -> Result<DensityOperator> {
    let spectrum = a.spectrum()?;
    let floor = noise_floor(a.dim(), spectrum.max());
    let root = spectrum.map_eigenvalues(|l| if l <= floor { 0.0 } else { l.sqrt() });
    Ok(DensityOperator::from_psd_unchecked(root))
}

pub(crate) fn noise_floor(dim: usize, scale: f64) -> f64 {
    NOISE_FLOOR_ULPS * dim as f64 * f64::EPSILON * scale.abs()
}

impl DensityOperator {
    pub fn new(m: HermitianMatrix, require_unit_trace: bool) -> Result<Self> {
        validate_density(m, require_unit_trace)
    }

    /// Wraps a matrix that is PSD by construction (e.g. `GG*` or `xx*`)
    /// without an eigendecomposition.
    pub(crate) fn from_psd_unchecked(matrix: HermitianMatrix) -> Self {
        let trace = matrix.trace();
        Self { matrix, trace }
    }

    pub fn from_diagonal(diag: &[f64]) -> Result<Self> {
        validate_density(HermitianMatrix::from_real_diagonal(diag)?, false)
    }

    pub fn zero(dim: usize) -> Self {
        Self::from_psd_unchecked(HermitianMatrix::zeros(dim))
    }

    /// The maximally mixed operator scaled to trace one.
    pub fn maximally_mixed(dim: usize) -> Self {
        let m = HermitianMatrix::identity(dim).into_matrix() * Complex::new(1.0 / dim as f64, 0.0);
        Self::from_psd_unchecked(HermitianMatrix { entries: m })
    }

    /// The rank-one projection `xx*`.
    pub fn projection(x: &PureState) -> Self {
        let v = x.amplitudes();
        Self::from_psd_unchecked(HermitianMatrix::symmetrized(&(v * v.adjoint())))
    }

    /// `x x*` for an arbitrary (not necessarily unit) vector.
    pub fn outer(v: &CVector) -> Result<Self> {
        Ok(Self::from_psd_unchecked(HermitianMatrix::hermitian_part(&(v * v.adjoint()))?))
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &HermitianMatrix {
        &self.matrix
    }

    pub fn entries(&self) -> &CMatrix {
        self.matrix.matrix()
    }

    pub fn trace(&self) -> f64 {
        self.trace
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.entries.iter().all(|z| z.re == 0.0 && z.im == 0.0)
    }

    /// `c·A` for `c ≥ 0`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        if !(c.is_finite() && c >= 0.0) {
            return Err(Error::NotPositive { min_eigenvalue: c });
        }
        let m = &self.matrix.entries * Complex::new(c, 0.0);
        Ok(Self::from_psd_unchecked(HermitianMatrix { entries: m }))
    }

    /// `A + B`.
    pub fn add(&self, other: &Self) -> Result<Self> {
        ensure_same_dim(self.dim(), other.dim())?;
        let m = &self.matrix.entries + &other.matrix.entries;
        Ok(Self::from_psd_unchecked(HermitianMatrix { entries: m }))
    }

    /// Entrywise conjugate `Ā`, the antiunitary action of the canonical
    /// conjugation.
    pub fn conj(&self) -> Self {
        Self::from_psd_unchecked(self.matrix.conj())
    }

    pub fn spectrum(&self) -> Result<Spectrum> {
        eig_hermitian(&self.matrix)
    }

    pub fn sqrt(&self) -> Result<Self> {
        sqrt_psd(self)
    }

    /// Re-wraps `U A U*`-style products that are PSD in exact arithmetic.
    pub(crate) fn from_congruence(m: &CMatrix) -> Result<Self> {
        Ok(Self::from_psd_unchecked(HermitianMatrix::hermitian_part(m)?))
    }
}

/// A unit vector with canonical global phase: the first component of modulus
/// above [`PHASE_TOL`] is real and positive.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amplitudes: CVector,
}

impl PureState {
    /// Normalizes `amplitudes` and fixes the global phase.
    ///
    /// Vectors already within [`UNIT_TOL`] of unit norm are not rescaled, and
    /// an already-canonical phase is not touched, so the constructor is
    /// idempotent bit for bit.
    pub fn new(amplitudes: CVector) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::EmptyMatrix);
        }
        for (i, z) in amplitudes.iter().enumerate() {
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(Error::NonFinite { row: i, col: 0 });
            }
        }
        let norm = amplitudes.norm();
        if norm == 0.0 {
            return Err(Error::ZeroVector);
        }
        let mut v = amplitudes;
        if (norm - 1.0).abs() > UNIT_TOL {
            v.unscale_mut(norm);
        }
        if let Some(pivot) = v.iter().position(|z| z.norm() > PHASE_TOL) {
            let z = v[pivot];
            if z.im != 0.0 || z.re <= 0.0 {
                let phase = z.conj() / z.norm();
                v *= phase;
                v[pivot] = Complex::new(v[pivot].re, 0.0);
            }
        }
        Ok(Self { amplitudes: v })
    }

    pub fn from_components(components: &[ComplexScalar]) -> Result<Self> {
        Self::new(CVector::from_column_slice(components))
    }

    pub fn basis(dim: usize, index: usize) -> Self {
        let mut v = CVector::zeros(dim);
        v[index] = ONE;
        Self { amplitudes: v }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    /// `⟨self, other⟩`, conjugate-linear in `self`.
    pub fn inner(&self, other: &Self) -> Result<ComplexScalar> {
        ensure_same_dim(self.dim(), other.dim())?;
        Ok(self.amplitudes.dotc(&other.amplitudes))
    }

    pub fn projection(&self) -> DensityOperator {
        DensityOperator::projection(self)
    }
}
