//! Reconstruction of the unitary or antiunitary operator implementing a
//! fidelity-preserving map.
//!
//! A map `φ` that preserves fidelity sends rank-one projections to rank-one
//! projections and keeps their transition probabilities `tr PQ`, so on pure
//! states it acts as `x ↦ Ux` or `x ↦ Ux̄` up to a phase per vector. The
//! reconstruction probes `φ` on a fixed schedule of pure states and glues the
//! per-vector phases together:
//!
//! 1. basis states `e_i` give the columns `f_i` of `U` up to phase;
//! 2. superpositions `(e_1 + e_j)/√2` fix every column's phase relative to
//!    the first;
//! 3. superpositions `(e_j + e_k)/√2` cross-check the phases (`d ≥ 3`);
//! 4. `(e_1 + i·e_2)/√2` decides between `U` and `U∘conj`;
//! 5. the columns are assembled and checked to be unitary;
//! 6. `φ(A)` is compared with the assembled symmetry on random density
//!    operators of mixed rank.
//!
//! Failures are reported through [`ReconstructionStatus`] rather than errors:
//! a map that does not preserve fidelity is a legitimate input.

use nalgebra::Complex;
use serde::{Serialize, Serializer};

use crate::charact::is_rank_one_projection;
use crate::error::{Error, Result};
use crate::fidelity::trace_product;
use crate::io::MatrixFile;
use crate::matcore::{ensure_same_dim, CMatrix, CVector, DensityOperator, PureState, ONE, ZERO};
use crate::random;
use crate::tol::{CERTIFY_TOL, PHASE_FIX_TOL, PROBE_TOL, UNITARY_TOL, VERIFICATION_TRIALS};

/// A map on density operators of a fixed dimension.
///
/// Implementations must be pure: the same input bits give the same output
/// bits. Nothing else (linearity, injectivity, surjectivity) is assumed.
pub trait DensityMap {
    fn dim(&self) -> usize;
    fn apply(&self, a: &DensityOperator) -> DensityOperator;
}

impl<M: DensityMap + ?Sized> DensityMap for &M {
    fn dim(&self) -> usize {
        (**self).dim()
    }

    fn apply(&self, a: &DensityOperator) -> DensityOperator {
        (**self).apply(a)
    }
}

impl<M: DensityMap + ?Sized> DensityMap for Box<M> {
    fn dim(&self) -> usize {
        (**self).dim()
    }

    fn apply(&self, a: &DensityOperator) -> DensityOperator {
        (**self).apply(a)
    }
}

/// Adapts a closure into a [`DensityMap`].
pub struct FnMap<F> {
    dim: usize,
    f: F,
}

impl<F: Fn(&DensityOperator) -> DensityOperator> FnMap<F> {
    pub fn new(dim: usize, f: F) -> Self {
        Self { dim, f }
    }
}

impl<F: Fn(&DensityOperator) -> DensityOperator> DensityMap for FnMap<F> {
    fn dim(&self) -> usize {
        self.dim
    }

    fn apply(&self, a: &DensityOperator) -> DensityOperator {
        (self.f)(a)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Unitary,
    Antiunitary,
}

/// `A ↦ UAU*` (unitary) or `A ↦ UĀU*` (antiunitary), with `Ā` the entrywise
/// conjugate in the canonical basis.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetryOperator {
    parity: Parity,
    u: CMatrix,
}

impl SymmetryOperator {
    pub fn new(parity: Parity, u: CMatrix) -> Result<Self> {
        if u.nrows() != u.ncols() {
            return Err(Error::NotSquare {
                rows: u.nrows(),
                cols: u.ncols(),
            });
        }
        let deviation = unitarity_defect(&u);
        if !(deviation <= UNITARY_TOL) {
            return Err(Error::NotUnitary { deviation });
        }
        Ok(Self { parity, u })
    }

    pub fn identity(dim: usize, parity: Parity) -> Self {
        Self {
            parity,
            u: CMatrix::identity(dim, dim),
        }
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.u
    }

    pub fn dim(&self) -> usize {
        self.u.nrows()
    }

    /// The same symmetry with `U` replaced by `e^{iθ}U`.
    pub fn with_phase(&self, theta: f64) -> Self {
        Self {
            parity: self.parity,
            u: &self.u * Complex::from_polar(1.0, theta),
        }
    }

    /// Image of the pure state `x`: `Ux` or `Ux̄`.
    pub fn apply_vector(&self, x: &CVector) -> CVector {
        match self.parity {
            Parity::Unitary => &self.u * x,
            Parity::Antiunitary => &self.u * x.map(|z| z.conj()),
        }
    }
}

impl Serialize for SymmetryOperator {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr {
            parity: Parity,
            u: MatrixFile,
        }
        Repr {
            parity: self.parity,
            u: MatrixFile::from_matrix(&self.u),
        }
        .serialize(serializer)
    }
}

impl DensityMap for SymmetryOperator {
    fn dim(&self) -> usize {
        self.u.nrows()
    }

    fn apply(&self, a: &DensityOperator) -> DensityOperator {
        apply_symmetry(self, a).expect("dimension checked by caller")
    }
}

fn unitarity_defect(u: &CMatrix) -> f64 {
    let n = u.nrows();
    (u.adjoint() * u - CMatrix::identity(n, n)).norm()
}

pub fn apply_symmetry(s: &SymmetryOperator, a: &DensityOperator) -> Result<DensityOperator> {
    ensure_same_dim(s.dim(), a.dim())?;
    let inner = match s.parity {
        Parity::Unitary => a.entries().clone(),
        Parity::Antiunitary => a.entries().map(|z| z.conj()),
    };
    DensityOperator::from_congruence(&(&s.u * inner * s.u.adjoint()))
}

/// `min_θ ‖U₁ − e^{iθ}U₂‖_F = (2d − 2|tr U₂*U₁|)^{1/2}` for equal parities,
/// `+∞` otherwise.
///
/// Evaluated as the norm at the minimizing phase `θ = arg tr U₂*U₁`; the
/// closed form would turn rounding of size ε into √ε.
pub fn symmetry_distance(s1: &SymmetryOperator, s2: &SymmetryOperator) -> Result<f64> {
    ensure_same_dim(s1.dim(), s2.dim())?;
    if s1.parity != s2.parity {
        return Ok(f64::INFINITY);
    }
    let overlap = (s2.u.adjoint() * &s1.u).trace();
    let phase = if overlap.norm() > 0.0 {
        overlap / overlap.norm()
    } else {
        ONE
    };
    Ok((&s1.u - &s2.u * phase).norm())
}

/// `φ̃(A) = (tr A)·φ(A / tr A)` and `φ̃(0) = 0`, extending a map defined on
/// unit-trace density operators to all of them.
pub struct NormalizedExtension<M> {
    inner: M,
}

pub fn extend_normalized<M: DensityMap>(oracle_norm: M) -> NormalizedExtension<M> {
    NormalizedExtension { inner: oracle_norm }
}

impl<M: DensityMap> DensityMap for NormalizedExtension<M> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn apply(&self, a: &DensityOperator) -> DensityOperator {
        let t = a.trace();
        if !(t > 0.0) {
            return DensityOperator::zero(a.dim());
        }
        let rho = a.scaled(1.0 / t).expect("positive finite scale");
        self.inner.apply(&rho).scaled(t).expect("positive finite scale")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ReconstructionStatus {
    Certified,
    FailedProjectionProbe,
    FailedPhase,
    FailedParity,
    FailedVerification,
}

#[derive(Debug, Clone, Serialize)]
pub struct ReconstructionReport {
    pub status: ReconstructionStatus,
    /// Present once all probe stages succeeded.
    pub symmetry: Option<SymmetryOperator>,
    /// Largest `‖φ(A) − S(A)‖_F / (1 + ‖A‖_F)` over the verification set.
    pub residual_max: f64,
    pub probes_used: usize,
    pub verification_trials: usize,
    /// `|o_U − o_A|` for the squared overlaps of the two parity hypotheses.
    pub parity_margin: f64,
    /// `d = 1`: both parities act identically, unitary is reported.
    pub parity_degenerate: bool,
    /// What went wrong, for failed statuses.
    pub detail: Option<String>,
}

impl ReconstructionReport {
    pub fn is_certified(&self) -> bool {
        self.status == ReconstructionStatus::Certified
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReconstructOptions {
    pub verification_trials: usize,
    pub seed: u64,
    pub probe_tol: f64,
    pub phase_fix_tol: f64,
    pub certify_tol: f64,
}

impl Default for ReconstructOptions {
    fn default() -> Self {
        Self {
            verification_trials: VERIFICATION_TRIALS,
            seed: 0,
            probe_tol: PROBE_TOL,
            phase_fix_tol: PHASE_FIX_TOL,
            certify_tol: CERTIFY_TOL,
        }
    }
}

struct Failure {
    status: ReconstructionStatus,
    detail: String,
}

fn fail(status: ReconstructionStatus, detail: impl Into<String>) -> Failure {
    Failure {
        status,
        detail: detail.into(),
    }
}

/// Counts oracle calls made during the probe stages.
struct Prober<'a, M: ?Sized> {
    oracle: &'a M,
    dim: usize,
    calls: usize,
}

impl<M: DensityMap + ?Sized> Prober<'_, M> {
    /// `φ(xx*)`, required to be a rank-one projection; returns it together
    /// with its phase-canonical unit vector.
    fn probe(&mut self, x: &PureState, label: &str) -> std::result::Result<(DensityOperator, PureState), Failure> {
        self.calls += 1;
        let image = self.oracle.apply(&x.projection());
        if image.dim() != self.dim {
            return Err(fail(
                ReconstructionStatus::FailedProjectionProbe,
                format!("{label}: image has dimension {} instead of {}", image.dim(), self.dim),
            ));
        }
        if !is_rank_one_projection(&image) {
            return Err(fail(
                ReconstructionStatus::FailedProjectionProbe,
                format!("{label}: image is not a rank-one projection (trace {})", image.trace()),
            ));
        }
        let spectrum = image.spectrum().map_err(|e| fail(ReconstructionStatus::FailedProjectionProbe, e.to_string()))?;
        let v = PureState::new(spectrum.eigenvector(0))
            .map_err(|e| fail(ReconstructionStatus::FailedProjectionProbe, e.to_string()))?;
        Ok((image, v))
    }
}

fn real(x: f64) -> Complex<f64> {
    Complex::new(x, 0.0)
}

fn superposition(dim: usize, j: usize, k: usize, coeff: Complex<f64>) -> PureState {
    let mut v = CVector::zeros(dim);
    v[j] = ONE;
    v[k] = coeff;
    PureState::new(v).expect("nonzero superposition")
}

/// `⟨w, Q w⟩`, the squared overlap of `w` with the projection `Q`.
fn overlap_with(q: &DensityOperator, w: &CVector) -> f64 {
    w.dotc(&(q.entries() * w)).re
}

struct Probed {
    u: CMatrix,
    parity: Parity,
    parity_margin: f64,
    parity_degenerate: bool,
}

fn probe_symmetry<M: DensityMap + ?Sized>(
    prober: &mut Prober<'_, M>,
    opts: &ReconstructOptions,
) -> std::result::Result<Probed, Failure> {
    let d = prober.dim;

    // images of the basis projections
    let mut images = Vec::with_capacity(d);
    let mut basis = Vec::with_capacity(d);
    for i in 0..d {
        let (q, f) = prober.probe(&PureState::basis(d, i), &format!("basis e{}", i + 1))?;
        images.push(q);
        basis.push(f);
    }
    for i in 0..d {
        for j in (i + 1)..d {
            let tp = trace_product(&images[i], &images[j]).unwrap_or(f64::NAN);
            if !(tp <= opts.probe_tol) {
                return Err(fail(
                    ReconstructionStatus::FailedProjectionProbe,
                    format!("images of e{} and e{} are not orthogonal (tr QQ' = {tp:e})", i + 1, j + 1),
                ));
            }
        }
    }

    // relative phases from (e1 + ej)/√2
    let mut columns: Vec<CVector> = Vec::with_capacity(d);
    columns.push(basis[0].amplitudes().clone());
    for (j, fj) in basis.iter().enumerate().skip(1) {
        let (_, y) = prober.probe(&superposition(d, 0, j, ONE), &format!("(e1+e{})/√2", j + 1))?;
        let g1 = &columns[0];
        let ov = y.amplitudes().dotc(g1);
        if (ov.norm() - std::f64::consts::FRAC_1_SQRT_2).abs() > opts.phase_fix_tol {
            return Err(fail(
                ReconstructionStatus::FailedPhase,
                format!("|⟨y{}, g1⟩| = {} instead of 1/√2", j + 1, ov.norm()),
            ));
        }
        let y = y.amplitudes() * (ov / ov.norm());
        let raw = y * real(std::f64::consts::SQRT_2) - g1;
        let fj = fj.amplitudes();
        let along = fj.dotc(&raw);
        if (raw.norm() - 1.0).abs() > opts.phase_fix_tol || (along.norm() - 1.0).abs() > opts.phase_fix_tol {
            return Err(fail(
                ReconstructionStatus::FailedPhase,
                format!("column {} inconsistent with its basis probe (|⟨g, f⟩| = {})", j + 1, along.norm()),
            ));
        }
        // the basis probe's eigenvector, carrying the phase fixed above
        columns.push(fj * (along / along.norm()));
    }

    // cross checks on (ej + ek)/√2 for j, k ≥ 2
    for j in 1..d {
        for k in (j + 1)..d {
            let (q, _) = prober.probe(&superposition(d, j, k, ONE), &format!("(e{}+e{})/√2", j + 1, k + 1))?;
            let w = (&columns[j] + &columns[k]) * real(std::f64::consts::FRAC_1_SQRT_2);
            let ov = overlap_with(&q, &w);
            if ov < 1.0 - opts.probe_tol {
                return Err(fail(
                    ReconstructionStatus::FailedPhase,
                    format!("cross check (e{}+e{})/√2 overlap {ov}", j + 1, k + 1),
                ));
            }
        }
    }

    // parity from (e1 + i e2)/√2
    let (parity, parity_margin, parity_degenerate) = if d == 1 {
        (Parity::Unitary, 0.0, true)
    } else {
        let i = Complex::new(0.0, 1.0);
        let (q, _) = prober.probe(&superposition(d, 0, 1, i), "(e1+ie2)/√2")?;
        let h_unitary = (&columns[0] + &columns[1] * i) * real(std::f64::consts::FRAC_1_SQRT_2);
        let h_anti = (&columns[0] - &columns[1] * i) * real(std::f64::consts::FRAC_1_SQRT_2);
        let ov_u = overlap_with(&q, &h_unitary);
        let ov_a = overlap_with(&q, &h_anti);
        let margin = (ov_u - ov_a).abs();
        let parity = if ov_u >= 1.0 - opts.probe_tol {
            Parity::Unitary
        } else if ov_a >= 1.0 - opts.probe_tol {
            Parity::Antiunitary
        } else {
            return Err(fail(
                ReconstructionStatus::FailedParity,
                format!("neither parity fits: overlaps {ov_u} (unitary) and {ov_a} (antiunitary)"),
            ));
        };
        (parity, margin, false)
    };

    let mut u = CMatrix::from_element(d, d, ZERO);
    for (j, col) in columns.iter().enumerate() {
        u.set_column(j, col);
    }
    Ok(Probed {
        u,
        parity,
        parity_margin,
        parity_degenerate,
    })
}

/// Runs the probe schedule against `oracle` and certifies the result on
/// `opts.verification_trials` random density operators.
pub fn reconstruct<M: DensityMap + ?Sized>(oracle: &M, opts: &ReconstructOptions) -> ReconstructionReport {
    let d = oracle.dim();
    let mut report = ReconstructionReport {
        status: ReconstructionStatus::FailedProjectionProbe,
        symmetry: None,
        residual_max: f64::NAN,
        probes_used: 0,
        verification_trials: 0,
        parity_margin: 0.0,
        parity_degenerate: false,
        detail: None,
    };
    if d == 0 {
        report.detail = Some("oracle has dimension 0".into());
        return report;
    }

    let mut prober = Prober {
        oracle,
        dim: d,
        calls: 0,
    };
    let probed = probe_symmetry(&mut prober, opts);
    report.probes_used = prober.calls;
    let probed = match probed {
        Ok(p) => p,
        Err(f) => {
            report.status = f.status;
            report.detail = Some(f.detail);
            return report;
        }
    };
    report.parity_margin = probed.parity_margin;
    report.parity_degenerate = probed.parity_degenerate;

    let symmetry = match SymmetryOperator::new(probed.parity, probed.u) {
        Ok(s) => s,
        Err(e) => {
            report.status = ReconstructionStatus::FailedPhase;
            report.detail = Some(format!("assembled operator: {e}"));
            return report;
        }
    };

    let mut residual_max: f64 = 0.0;
    for trial in 0..opts.verification_trials {
        let mut rng = random::rng(opts.seed, trial as u64);
        let a = random::random_mixed_rank_density(&mut rng, d);
        let image = oracle.apply(&a);
        let residual = if image.dim() != d {
            f64::INFINITY
        } else {
            let expect = apply_symmetry(&symmetry, &a).expect("same dimension");
            (image.entries() - expect.entries()).norm() / (1.0 + a.matrix().frobenius_norm())
        };
        // NaN-propagating max
        if !(residual <= residual_max) {
            residual_max = residual;
        }
    }
    report.residual_max = residual_max;
    report.verification_trials = opts.verification_trials;
    report.symmetry = Some(symmetry);
    if residual_max <= opts.certify_tol {
        report.status = ReconstructionStatus::Certified;
    } else {
        report.status = ReconstructionStatus::FailedVerification;
        report.detail = Some(format!("verification residual {residual_max:e} exceeds {:e}", opts.certify_tol));
    }
    report
}
