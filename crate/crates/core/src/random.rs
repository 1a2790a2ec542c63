//! Seeded random ensembles: Gaussian matrices, Wishart-style density
//! operators, Haar-random pure states and unitaries.
//!
//! Every generator takes the RNG explicitly. [`rng`] builds a ChaCha stream
//! from `(seed, stream)` so independent trials can be derived from one seed
//! without sharing state.

use nalgebra::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::matcore::{CMatrix, CVector, ComplexScalar, DensityOperator, HermitianMatrix, PureState};

pub fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

/// Standard complex normal: real and imaginary parts i.i.d. N(0, 1/2).
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> ComplexScalar {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn gaussian_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> CMatrix {
    // column-major fill order keeps the stream layout independent of nalgebra internals
    let mut m = CMatrix::zeros(rows, cols);
    for j in 0..cols {
        for i in 0..rows {
            m[(i, j)] = complex_gaussian(rng);
        }
    }
    m
}

pub fn random_pure_state<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> PureState {
    loop {
        let v: CVector = gaussian_matrix(rng, dim, 1).column(0).into_owned();
        if let Ok(x) = PureState::new(v) {
            return x;
        }
    }
}

/// A pair of orthogonal pure states, the second obtained by projecting a
/// Gaussian vector off the first.
pub fn orthogonal_pure_pair<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> (PureState, PureState) {
    assert!(dim >= 2, "orthogonal pair needs dim >= 2");
    let x = random_pure_state(rng, dim);
    loop {
        let g: CVector = gaussian_matrix(rng, dim, 1).column(0).into_owned();
        let overlap = x.amplitudes().dotc(&g);
        let y = &g - x.amplitudes() * overlap;
        if y.norm() > 1e-6 {
            if let Ok(y) = PureState::new(y) {
                return (x, y);
            }
        }
    }
}

/// Trace drawn uniformly from `(0, 2]`.
pub fn random_trace<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    2.0 * (1.0 - rng.random::<f64>())
}

/// `GG*` with `G` a `dim × rank` complex Gaussian matrix, scaled to `trace`.
pub fn random_density<R: Rng + ?Sized>(rng: &mut R, dim: usize, rank: usize, trace: f64) -> DensityOperator {
    let g = gaussian_matrix(rng, dim, rank);
    let w = &g * g.adjoint();
    let t: f64 = (0..dim).map(|i| w[(i, i)].re).sum();
    let scaled = w * Complex::new(trace / t, 0.0);
    DensityOperator::from_congruence(&scaled).expect("finite Gaussian sample")
}

/// Full-rank Wishart density operator with a random trace in `(0, 2]`.
pub fn random_mixed_density<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> DensityOperator {
    let trace = random_trace(rng);
    random_density(rng, dim, dim, trace)
}

/// Density operator of uniformly random rank in `1..=dim` and random trace.
pub fn random_mixed_rank_density<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> DensityOperator {
    let rank = rng.random_range(1..=dim);
    let trace = random_trace(rng);
    random_density(rng, dim, rank, trace)
}

/// Haar-distributed unitary from the QR decomposition of a Ginibre matrix,
/// with the diagonal of `R` made real positive.
pub fn haar_unitary<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> CMatrix {
    let qr = gaussian_matrix(rng, dim, dim).qr();
    let (mut q, r) = (qr.q(), qr.r());
    for j in 0..dim {
        let d = r[(j, j)];
        let n = d.norm();
        if n > 0.0 {
            let phase = d / n;
            q.column_mut(j).scale_mut_complex(phase);
        }
    }
    q
}

/// A random Hermitian (not necessarily PSD) matrix.
pub fn random_hermitian<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> HermitianMatrix {
    HermitianMatrix::hermitian_part(&gaussian_matrix(rng, dim, dim)).expect("finite Gaussian sample")
}

trait ScaleComplex {
    fn scale_mut_complex(&mut self, c: ComplexScalar);
}

impl<S: nalgebra::StorageMut<ComplexScalar, nalgebra::Dyn, nalgebra::U1>> ScaleComplex
    for nalgebra::Matrix<ComplexScalar, nalgebra::Dyn, nalgebra::U1, S>
{
    fn scale_mut_complex(&mut self, c: ComplexScalar) {
        for z in self.iter_mut() {
            *z *= c;
        }
    }
}
