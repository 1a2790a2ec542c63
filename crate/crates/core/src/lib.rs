//! Uhlmann fidelity on finite-dimensional density operators, and
//! reconstruction of the unitary or antiunitary operator behind a
//! fidelity-preserving map.
//!
//! Modules, bottom up:
//!
//! - [`matcore`]: Hermitian matrices, density operators, spectra, pure states.
//! - [`fidelity`]: fidelity, partial fidelity, order and orthogonality.
//! - [`charact`]: rank-one and projection characterizations.
//! - [`wigner`]: probing a black-box map and reconstructing its symmetry.
//! - [`mapzoo`]: preserving and non-preserving example maps, the classifier
//!   and the end-to-end theorem harness.
//! - [`io`]: JSON matrix and map-spec files.

// `!(x <= tol)` is used on purpose: it also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod charact;
pub mod error;
pub mod fidelity;
pub mod io;
pub mod mapzoo;
pub mod matcore;
pub mod random;
pub mod tol;
pub mod wigner;

pub use error::{Error, Result};
pub use matcore::{CMatrix, CVector, ComplexScalar, DensityOperator, HermitianMatrix, PureState, Spectrum};
