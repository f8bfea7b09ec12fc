//! Finite free probability toolkit.
//!
//! The crate implements the degree-`d` finite free additive convolution and its
//! rectangular counterpart, the differential operators that generate them,
//! finite free cumulants and truncated R-transforms, Appell / Jensen and
//! Laguerre–Appell polynomial families built from Laguerre–Pólya data, a
//! multiprecision simultaneous root solver, empirical root measures with
//! closed-form reference laws, and Monte Carlo oracles for the random-matrix
//! definitions of the convolutions.
//!
//! Two scalar fields are supported throughout: exact big rationals (every
//! algebraic identity in the crate holds bit-exactly there) and an
//! arbitrary-precision binary float with explicit precision tracking.
//!
//! Values are immutable after construction and every operation is a pure
//! function, so concurrent evaluation over shared or distinct inputs is
//! safe; the one internal cache (partition-lattice weights) is guarded by
//! a mutex with a single-writer initialization contract.
//!
//! Entry points:
//! - [`poly::MonicPoly`] and the operators in [`poly`],
//! - [`convolve`] for `boxplus` / `rect_boxplus` and their operator forms,
//! - [`cumulants`] for moments, cumulants, operator symbols and R-transforms,
//! - [`appell`] for polynomial families from Laguerre–Pólya data,
//! - [`roots`] / [`measures`] for root extraction and weak-convergence gauges,
//! - [`matrix`] for the Monte Carlo matrix oracles,
//! - [`scenarios`] for the reproducible experiment runner behind the
//!   `finfree` binary.

pub mod appell;
pub mod bigfloat;
pub mod convolve;
pub mod corpus;
pub mod cumulants;
pub mod matrix;
pub mod measures;
pub mod partitions;
pub mod poly;
pub mod roots;
pub mod scalar;
pub mod scenarios;
pub mod series;

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("unsupported operation: {0}")]
    Unsupported(String),
    #[error("root solver failed to converge (unsettled roots: {unsettled}, precision {precision_bits} bits, {iterations} iterations)")]
    NonConvergence {
        unsettled: usize,
        precision_bits: u32,
        iterations: u32,
    },
    #[error("complex roots found: {count} (max |Im| = {max_im:.3e})")]
    ComplexRoots { count: usize, max_im: f64 },
    #[error("serialization: {0}")]
    Json(#[from] serde_json::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
