//! Combinatorial Fredholm modules and spectral triples on self-similar sets
//! built on n-cubes.
//!
//! The crate is organised bottom-up:
//!
//! - [`cube`]: vertex numbering, oriented edges and the `X_n`, `G_n`,
//!   `U_n`, `F_n` matrices of the unit n-cube.
//! - [`calculus`]: quantized differentials `[F_n, f]`, coordinate one-forms
//!   and their Clifford relations.
//! - [`ifs`]: iterated function systems on `[0,1]^n`, word enumeration,
//!   similarity dimension, level-one components and the preset catalog.
//! - [`spectral`]: zeta functions, Dixmier traces, quantized volumes and
//!   self-similar quadrature.
//! - [`index`]: integer index pairings with projections.
//!
//! Matrix code is generic over the entry type; the aliases below fix the
//! instantiations used throughout.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod calculus;
pub mod cube;
pub mod error;
pub mod ifs;
pub mod index;
pub mod matrix;
pub mod scalar;
pub mod spectral;

pub use error::{Error, Result};
pub use matrix::DenseMatrix;
pub use num_complex::Complex64;
pub use scalar::{Field, Scalar};

/// Exact integer matrices (`X_n`, `G_n`, signed adjacency).
pub type IntMatrix = DenseMatrix<i64>;
/// Real operator matrices.
pub type RealMatrix = DenseMatrix<f64>;
/// Complex operator matrices (commutators with complex functions).
pub type ComplexMatrix = DenseMatrix<Complex64>;

/// Default cap on the number of placed cubes a single computation may visit.
pub const DEFAULT_WORD_BUDGET: u64 = 10_000_000;
