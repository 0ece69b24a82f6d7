//! Scalar abstractions shared by the matrix and operator code.
//!
//! Combinatorial matrices (`X_n`, `G_n`, signed adjacency) live over `i64`
//! so their identities can be checked exactly; operators that involve
//! `1/sqrt(n)` live over a [`Field`] (`f32`, `f64` or their complex
//! counterparts).

use std::fmt::Debug;
use std::ops::Neg;

use num_complex::Complex;
use num_traits::Num;

/// Ring element usable as a dense-matrix entry.
pub trait Scalar: Num + Copy + Debug + Send + Sync + 'static {
    /// Absolute value (modulus for complex numbers) as `f64`.
    fn modulus(self) -> f64;
}

/// Scalars that admit real scaling and conjugation.
pub trait Field: Scalar + Neg<Output = Self> {
    fn from_f64(x: f64) -> Self;
    fn conj(self) -> Self;
}

impl Scalar for i64 {
    fn modulus(self) -> f64 {
        self.unsigned_abs() as f64
    }
}

impl Scalar for i32 {
    fn modulus(self) -> f64 {
        self.unsigned_abs() as f64
    }
}

impl Scalar for f32 {
    fn modulus(self) -> f64 {
        f64::from(self.abs())
    }
}

impl Scalar for f64 {
    fn modulus(self) -> f64 {
        self.abs()
    }
}

impl Scalar for Complex<f32> {
    fn modulus(self) -> f64 {
        f64::from(self.norm())
    }
}

impl Scalar for Complex<f64> {
    fn modulus(self) -> f64 {
        self.norm()
    }
}

impl Field for f32 {
    fn from_f64(x: f64) -> Self {
        x as f32
    }
    fn conj(self) -> Self {
        self
    }
}

impl Field for f64 {
    fn from_f64(x: f64) -> Self {
        x
    }
    fn conj(self) -> Self {
        self
    }
}

impl Field for Complex<f32> {
    fn from_f64(x: f64) -> Self {
        Complex::new(x as f32, 0.0)
    }
    fn conj(self) -> Self {
        Complex::conj(&self)
    }
}

impl Field for Complex<f64> {
    fn from_f64(x: f64) -> Self {
        Complex::new(x, 0.0)
    }
    fn conj(self) -> Self {
        Complex::conj(&self)
    }
}
