//! Square dense matrices over a generic [`Scalar`], stored row-major.

use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::scalar::{Field, Scalar};

#[derive(Clone, Debug, PartialEq)]
pub struct DenseMatrix<T> {
    dim: usize,
    data: Vec<T>,
}

impl<T: Scalar> DenseMatrix<T> {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![T::zero(); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_fn(dim, |i, j| if i == j { T::one() } else { T::zero() })
    }

    /// Scalar multiple of the identity.
    pub fn scalar(dim: usize, value: T) -> Self {
        Self::from_fn(dim, |i, j| if i == j { value } else { T::zero() })
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        Self { dim, data }
    }

    pub fn diagonal(values: &[T]) -> Self {
        Self::from_fn(values.len(), |i, j| if i == j { values[i] } else { T::zero() })
    }

    /// Builds a matrix from row vectors; every row must have length equal to the row count.
    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::SizeMismatch {
                    expected: dim,
                    actual: row.len(),
                });
            }
            data.extend(row);
        }
        Ok(Self { dim, data })
    }

    /// Row-major data of length `dim * dim`.
    pub fn from_row_major(dim: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != dim * dim {
            return Err(Error::SizeMismatch {
                expected: dim * dim,
                actual: data.len(),
            });
        }
        Ok(Self { dim, data })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        self.data[i * self.dim + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: T) {
        self.data[i * self.dim + j] = value;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.dim).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(T) -> U) -> DenseMatrix<U> {
        DenseMatrix {
            dim: self.dim,
            data: self.data.iter().map(|&x| f(x)).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self.get(j, i))
    }

    pub fn scale(&self, factor: T) -> Self {
        self.map(|x| x * factor)
    }

    /// Entrywise (Hadamard) product.
    pub fn hadamard(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "hadamard: dimension mismatch");
        DenseMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| a * b)
                .collect(),
        }
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Self) -> Self {
        let m = other.dim;
        Self::from_fn(self.dim * m, |i, j| {
            self.get(i / m, j / m) * other.get(i % m, j % m)
        })
    }

    /// Assembles `[[a, b], [c, d]]` from four equally sized blocks.
    pub fn block2(a: &Self, b: &Self, c: &Self, d: &Self) -> Self {
        let h = a.dim;
        assert!(
            b.dim == h && c.dim == h && d.dim == h,
            "block2: blocks must share a dimension"
        );
        Self::from_fn(2 * h, |i, j| match (i < h, j < h) {
            (true, true) => a.get(i, j),
            (true, false) => b.get(i, j - h),
            (false, true) => c.get(i - h, j),
            (false, false) => d.get(i - h, j - h),
        })
    }

    /// Off-diagonal block matrix `[[0, upper], [lower, 0]]`.
    pub fn odd(upper: &Self, lower: &Self) -> Self {
        let z = Self::zeros(upper.dim);
        Self::block2(&z, upper, lower, &z)
    }

    /// Sub-block of size `size` starting at `(row, col)`.
    pub fn sub_block(&self, row: usize, col: usize, size: usize) -> Self {
        Self::from_fn(size, |i, j| self.get(row + i, col + j))
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "matmul: dimension mismatch");
        let n = self.dim;
        let mut out = vec![T::zero(); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == T::zero() {
                    continue;
                }
                let row = &other.data[k * n..(k + 1) * n];
                let dst = &mut out[i * n..(i + 1) * n];
                for (d, &b) in dst.iter_mut().zip(row) {
                    *d = *d + a * b;
                }
            }
        }
        DenseMatrix { dim: n, data: out }
    }

    pub fn commutator(&self, other: &Self) -> Self {
        &self.matmul(other) - &other.matmul(self)
    }

    pub fn anticommutator(&self, other: &Self) -> Self {
        &self.matmul(other) + &other.matmul(self)
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|x| x.modulus()).fold(0.0, f64::max)
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim, "max_abs_diff: dimension mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| (a - b).modulus())
            .fold(0.0, f64::max)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == T::zero())
    }
}

impl<T: Field> DenseMatrix<T> {
    pub fn conj_transpose(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self.get(j, i).conj())
    }

    pub fn scale_real(&self, factor: f64) -> Self {
        self.scale(T::from_f64(factor))
    }
}

impl DenseMatrix<i64> {
    /// Lossless embedding of an integer matrix into any field.
    pub fn cast<T: Field>(&self) -> DenseMatrix<T> {
        self.map(|x| T::from_f64(x as f64))
    }
}

impl DenseMatrix<f64> {
    pub fn to_complex(&self) -> DenseMatrix<num_complex::Complex64> {
        self.map(|x| num_complex::Complex64::new(x, 0.0))
    }

    pub(crate) fn to_nalgebra(&self) -> nalgebra::DMatrix<f64> {
        nalgebra::DMatrix::from_row_slice(self.dim, self.dim, &self.data)
    }

    pub(crate) fn from_nalgebra(m: &nalgebra::DMatrix<f64>) -> Self {
        Self::from_fn(m.nrows(), |i, j| m[(i, j)])
    }
}

impl<T: Scalar> Add for &DenseMatrix<T> {
    type Output = DenseMatrix<T>;
    fn add(self, rhs: Self) -> DenseMatrix<T> {
        assert_eq!(self.dim, rhs.dim, "add: dimension mismatch");
        DenseMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(&a, &b)| a + b).collect(),
        }
    }
}

impl<T: Scalar> Sub for &DenseMatrix<T> {
    type Output = DenseMatrix<T>;
    fn sub(self, rhs: Self) -> DenseMatrix<T> {
        assert_eq!(self.dim, rhs.dim, "sub: dimension mismatch");
        DenseMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(&a, &b)| a - b).collect(),
        }
    }
}

impl<T: Scalar> Mul for &DenseMatrix<T> {
    type Output = DenseMatrix<T>;
    fn mul(self, rhs: Self) -> DenseMatrix<T> {
        self.matmul(rhs)
    }
}

impl<T: Scalar + Neg<Output = T>> Neg for &DenseMatrix<T> {
    type Output = DenseMatrix<T>;
    fn neg(self) -> DenseMatrix<T> {
        self.map(|x| -x)
    }
}
