//! Quantized differentials on a single cube.
//!
//! For a function `f` on the vertices, `d_n f = [F_n, ρ(f)]` where `ρ(f)` is
//! the diagonal multiplication operator in `(V_0, V_1)` block order. Two
//! independent routes are provided: the literal commutator and the
//! entrywise formula `Δ_n f ∘ G_n / sqrt(n)` built from vertex differences.
//! The coordinate one-forms `e^α = (sqrt(n)/e) d_n x^α` also have a closed
//! Kronecker form, and they satisfy the Clifford relations
//! `e^α e^β + e^β e^α = -2 δ_{αβ} I`.

use crate::cube::{self, block_order, vertex_table};
use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;
use crate::scalar::Field;
use crate::RealMatrix;

/// Dimension cap for the Clifford and volume-element diagnostics.
pub const MAX_CHECK_DIM: usize = 10;

/// Tolerance for deciding that `AᵀA` is a multiple of the identity.
pub const SCALAR_ABS_TOL: f64 = 1e-10;

/// A function on the `2^n` numbered vertices of a cube.
#[derive(Clone, Debug, PartialEq)]
pub struct VertexFunction<T> {
    values: Vec<T>,
}

impl<T: Field> VertexFunction<T> {
    pub fn new(values: Vec<T>) -> Self {
        Self { values }
    }

    pub fn constant(n: usize, value: T) -> Self {
        Self::new(vec![value; 1 << n])
    }

    /// Values of the coordinate `x^axis` (1-based) on `[0, e]^n`.
    pub fn coordinate(n: usize, axis: usize, e: f64) -> Result<Self> {
        check_axis(n, axis)?;
        let table = vertex_table(n, e)?;
        Ok(Self::new(
            table
                .coordinate_values(axis)
                .into_iter()
                .map(T::from_f64)
                .collect(),
        ))
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `ρ(f)`: diagonal operator in `(V_0, V_1)` order.
    pub fn multiplication_operator(&self, n: usize) -> Result<DenseMatrix<T>> {
        self.check_len(n)?;
        let diag: Vec<T> = block_order(n).into_iter().map(|i| self.values[i]).collect();
        Ok(DenseMatrix::diagonal(&diag))
    }

    fn check_len(&self, n: usize) -> Result<()> {
        let expected = 1usize << n;
        if self.values.len() != expected {
            return Err(Error::SizeMismatch {
                expected,
                actual: self.values.len(),
            });
        }
        Ok(())
    }
}

fn check_axis(n: usize, axis: usize) -> Result<()> {
    if axis == 0 || axis > n {
        return Err(Error::InvalidArgument(format!(
            "axis {axis} out of range 1..={n}"
        )));
    }
    Ok(())
}

/// `[F_n, ρ(f)]` by matrix multiplication.
pub fn commutator_direct<T: Field>(n: usize, f: &VertexFunction<T>) -> Result<DenseMatrix<T>> {
    let rho = f.multiplication_operator(n)?;
    let fm = cube::f_matrix::<T>(n)?;
    Ok(fm.commutator(&rho))
}

/// `[F_n, ρ(f)]` from vertex differences: lower block
/// `(Δ_n f ∘ G_n)/sqrt(n)` with `(Δ_n f)_{ij} = f(v_{2j}) - f(v_{2i+1})`,
/// upper block minus its transpose.
pub fn commutator_hadamard<T: Field>(n: usize, f: &VertexFunction<T>) -> Result<DenseMatrix<T>> {
    f.check_len(n)?;
    let g = cube::g_matrix(n)?.cast::<T>();
    let h = g.dim();
    let v = f.values();
    let delta = DenseMatrix::from_fn(h, |i, j| v[2 * j] - v[2 * i + 1]);
    let lower = delta.hadamard(&g).scale_real(1.0 / (n as f64).sqrt());
    let upper = -&lower.transpose();
    Ok(DenseMatrix::odd(&upper, &lower))
}

/// Closed Kronecker form of `e^α_(n)`: off-diagonal blocks
/// `±(I_{2^{n-α-1}} ⊗ diag(1,-1) ⊗ X_α)`, with the prefix dropped when `α = n`.
pub fn coordinate_form<T: Field>(n: usize, axis: usize) -> Result<DenseMatrix<T>> {
    check_axis(n, axis)?;
    let x = cube::x_matrix(axis)?;
    let block = if axis == n {
        x
    } else {
        let sign = DenseMatrix::from_rows(vec![vec![1i64, 0], vec![0, -1]])?;
        DenseMatrix::identity(1 << (n - axis - 1)).kron(&sign).kron(&x)
    };
    let block = block.cast::<T>();
    Ok(DenseMatrix::odd(&block, &-&block))
}

#[derive(Clone, Debug, PartialEq)]
pub struct CliffordReport {
    pub n: usize,
    /// `max_{α,β} ‖e^α e^β + e^β e^α + 2 δ_{αβ} I‖_∞`.
    pub max_residual: f64,
}

pub fn clifford_check(n: usize) -> Result<CliffordReport> {
    if n > MAX_CHECK_DIM {
        return Err(Error::Capacity {
            n,
            max: MAX_CHECK_DIM,
        });
    }
    let forms = (1..=n)
        .map(|a| coordinate_form::<f64>(n, a))
        .collect::<Result<Vec<_>>>()?;
    let dim = 1usize << n;
    let mut max_residual = 0.0f64;
    for (a, ea) in forms.iter().enumerate() {
        for (b, eb) in forms.iter().enumerate().skip(a) {
            let mut anti = ea.anticommutator(eb);
            if a == b {
                anti = &anti + &DenseMatrix::scalar(dim, 2.0);
            }
            max_residual = max_residual.max(anti.max_abs());
        }
    }
    Ok(CliffordReport { n, max_residual })
}

/// `|A| = (AᵀA)^{1/2}`. When `AᵀA` is a multiple of the identity the
/// square root is taken directly; otherwise a symmetric eigendecomposition
/// is used.
pub fn matrix_abs(a: &RealMatrix) -> RealMatrix {
    let gram = &a.transpose() * a;
    if let Some(c) = scalar_multiple(&gram) {
        return RealMatrix::scalar(gram.dim(), c.max(0.0).sqrt());
    }
    let eig = gram.to_nalgebra().symmetric_eigen();
    let roots = eig.eigenvalues.map(|x| x.max(0.0).sqrt());
    let v = &eig.eigenvectors;
    let m = v * nalgebra::DMatrix::from_diagonal(&roots) * v.transpose();
    RealMatrix::from_nalgebra(&m)
}

/// Returns `c` if `m = c I` up to [`SCALAR_ABS_TOL`] relative to `|c|`.
pub fn scalar_multiple(m: &RealMatrix) -> Option<f64> {
    let dim = m.dim();
    if dim == 0 {
        return None;
    }
    let c = (0..dim).map(|i| m.get(i, i)).sum::<f64>() / dim as f64;
    let scale = c.abs().max(f64::MIN_POSITIVE);
    let dev = m.max_abs_diff(&RealMatrix::scalar(dim, c));
    (dev <= SCALAR_ABS_TOL * scale).then_some(c)
}

/// `|[F_n, x^1] ⋯ [F_n, x^n]|` on `[0, e]^n`.
pub fn volume_element_abs(n: usize, e: f64) -> Result<RealMatrix> {
    if n > MAX_CHECK_DIM {
        return Err(Error::Capacity {
            n,
            max: MAX_CHECK_DIM,
        });
    }
    let mut product = RealMatrix::identity(1 << n);
    for axis in 1..=n {
        let f = VertexFunction::<f64>::coordinate(n, axis, e)?;
        product = &product * &commutator_direct(n, &f)?;
    }
    Ok(matrix_abs(&product))
}

/// Affine placement `x ↦ edge · T x + b` of the unit cube.
#[derive(Clone, Debug, PartialEq)]
pub struct CubePlacement {
    pub n: usize,
    pub edge: f64,
    pub orth: RealMatrix,
    pub translation: Vec<f64>,
}

pub const ORTHOGONALITY_TOL: f64 = 1e-9;

/// `max |MᵀM - I|`.
pub fn orthogonality_residual(m: &RealMatrix) -> f64 {
    (&m.transpose() * m).max_abs_diff(&RealMatrix::identity(m.dim()))
}

impl CubePlacement {
    pub fn new(edge: f64, orth: RealMatrix, translation: Vec<f64>) -> Result<Self> {
        let n = orth.dim();
        if n == 0 {
            return Err(Error::InvalidArgument("placement dimension must be >= 1".into()));
        }
        if !(edge > 0.0) {
            return Err(Error::InvalidArgument("edge length must be positive".into()));
        }
        if translation.len() != n {
            return Err(Error::SizeMismatch {
                expected: n,
                actual: translation.len(),
            });
        }
        let residual = orthogonality_residual(&orth);
        if residual > ORTHOGONALITY_TOL {
            return Err(Error::NotOrthogonal { residual });
        }
        Ok(Self {
            n,
            edge,
            orth,
            translation,
        })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            n,
            edge: 1.0,
            orth: RealMatrix::identity(n),
            translation: vec![0.0; n],
        }
    }

    /// Image of a point of the unit cube.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        (0..self.n)
            .map(|i| {
                let tx: f64 = (0..self.n).map(|j| self.orth.get(i, j) * x[j]).sum();
                self.edge * tx + self.translation[i]
            })
            .collect()
    }

    /// Images of the numbered unit-cube vertices, numbering preserved.
    pub fn vertices(&self) -> Vec<Vec<f64>> {
        (0..1usize << self.n)
            .map(|i| {
                let unit: Vec<f64> = cube::vertex_bits(self.n, i)
                    .into_iter()
                    .map(f64::from)
                    .collect();
                self.apply(&unit)
            })
            .collect()
    }

    pub fn center(&self) -> Vec<f64> {
        self.apply(&vec![0.5; self.n])
    }

    /// Values of `f` at the placed vertices.
    pub fn sample<T: Field>(&self, f: impl Fn(&[f64]) -> T) -> VertexFunction<T> {
        VertexFunction::new(self.vertices().iter().map(|v| f(v)).collect())
    }
}

/// Block of `[F_K, x^α]` on a placed cube:
/// `(edge/sqrt(n)) Σ_j T[α][j] e^j_(n)`.
pub fn placed_coordinate_form(placement: &CubePlacement, axis: usize) -> Result<RealMatrix> {
    let n = placement.n;
    check_axis(n, axis)?;
    let residual = orthogonality_residual(&placement.orth);
    if residual > ORTHOGONALITY_TOL {
        return Err(Error::NotOrthogonal { residual });
    }
    let mut acc = RealMatrix::zeros(1 << n);
    for j in 1..=n {
        let t = placement.orth.get(axis - 1, j - 1);
        if t != 0.0 {
            acc = &acc + &coordinate_form::<f64>(n, j)?.scale(t);
        }
    }
    Ok(acc.scale(placement.edge / (n as f64).sqrt()))
}

/// `[F, ρ(f)]` for `F = [[0, U^*], [U, 0]]` with an arbitrary unitary `U`.
pub fn custom_unitary_form<T: Field>(
    u: &DenseMatrix<T>,
    f: &VertexFunction<T>,
) -> Result<DenseMatrix<T>> {
    let h = u.dim();
    if h == 0 || !h.is_power_of_two() {
        return Err(Error::InvalidArgument(
            "unitary block size must be a power of two".into(),
        ));
    }
    let n = h.trailing_zeros() as usize + 1;
    let residual = (u * &u.conj_transpose()).max_abs_diff(&DenseMatrix::identity(h));
    if residual > 1e-9 {
        return Err(Error::NotUnitary { residual });
    }
    let rho = f.multiplication_operator(n)?;
    let fm = DenseMatrix::odd(&u.conj_transpose(), u);
    Ok(fm.commutator(&rho))
}

/// Gram–Schmidt orthonormalisation of the columns of `m`.
pub fn orthonormalize(m: &RealMatrix) -> RealMatrix {
    let n = m.dim();
    let mut cols: Vec<Vec<f64>> = Vec::with_capacity(n);
    for j in 0..n {
        let mut v: Vec<f64> = (0..n).map(|i| m.get(i, j)).collect();
        // two passes keep the result orthogonal to machine precision
        for _ in 0..2 {
            for q in &cols {
                let dot: f64 = v.iter().zip(q).map(|(a, b)| a * b).sum();
                for (x, y) in v.iter_mut().zip(q) {
                    *x -= dot * y;
                }
            }
        }
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        for x in &mut v {
            *x /= norm;
        }
        cols.push(v);
    }
    RealMatrix::from_fn(n, |i, j| cols[j][i])
}
