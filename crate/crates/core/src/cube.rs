//! Combinatorics of the unit n-cube: recursive vertex numbering, parity
//! split, oriented edges and the `X_n`, `G_n`, `U_n`, `F_n` matrices.
//!
//! Vertex numbering is recursive: the first `2^(n-1)` vertices are the
//! `(n-1)`-cube embedded at `x^n = 0`, and vertex `2^n - 1 - i` is vertex `i`
//! lifted to `x^n = e`. Even-indexed vertices form `V_0`, odd ones `V_1`.
//! Every operator matrix is laid out with the `V_0` block first.

use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;
use crate::scalar::{Field, Scalar};

/// Largest dimension for which dense `2^n x 2^n` matrices are built.
pub const MAX_DENSE_DIM: usize = 12;

fn check_dim(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidArgument("cube dimension must be >= 1".into()));
    }
    if n > MAX_DENSE_DIM {
        return Err(Error::Capacity {
            n,
            max: MAX_DENSE_DIM,
        });
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(index: usize) -> Self {
        if index.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

/// Coordinates of vertex `index` of the unit n-cube, each 0 or 1.
pub fn vertex_bits(n: usize, index: usize) -> Vec<u8> {
    debug_assert!(index < (1usize << n));
    let mut bits = vec![0u8; n];
    let mut idx = index;
    for level in (1..=n).rev() {
        let size = 1usize << level;
        if idx >= size / 2 {
            bits[level - 1] = 1;
            idx = size - 1 - idx;
        }
    }
    bits
}

/// Inverse of [`vertex_bits`].
pub fn vertex_index(bits: &[u8]) -> usize {
    let mut idx = 0usize;
    for (k, &b) in bits.iter().enumerate() {
        if b != 0 {
            idx = (1usize << (k + 1)) - 1 - idx;
        }
    }
    idx
}

/// Vertex indices in operator order: `V_0` (even) then `V_1` (odd).
pub fn block_order(n: usize) -> Vec<usize> {
    let size = 1usize << n;
    (0..size).step_by(2).chain((1..size).step_by(2)).collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct CubeVertexTable<T = f64> {
    n: usize,
    edge_length: T,
    vertices: Vec<Vec<T>>,
}

impl<T: Scalar> CubeVertexTable<T> {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_length(&self) -> T {
        self.edge_length
    }

    pub fn vertices(&self) -> &[Vec<T>] {
        &self.vertices
    }

    pub fn vertex(&self, i: usize) -> &[T] {
        &self.vertices[i]
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn parity(&self, i: usize) -> Parity {
        Parity::of(i)
    }

    pub fn even_indices(&self) -> impl Iterator<Item = usize> {
        (0..self.vertices.len()).step_by(2)
    }

    pub fn odd_indices(&self) -> impl Iterator<Item = usize> {
        (1..self.vertices.len()).step_by(2)
    }

    /// Values of the coordinate function `x^axis` (1-based) at every vertex.
    pub fn coordinate_values(&self, axis: usize) -> Vec<T> {
        self.vertices.iter().map(|v| v[axis - 1]).collect()
    }
}

/// Builds the numbered vertex table of `[0, e]^n`.
pub fn vertex_table<T: Scalar + PartialOrd>(n: usize, e: T) -> Result<CubeVertexTable<T>> {
    if n == 0 {
        return Err(Error::InvalidArgument("cube dimension must be >= 1".into()));
    }
    if e <= T::zero() {
        return Err(Error::InvalidArgument("edge length must be positive".into()));
    }
    if n > usize::BITS as usize - 2 {
        return Err(Error::Capacity {
            n,
            max: usize::BITS as usize - 2,
        });
    }
    let vertices = (0..1usize << n)
        .map(|i| {
            vertex_bits(n, i)
                .into_iter()
                .map(|b| if b == 1 { e } else { T::zero() })
                .collect()
        })
        .collect();
    Ok(CubeVertexTable {
        n,
        edge_length: e,
        vertices,
    })
}

/// Directed edges `(from, to)` of the oriented n-cube graph, generated by
/// the recursive orientation rules: the lower copy keeps its orientation,
/// vertical edges point upward, and the upper copy is reversed.
pub fn directed_edges(n: usize) -> Vec<(usize, usize)> {
    assert!(n >= 1);
    let mut edges = vec![(0usize, 1usize)];
    for level in 2..=n {
        let size = 1usize << level;
        let half = size / 2;
        let mut next = Vec::with_capacity(level * half);
        for &(i, j) in &edges {
            next.push((i, j));
            next.push((size - 1 - j, size - 1 - i));
        }
        for i in 0..half {
            next.push((i, size - 1 - i));
        }
        edges = next;
    }
    edges
}

/// Edge orientation between odd vertices (rows) and even vertices (columns).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignedAdjacency {
    n: usize,
    entries: Vec<Vec<i8>>,
}

impl SignedAdjacency {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Entry for odd vertex `2*row + 1` and even vertex `2*col`.
    pub fn get(&self, row: usize, col: usize) -> i8 {
        self.entries[row][col]
    }

    pub fn entries(&self) -> &[Vec<i8>] {
        &self.entries
    }

    pub fn to_matrix(&self) -> DenseMatrix<i64> {
        let h = self.entries.len();
        DenseMatrix::from_fn(h, |i, j| i64::from(self.entries[i][j]))
    }
}

/// Signed adjacency derived from [`directed_edges`]: `+1` for an edge
/// oriented from the even vertex to the odd one, `-1` for the reverse.
pub fn oriented_edges(n: usize) -> Result<SignedAdjacency> {
    check_dim(n)?;
    let h = 1usize << (n - 1);
    let mut entries = vec![vec![0i8; h]; h];
    for (from, to) in directed_edges(n) {
        if from % 2 == 0 {
            entries[(to - 1) / 2][from / 2] = 1;
        } else {
            entries[(from - 1) / 2][to / 2] = -1;
        }
    }
    Ok(SignedAdjacency { n, entries })
}

fn x_recursive(n: usize) -> DenseMatrix<i64> {
    if n == 1 {
        return DenseMatrix::identity(1);
    }
    let prev = x_recursive(n - 1);
    DenseMatrix::odd(&prev, &prev)
}

fn g_recursive(n: usize) -> DenseMatrix<i64> {
    if n == 1 {
        return DenseMatrix::identity(1);
    }
    let g = g_recursive(n - 1);
    let x = x_recursive(n - 1);
    DenseMatrix::block2(&g, &-&x, &x, &g)
}

/// `X_n`: the `2^(n-1)` anti-diagonal permutation built by recursion.
pub fn x_matrix(n: usize) -> Result<DenseMatrix<i64>> {
    check_dim(n)?;
    Ok(x_recursive(n))
}

/// `G_n = [[G_{n-1}, -X_{n-1}], [X_{n-1}, G_{n-1}]]`, exact integers.
pub fn g_matrix(n: usize) -> Result<DenseMatrix<i64>> {
    check_dim(n)?;
    Ok(g_recursive(n))
}

/// `U_n = G_n / sqrt(n)`.
pub fn u_matrix<T: Field>(n: usize) -> Result<DenseMatrix<T>> {
    Ok(g_matrix(n)?.cast::<T>().scale_real(1.0 / (n as f64).sqrt()))
}

/// `F_n = [[0, U_n^*], [U_n, 0]]` on `H^+ ⊕ H^-`.
pub fn f_matrix<T: Field>(n: usize) -> Result<DenseMatrix<T>> {
    let u = u_matrix::<T>(n)?;
    Ok(DenseMatrix::odd(&u.conj_transpose(), &u))
}

/// Grading `ε`: `+1` on the even block, `-1` on the odd block.
pub fn grading<T: Field>(n: usize) -> Result<DenseMatrix<T>> {
    check_dim(n)?;
    let h = 1usize << (n - 1);
    Ok(DenseMatrix::from_fn(2 * h, |i, j| {
        if i != j {
            T::zero()
        } else if i < h {
            T::one()
        } else {
            -T::one()
        }
    }))
}

/// `max |U U^* - I|` for `U = g / sqrt(n)`; used to validate arbitrary
/// candidate sign patterns.
pub fn unitarity_residual(g: &DenseMatrix<i64>, n: usize) -> f64 {
    let u = g.cast::<f64>().scale_real(1.0 / (n as f64).sqrt());
    let prod = &u * &u.transpose();
    prod.max_abs_diff(&DenseMatrix::identity(prod.dim()))
}
