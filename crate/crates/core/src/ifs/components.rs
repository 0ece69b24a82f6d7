//! Connected components of `V ∪ ⋃_s f_s([0,1]^n)`.

use petgraph::unionfind::UnionFind;
use serde::{Deserialize, Serialize};

use super::simplex::feasible;
use super::{unit_vertices, IfsSystem, Similitude, GEOMETRY_TOL};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Component {
    /// 0-based map indices whose level-one cubes belong to the component.
    pub cubes: Vec<usize>,
    /// Original vertex indices in the component.
    pub vertices: Vec<usize>,
    /// `#(V_0 ∩ X_i)`.
    pub d0: usize,
    /// `#(V_1 ∩ X_i)`.
    pub d1: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentReport {
    pub components: Vec<Component>,
}

impl ComponentReport {
    pub fn vertex_total(&self) -> usize {
        self.components.iter().map(|c| c.d0 + c.d1).sum()
    }

    /// First component with `d0 != d1`.
    pub fn unbalanced(&self) -> Option<(usize, &Component)> {
        self.components.iter().enumerate().find(|(_, c)| c.d0 != c.d1)
    }
}

/// Whether `g(u) ∈ h([0,1]^n)` for some `u ∈ [0,1]^n`.
///
/// With `w = h^{-1}(g(u)) = A u + c`, `A = (r_g/r_h) T_hᵀ T_g` and
/// `c = T_hᵀ(b_g - b_h)/r_h`, the test is feasibility of
/// `0 ≤ u ≤ 1, 0 ≤ A u + c ≤ 1`, each face relaxed by [`GEOMETRY_TOL`].
pub(crate) fn cubes_intersect(g: &Similitude, h: &Similitude) -> bool {
    let n = g.dim();
    let th = h.orth.transpose();
    let a = (&th * &g.orth).scale(g.ratio / h.ratio);
    let diff: Vec<f64> = (0..n).map(|k| g.translation[k] - h.translation[k]).collect();
    let c: Vec<f64> = (0..n)
        .map(|i| (0..n).map(|k| th.get(i, k) * diff[k]).sum::<f64>() / h.ratio)
        .collect();
    let mut rows = Vec::with_capacity(3 * n);
    let mut rhs = Vec::with_capacity(3 * n);
    for i in 0..n {
        let mut unit = vec![0.0; n];
        unit[i] = 1.0;
        rows.push(unit);
        rhs.push(1.0 + GEOMETRY_TOL);
        let ai = a.row(i).to_vec();
        rows.push(ai.iter().map(|x| -x).collect());
        rhs.push(c[i] + GEOMETRY_TOL);
        rows.push(ai);
        rhs.push(1.0 - c[i] + GEOMETRY_TOL);
    }
    feasible(&rows, &rhs, 1e-12)
}

/// Whether `y ∈ h([0,1]^n)` within [`GEOMETRY_TOL`].
pub(crate) fn contains_point(h: &Similitude, y: &[f64]) -> bool {
    let n = h.dim();
    (0..n).all(|i| {
        let u = (0..n)
            .map(|k| h.orth.get(k, i) * (y[k] - h.translation[k]))
            .sum::<f64>()
            / h.ratio;
        (-GEOMETRY_TOL..=1.0 + GEOMETRY_TOL).contains(&u)
    })
}

pub fn level_one_components(ifs: &IfsSystem) -> ComponentReport {
    let maps = ifs.maps();
    let m = maps.len();
    let vertices = unit_vertices(ifs.n());
    let mut uf = UnionFind::<usize>::new(m + vertices.len());
    for i in 0..m {
        for j in i + 1..m {
            if cubes_intersect(&maps[i], &maps[j]) {
                uf.union(i, j);
            }
        }
        for (v, y) in vertices.iter().enumerate() {
            if contains_point(&maps[i], y) {
                uf.union(i, m + v);
            }
        }
    }
    let labels = uf.into_labeling();
    let mut order: Vec<usize> = Vec::new();
    let mut components: Vec<Component> = Vec::new();
    for (node, &root) in labels.iter().enumerate() {
        let k = match order.iter().position(|&r| r == root) {
            Some(k) => k,
            None => {
                order.push(root);
                components.push(Component {
                    cubes: Vec::new(),
                    vertices: Vec::new(),
                    d0: 0,
                    d1: 0,
                });
                order.len() - 1
            }
        };
        let comp = &mut components[k];
        if node < m {
            comp.cubes.push(node);
        } else {
            let v = node - m;
            comp.vertices.push(v);
            if v.is_multiple_of(2) {
                comp.d0 += 1;
            } else {
                comp.d1 += 1;
            }
        }
    }
    ComponentReport { components }
}
