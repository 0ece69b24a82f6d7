//! Iterated function systems of similitudes on the unit cube `[0,1]^n`.
//!
//! A word `w = (s_1, …, s_j)` names the composition `f_w = f_{s_1} ∘ ⋯ ∘ f_{s_j}`
//! and the placed cube `f_w([0,1]^n)`. Symbols are 0-based internally.

mod components;
mod presets;
mod simplex;

pub use components::{level_one_components, Component, ComponentReport};
pub use presets::{preset, PRESET_NAMES};

use serde::{Deserialize, Serialize};

use crate::calculus::{orthogonality_residual, CubePlacement, ORTHOGONALITY_TOL};
use crate::cube;
use crate::error::{Error, Result};
use crate::RealMatrix;

/// Containment and vertex-matching tolerance.
pub const GEOMETRY_TOL: f64 = 1e-9;

/// Absolute tolerance of the similarity-dimension bisection.
pub const DIMENSION_TOL: f64 = 1e-12;

/// `x ↦ ratio · T x + b`.
#[derive(Clone, Debug, PartialEq)]
pub struct Similitude {
    pub ratio: f64,
    pub orth: RealMatrix,
    pub translation: Vec<f64>,
}

impl Similitude {
    pub fn new(ratio: f64, orth: RealMatrix, translation: Vec<f64>) -> Result<Self> {
        if !(ratio > 0.0 && ratio < 1.0) {
            return Err(Error::InvalidArgument(format!(
                "similarity ratio {ratio} must lie in (0, 1)"
            )));
        }
        if translation.len() != orth.dim() {
            return Err(Error::SizeMismatch {
                expected: orth.dim(),
                actual: translation.len(),
            });
        }
        let residual = orthogonality_residual(&orth);
        if residual > ORTHOGONALITY_TOL {
            return Err(Error::NotOrthogonal { residual });
        }
        Ok(Self {
            ratio,
            orth,
            translation,
        })
    }

    /// Axis-aligned map `x ↦ ratio · x + b`.
    pub fn scaled(ratio: f64, translation: Vec<f64>) -> Result<Self> {
        let n = translation.len();
        Self::new(ratio, RealMatrix::identity(n), translation)
    }

    pub fn dim(&self) -> usize {
        self.orth.dim()
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        self.placement().apply(x)
    }

    pub fn placement(&self) -> CubePlacement {
        CubePlacement {
            n: self.dim(),
            edge: self.ratio,
            orth: self.orth.clone(),
            translation: self.translation.clone(),
        }
    }

    /// Largest distance by which an image vertex leaves `[0,1]^n`.
    fn overshoot(&self) -> f64 {
        self.placement()
            .vertices()
            .iter()
            .flatten()
            .map(|&x| (-x).max(x - 1.0).max(0.0))
            .fold(0.0, f64::max)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct IfsSystem {
    n: usize,
    maps: Vec<Similitude>,
    label: String,
    osc: bool,
}

impl IfsSystem {
    /// Validates dimensions, orthogonality and containment in `[0,1]^n`.
    /// `osc` records whether the open set condition is known to hold.
    pub fn new(maps: Vec<Similitude>, label: impl Into<String>, osc: bool) -> Result<Self> {
        let Some(first) = maps.first() else {
            return Err(Error::InvalidArgument("an IFS needs at least one map".into()));
        };
        let n = first.dim();
        if n == 0 {
            return Err(Error::InvalidArgument("dimension must be >= 1".into()));
        }
        for (index, m) in maps.iter().enumerate() {
            if m.dim() != n {
                return Err(Error::SizeMismatch {
                    expected: n,
                    actual: m.dim(),
                });
            }
            let overshoot = m.overshoot();
            if overshoot > GEOMETRY_TOL {
                return Err(Error::NotContained { index, overshoot });
            }
        }
        Ok(Self {
            n,
            maps,
            label: label.into(),
            osc,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn maps(&self) -> &[Similitude] {
        &self.maps
    }

    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn osc(&self) -> bool {
        self.osc
    }

    pub fn with_osc(mut self, osc: bool) -> Self {
        self.osc = osc;
        self
    }

    pub fn ratios(&self) -> Vec<f64> {
        self.maps.iter().map(|m| m.ratio).collect()
    }

    /// `Σ_s r_s^p`.
    pub fn ratio_sum(&self, p: f64) -> f64 {
        self.maps.iter().map(|m| m.ratio.powf(p)).sum()
    }

    /// Same maps in a different order; `order[k]` is the old index of new map `k`.
    pub fn permuted(&self, order: &[usize]) -> Result<Self> {
        let mut seen = vec![false; self.len()];
        for &i in order {
            if i >= self.len() || std::mem::replace(&mut seen[i], true) {
                return Err(Error::InvalidArgument("not a permutation".into()));
            }
        }
        if order.len() != self.len() {
            return Err(Error::InvalidArgument("not a permutation".into()));
        }
        Ok(Self {
            maps: order.iter().map(|&i| self.maps[i].clone()).collect(),
            ..self.clone()
        })
    }

    /// The system on `[0,1]^{n+1}` with maps `(x, t) ↦ (f_s(x), r_s t)`.
    /// Its attractor is `K × {0}`.
    pub fn lifted(&self) -> Self {
        let n = self.n + 1;
        let maps = self
            .maps
            .iter()
            .map(|m| {
                let orth = RealMatrix::from_fn(n, |i, j| match (i < n - 1, j < n - 1) {
                    (true, true) => m.orth.get(i, j),
                    (false, false) => 1.0,
                    _ => 0.0,
                });
                let mut translation = m.translation.clone();
                translation.push(0.0);
                Similitude {
                    ratio: m.ratio,
                    orth,
                    translation,
                }
            })
            .collect();
        Self {
            n,
            maps,
            label: format!("lifted {}", self.label),
            osc: self.osc,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: IfsFile = serde_json::from_str(text)?;
        file.into_system()
    }

    pub fn to_file(&self) -> IfsFile {
        IfsFile {
            n: self.n,
            maps: self
                .maps
                .iter()
                .map(|m| MapFile {
                    ratio: m.ratio,
                    matrix: m.orth.as_slice().to_vec(),
                    translation: m.translation.clone(),
                })
                .collect(),
            label: self.label.clone(),
        }
    }
}

/// On-disk IFS description.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IfsFile {
    pub n: usize,
    pub maps: Vec<MapFile>,
    #[serde(default = "custom_label")]
    pub label: String,
}

fn custom_label() -> String {
    "custom".into()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MapFile {
    pub ratio: f64,
    /// Row-major `n x n` orthogonal part.
    pub matrix: Vec<f64>,
    pub translation: Vec<f64>,
}

impl IfsFile {
    /// Files carry no open-set-condition claim; the result has `osc = false`.
    pub fn into_system(self) -> Result<IfsSystem> {
        let n = self.n;
        if n == 0 {
            return Err(Error::InvalidArgument("dimension must be >= 1".into()));
        }
        let maps = self
            .maps
            .into_iter()
            .map(|m| {
                let orth = RealMatrix::from_row_major(n, m.matrix)?;
                if m.translation.len() != n {
                    return Err(Error::SizeMismatch {
                        expected: n,
                        actual: m.translation.len(),
                    });
                }
                Similitude::new(m.ratio, orth, m.translation)
            })
            .collect::<Result<Vec<_>>>()?;
        IfsSystem::new(maps, self.label, false)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    symbols: Vec<usize>,
}

impl Word {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn new(symbols: Vec<usize>) -> Self {
        Self { symbols }
    }

    pub fn symbols(&self) -> &[usize] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut symbols = self.symbols.clone();
        symbols.extend_from_slice(&other.symbols);
        Word { symbols }
    }

    fn child(&self, s: usize) -> Word {
        let mut symbols = self.symbols.clone();
        symbols.push(s);
        Word { symbols }
    }
}

impl std::fmt::Display for Word {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.symbols.is_empty() {
            return f.write_str("∅");
        }
        let parts: Vec<String> = self.symbols.iter().map(|s| (s + 1).to_string()).collect();
        f.write_str(&parts.join("."))
    }
}

/// `f_w([0,1]^n)` together with its word.
#[derive(Clone, Debug, PartialEq)]
pub struct PlacedCube {
    pub word: Word,
    pub placement: CubePlacement,
}

impl PlacedCube {
    pub fn root(n: usize) -> Self {
        Self {
            word: Word::empty(),
            placement: CubePlacement::identity(n),
        }
    }

    pub fn edge(&self) -> f64 {
        self.placement.edge
    }

    pub fn vertices(&self) -> Vec<Vec<f64>> {
        self.placement.vertices()
    }

    pub fn center(&self) -> Vec<f64> {
        self.placement.center()
    }

    /// `f_{w·s} = f_w ∘ f_s`.
    pub fn child(&self, s: usize, map: &Similitude) -> Self {
        let p = &self.placement;
        let n = p.n;
        let mut translation = p.translation.clone();
        for (i, t) in translation.iter_mut().enumerate() {
            let tb: f64 = (0..n).map(|j| p.orth.get(i, j) * map.translation[j]).sum();
            *t += p.edge * tb;
        }
        Self {
            word: self.word.child(s),
            placement: CubePlacement {
                n,
                edge: p.edge * map.ratio,
                orth: &p.orth * &map.orth,
                translation,
            },
        }
    }

    /// Axis-aligned bounding box of the placed cube.
    pub fn bounding_box(&self) -> (Vec<f64>, Vec<f64>) {
        let n = self.placement.n;
        let mut lo = vec![f64::INFINITY; n];
        let mut hi = vec![f64::NEG_INFINITY; n];
        for v in self.vertices() {
            for k in 0..n {
                lo[k] = lo[k].min(v[k]);
                hi[k] = hi[k].max(v[k]);
            }
        }
        (lo, hi)
    }
}

pub fn compose(ifs: &IfsSystem, word: &Word) -> Result<PlacedCube> {
    let mut cube = PlacedCube::root(ifs.n());
    for &s in word.symbols() {
        let map = ifs.maps.get(s).ok_or(Error::SymbolOutOfRange {
            symbol: s,
            maps: ifs.len(),
        })?;
        cube = cube.child(s, map);
    }
    Ok(cube)
}

/// `Σ_{j=0}^{depth} N^j`, saturating.
pub fn word_count(maps: usize, depth: usize) -> u128 {
    let mut total: u128 = 0;
    let mut level: u128 = 1;
    for _ in 0..=depth {
        total = total.saturating_add(level);
        level = level.saturating_mul(maps as u128);
    }
    total
}

pub fn check_budget(maps: usize, depth: usize, budget: u64) -> Result<u128> {
    let needed = word_count(maps, depth);
    if needed > budget as u128 {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    Ok(needed)
}

/// Depth-first, lexicographic stream of placed cubes for all words of
/// length `0..=depth`. Memory is `O(depth · N)`.
pub struct Placements<'a> {
    ifs: &'a IfsSystem,
    depth: usize,
    stack: Vec<PlacedCube>,
}

impl Iterator for Placements<'_> {
    type Item = PlacedCube;

    fn next(&mut self) -> Option<PlacedCube> {
        let cube = self.stack.pop()?;
        if cube.word.len() < self.depth {
            for s in (0..self.ifs.len()).rev() {
                self.stack.push(cube.child(s, &self.ifs.maps[s]));
            }
        }
        Some(cube)
    }
}

pub fn enumerate_words(ifs: &IfsSystem, depth: usize, budget: u64) -> Result<Placements<'_>> {
    check_budget(ifs.len(), depth, budget)?;
    Ok(Placements {
        ifs,
        depth,
        stack: vec![PlacedCube::root(ifs.n())],
    })
}

/// Placed cubes of words of length exactly `depth`.
pub fn level_placements(
    ifs: &IfsSystem,
    depth: usize,
    budget: u64,
) -> Result<impl Iterator<Item = PlacedCube> + '_> {
    Ok(enumerate_words(ifs, depth, budget)?.filter(move |c| c.word.len() == depth))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Visit {
    Descend,
    Prune,
}

/// Depth-first walk up to `depth` in which the visitor may prune subtrees.
/// Fails once more than `budget` cubes have been visited.
pub fn walk(
    ifs: &IfsSystem,
    depth: usize,
    budget: u64,
    mut visit: impl FnMut(&PlacedCube) -> Visit,
) -> Result<u64> {
    let mut stack = vec![PlacedCube::root(ifs.n())];
    let mut visited: u64 = 0;
    while let Some(cube) = stack.pop() {
        visited += 1;
        if visited > budget {
            return Err(Error::BudgetExceeded {
                needed: visited as u128,
                budget,
            });
        }
        if visit(&cube) == Visit::Descend && cube.word.len() < depth {
            for s in (0..ifs.len()).rev() {
                stack.push(cube.child(s, &ifs.maps[s]));
            }
        }
    }
    Ok(visited)
}

/// Root of `Σ_s r_s^p = 1` by bisection.
pub fn similarity_dimension(ifs: &IfsSystem) -> f64 {
    solve_moran(&ifs.ratios())
}

/// Root of `Σ r_i^p = 1` for ratios in `(0, 1)`.
pub fn solve_moran(ratios: &[f64]) -> f64 {
    let sum = |p: f64| ratios.iter().map(|r| r.powf(p)).sum::<f64>();
    if sum(0.0) <= 1.0 {
        return 0.0;
    }
    let mut lo = 0.0;
    let mut hi = 1.0;
    while sum(hi) >= 1.0 {
        lo = hi;
        hi *= 2.0;
    }
    while hi - lo > DIMENSION_TOL {
        let mid = 0.5 * (lo + hi);
        if sum(mid) >= 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// True iff every vertex of `[0,1]^n` is the image of a vertex under some map.
pub fn vertex_closure_check(ifs: &IfsSystem) -> bool {
    let n = ifs.n();
    let unit: Vec<Vec<f64>> = (0..1usize << n)
        .map(|i| cube::vertex_bits(n, i).into_iter().map(f64::from).collect())
        .collect();
    let images: Vec<Vec<f64>> = ifs
        .maps
        .iter()
        .flat_map(|m| m.placement().vertices())
        .collect();
    unit.iter().all(|v| {
        images
            .iter()
            .any(|w| v.iter().zip(w).all(|(a, b)| (a - b).abs() <= GEOMETRY_TOL))
    })
}

/// Unit-cube vertices as points.
pub fn unit_vertices(n: usize) -> Vec<Vec<f64>> {
    (0..1usize << n)
        .map(|i| cube::vertex_bits(n, i).into_iter().map(f64::from).collect())
        .collect()
}
