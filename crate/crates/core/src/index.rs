//! Index pairings `⟨[H_K, F_K], [p]⟩` with projections given by boxes.
//!
//! On the block of a placed cube, `p F^+ p` has index
//! `#(even vertices in supp p) - #(odd vertices in supp p)`; the pairing is
//! the sum over words. Cubes whose vertices all share one membership value
//! contribute `2^{n-1} - 2^{n-1} = 0`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ifs::{level_one_components, walk, ComponentReport, IfsSystem, PlacedCube, Visit};

/// Membership tolerance for box faces.
pub const MEMBERSHIP_TOL: f64 = 1e-12;

/// Default stabilisation window.
pub const DEFAULT_WINDOW: usize = 3;

/// Axis-aligned box; each face is open or closed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoxRegion {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
    pub lo_closed: Vec<bool>,
    pub hi_closed: Vec<bool>,
}

impl BoxRegion {
    pub fn closed(lo: Vec<f64>, hi: Vec<f64>) -> Self {
        let n = lo.len();
        Self {
            lo,
            hi,
            lo_closed: vec![true; n],
            hi_closed: vec![true; n],
        }
    }

    fn dim(&self) -> usize {
        self.lo.len()
    }

    fn above_lo(&self, k: usize, x: f64) -> bool {
        if self.lo_closed[k] {
            x >= self.lo[k] - MEMBERSHIP_TOL
        } else {
            x > self.lo[k] + MEMBERSHIP_TOL
        }
    }

    fn below_hi(&self, k: usize, x: f64) -> bool {
        if self.hi_closed[k] {
            x <= self.hi[k] + MEMBERSHIP_TOL
        } else {
            x < self.hi[k] - MEMBERSHIP_TOL
        }
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        (0..self.dim()).all(|k| self.above_lo(k, x[k]) && self.below_hi(k, x[k]))
    }

    /// Every point of `[lo, hi]` is a member.
    fn covers(&self, lo: &[f64], hi: &[f64]) -> bool {
        (0..self.dim()).all(|k| self.above_lo(k, lo[k]) && self.below_hi(k, hi[k]))
    }

    /// No point of `[lo, hi]` is a member.
    fn misses(&self, lo: &[f64], hi: &[f64]) -> bool {
        (0..self.dim()).any(|k| !self.above_lo(k, hi[k]) || !self.below_hi(k, lo[k]))
    }
}

/// Indicator of a finite union of boxes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProjectionSpec {
    pub regions: Vec<BoxRegion>,
}

impl ProjectionSpec {
    /// `p_k`: indicator of `[0, 3^{-k}]` on the line.
    pub fn cantor_initial(k: u32) -> Self {
        Self {
            regions: vec![BoxRegion::closed(vec![0.0], vec![3f64.powi(-(k as i32))])],
        }
    }

    /// Indicator of the closed unit cube.
    pub fn whole(n: usize) -> Self {
        Self {
            regions: vec![BoxRegion::closed(vec![0.0; n], vec![1.0; n])],
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        for (i, r) in self.regions.iter().enumerate() {
            let lens = [r.lo.len(), r.hi.len(), r.lo_closed.len(), r.hi_closed.len()];
            if let Some(&bad) = lens.iter().find(|&&l| l != n) {
                return Err(Error::SizeMismatch {
                    expected: n,
                    actual: bad,
                });
            }
            if r.lo.iter().zip(&r.hi).any(|(a, b)| !(a <= b)) {
                return Err(Error::InvalidArgument(format!(
                    "region {i} has lo > hi or NaN bounds"
                )));
            }
        }
        Ok(())
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        self.regions.iter().any(|r| r.contains(x))
    }

    /// Membership is constant on the whole box `[lo, hi]`.
    fn uniform_on(&self, lo: &[f64], hi: &[f64]) -> bool {
        self.regions.iter().any(|r| r.covers(lo, hi))
            || self.regions.iter().all(|r| r.misses(lo, hi))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexReport {
    pub value: i64,
    pub depth_used: usize,
    /// The partial sums did not change over the last `window` depths.
    pub stabilized: bool,
    /// Partial sums over words of length `≤ j`, for `j = 0..=depth_used`.
    pub per_depth: Vec<i64>,
}

/// `#even - #odd` vertices of one placed cube inside `supp p`.
fn cube_index(cube: &PlacedCube, proj: &ProjectionSpec) -> i64 {
    cube.vertices()
        .iter()
        .enumerate()
        .filter(|(_, v)| proj.contains(v))
        .map(|(i, _)| if i % 2 == 0 { 1 } else { -1 })
        .sum()
}

pub fn index_pairing(
    ifs: &IfsSystem,
    proj: &ProjectionSpec,
    depth: usize,
    window: usize,
    budget: u64,
) -> Result<IndexReport> {
    proj.validate(ifs.n())?;
    let mut per_level = vec![0i64; depth + 1];
    walk(ifs, depth, budget, |cube| {
        per_level[cube.word.len()] += cube_index(cube, proj);
        let (lo, hi) = cube.bounding_box();
        // descendants stay inside the cube, so uniform membership persists
        if proj.uniform_on(&lo, &hi) {
            Visit::Prune
        } else {
            Visit::Descend
        }
    })?;
    let per_depth: Vec<i64> = per_level
        .iter()
        .scan(0i64, |acc, x| {
            *acc += x;
            Some(*acc)
        })
        .collect();
    let value = per_depth[depth];
    let stabilized = depth >= window && per_depth[depth - window..].iter().all(|&x| x == value);
    Ok(IndexReport {
        value,
        depth_used: depth,
        stabilized,
        per_depth,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub component: usize,
    pub d0: usize,
    pub d1: usize,
    /// Indicator of a box neighbourhood of the component.
    pub projection: ProjectionSpec,
    pub pairing: IndexReport,
}

impl Certificate {
    /// The pairing on the component projection equals `d0 - d1`.
    pub fn consistent(&self) -> bool {
        self.pairing.value == self.d0 as i64 - self.d1 as i64
    }
}

/// Half-width of the neighbourhood boxes used by [`nonvanish_certificate`].
pub const NEIGHBOURHOOD: f64 = 1e-6;

/// First level-one component with `d0 ≠ d1`, with its pairing checked on
/// the indicator of a box neighbourhood of that component.
pub fn nonvanish_certificate(
    ifs: &IfsSystem,
    depth: usize,
    budget: u64,
) -> Result<Option<Certificate>> {
    let report = level_one_components(ifs);
    certificate_from(ifs, &report, depth, budget)
}

pub fn certificate_from(
    ifs: &IfsSystem,
    report: &ComponentReport,
    depth: usize,
    budget: u64,
) -> Result<Option<Certificate>> {
    let Some((index, comp)) = report.unbalanced() else {
        return Ok(None);
    };
    let n = ifs.n();
    let mut regions = Vec::new();
    for &s in &comp.cubes {
        let cube = PlacedCube::root(n).child(s, &ifs.maps()[s]);
        let (lo, hi) = cube.bounding_box();
        regions.push(BoxRegion::closed(
            lo.iter().map(|x| x - NEIGHBOURHOOD).collect(),
            hi.iter().map(|x| x + NEIGHBOURHOOD).collect(),
        ));
    }
    for &v in &comp.vertices {
        let y: Vec<f64> = crate::cube::vertex_bits(n, v)
            .into_iter()
            .map(f64::from)
            .collect();
        regions.push(BoxRegion::closed(
            y.iter().map(|x| x - NEIGHBOURHOOD).collect(),
            y.iter().map(|x| x + NEIGHBOURHOOD).collect(),
        ));
    }
    let projection = ProjectionSpec { regions };
    let pairing = index_pairing(ifs, &projection, depth, DEFAULT_WINDOW.min(depth), budget)?;
    Ok(Some(Certificate {
        component: index,
        d0: comp.d0,
        d1: comp.d1,
        projection,
        pairing,
    }))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GapPairing {
    /// `Σ_gaps [a ∈ supp p_k] - [b ∈ supp p_k]`.
    pub value: i64,
    /// `[0 ∈ supp p_k] - [1 ∈ supp p_k]` for the outer pair `{0, 1}`;
    /// reported as a consistency check, not added to `value`.
    pub boundary: i64,
    pub gaps: u64,
}

/// Pairing of `p_k` with the module built on the removed middle-third
/// intervals `(a, b)` down to depth `J`. Endpoints are exact integers over `3^J`.
pub fn connes_gap_pairing(k: u32, depth: u32, budget: u64) -> Result<GapPairing> {
    if k == 0 || k > depth {
        return Err(Error::InvalidArgument(format!(
            "need 1 <= k <= J, got k = {k}, J = {depth}"
        )));
    }
    if depth > 40 {
        return Err(Error::InvalidArgument("gap depth is capped at 40".into()));
    }
    let gaps = (1u64 << depth) - 1;
    if gaps > budget {
        return Err(Error::BudgetExceeded {
            needed: gaps as u128,
            budget,
        });
    }
    let scale = 3u64.pow(depth);
    let support_hi = 3u64.pow(depth - k);
    let inside = |x: u64| i64::from(x <= support_hi);
    let mut value = 0i64;
    let mut intervals = vec![0u64];
    for level in 1..=depth {
        let len = 3u64.pow(depth - level + 1);
        let third = len / 3;
        let mut next = Vec::with_capacity(intervals.len() * 2);
        for &a in &intervals {
            value += inside(a + third) - inside(a + 2 * third);
            next.push(a);
            next.push(a + 2 * third);
        }
        intervals = next;
    }
    Ok(GapPairing {
        value,
        boundary: inside(0) - inside(scale),
        gaps,
    })
}
