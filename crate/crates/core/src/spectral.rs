//! Zeta functions, Dixmier traces and quantized volumes of `D_K`, plus
//! quadrature against the self-similar measure.
//!
//! `|D_K|` acts on the block of word `w` as `1/e_w` times the identity of
//! size `2^n`, so `Tr |D_K|^{-p} = 2^n Σ_w e_w^p = 2^n Σ_j (Σ_s r_s^p)^j`.
//! Words sharing a multiset of ratios share `e_w`, which lets deep
//! truncations be summed over ratio classes instead of single words.

use std::collections::BTreeMap;

use rand::distributions::WeightedIndex;
use rand::prelude::Distribution;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::calculus::{
    commutator_direct, matrix_abs, placed_coordinate_form, scalar_multiple, CubePlacement,
};
use crate::cube::directed_edges;
use crate::error::{Error, Result};
use crate::ifs::{
    enumerate_words, level_placements, similarity_dimension, word_count, IfsSystem,
};
use crate::RealMatrix;

/// Absolute tolerance for deciding `p = dim_s`.
pub const CRITICAL_TOL: f64 = 1e-9;

/// Offsets `z - 1 = 10^{-k}`, `k = 3..=6`, used by the residue recipe.
pub const RESIDUE_OFFSETS: [f64; 4] = [1e-3, 1e-4, 1e-5, 1e-6];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    ZetaClosed,
    ZetaTruncated,
    DixmierDirac,
    QuantizedVolume,
    WeightedFunctional,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceReport {
    pub quantity: Quantity,
    pub p: f64,
    pub value: f64,
    pub depth: Option<usize>,
    pub error_bound: Option<f64>,
    pub dim_s: f64,
}

pub fn reports_to_json(reports: &[TraceReport]) -> Result<String> {
    Ok(serde_json::to_string_pretty(reports)?)
}

pub fn reports_to_csv(reports: &[TraceReport]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in reports {
        w.serialize(r)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| Error::Io(std::io::Error::other(e.to_string())))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

fn block_dim(ifs: &IfsSystem) -> f64 {
    (1u64 << ifs.n()) as f64
}

/// `Σ_s r_s^p` and whether the geometric series converges. Within
/// [`CRITICAL_TOL`] of `dim_s` the sum is 1 up to root-finding error, so the
/// series counts as divergent there.
fn ratio_series(ifs: &IfsSystem, p: f64) -> (f64, bool) {
    let c = ifs.ratio_sum(p);
    (c, c < 1.0 && p > similarity_dimension(ifs) + CRITICAL_TOL)
}

/// `2^n / (1 - Σ r_s^p)`.
pub fn zeta_closed(ifs: &IfsSystem, p: f64) -> Result<TraceReport> {
    let (c, converges) = ratio_series(ifs, p);
    if !converges {
        return Err(Error::Divergent { p, ratio_sum: c });
    }
    Ok(TraceReport {
        quantity: Quantity::ZetaClosed,
        p,
        value: block_dim(ifs) / (1.0 - c),
        depth: None,
        error_bound: None,
        dim_s: similarity_dimension(ifs),
    })
}

/// Distinct similarity ratios with their multiplicities.
#[derive(Clone, Debug, PartialEq)]
pub struct RatioClasses {
    ratios: Vec<f64>,
    counts: Vec<u64>,
}

impl RatioClasses {
    pub fn new(ifs: &IfsSystem) -> Self {
        let mut map: BTreeMap<u64, u64> = BTreeMap::new();
        for r in ifs.ratios() {
            *map.entry(r.to_bits()).or_default() += 1;
        }
        Self {
            ratios: map.keys().map(|&b| f64::from_bits(b)).collect(),
            counts: map.values().copied().collect(),
        }
    }

    pub fn ratios(&self) -> &[f64] {
        &self.ratios
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// Calls `visit(multiplicity, e)` for every class of words of length
    /// `j`: words using ratio `i` exactly `k_i` times all have
    /// `e_w = Π r_i^{k_i}`, and there are `j!/Π k_i! · Π c_i^{k_i}` of them.
    pub fn for_each_class(&self, j: usize, mut visit: impl FnMut(u128, f64)) -> Result<()> {
        let m = self.ratios.len();
        let mut k = vec![0usize; m];
        self.compose(0, j, &mut k, &mut visit)
    }

    fn compose(
        &self,
        i: usize,
        left: usize,
        k: &mut Vec<usize>,
        visit: &mut impl FnMut(u128, f64),
    ) -> Result<()> {
        let m = self.ratios.len();
        if i == m - 1 {
            k[i] = left;
            let (mult, e) = self.class_value(k)?;
            visit(mult, e);
            return Ok(());
        }
        for ki in 0..=left {
            k[i] = ki;
            self.compose(i + 1, left - ki, k, visit)?;
        }
        Ok(())
    }

    fn class_value(&self, k: &[usize]) -> Result<(u128, f64)> {
        let overflow = || Error::InvalidArgument("word count overflows 128 bits".into());
        let mut mult: u128 = 1;
        let mut used = 0usize;
        let mut e = 1.0;
        for (i, &ki) in k.iter().enumerate() {
            for t in 1..=ki {
                // running binomial C(used + t, t) stays integral
                mult = mult
                    .checked_mul((used + t) as u128)
                    .ok_or_else(overflow)?
                    / t as u128;
            }
            used += ki;
            let ci = (self.counts[i] as u128)
                .checked_pow(ki as u32)
                .ok_or_else(overflow)?;
            mult = mult.checked_mul(ci).ok_or_else(overflow)?;
            e *= self.ratios[i].powi(ki as i32);
        }
        Ok((mult, e))
    }
}

/// Per-level sums `Σ_{|w|=j} e_w^p` for `j = 0..=depth`.
#[derive(Clone, Debug, PartialEq)]
pub struct LevelSums {
    pub enumerated: Vec<f64>,
    /// `(Σ_s r_s^p)^j`.
    pub power_form: Vec<f64>,
    /// True when every word was visited; false for ratio-class aggregation.
    pub literal: bool,
}

impl LevelSums {
    pub fn max_relative_deviation(&self) -> f64 {
        self.enumerated
            .iter()
            .zip(&self.power_form)
            .map(|(a, b)| ((a - b) / b).abs())
            .fold(0.0, f64::max)
    }
}

/// Word sums visiting every word when `Σ N^j ≤ budget`, otherwise summing
/// over ratio classes.
pub fn level_sums(ifs: &IfsSystem, p: f64, depth: usize, budget: u64) -> Result<LevelSums> {
    let c = ifs.ratio_sum(p);
    let power_form = (0..=depth).map(|j| c.powi(j as i32)).collect();
    let literal = word_count(ifs.len(), depth) <= budget as u128;
    let enumerated = if literal {
        literal_level_sums(&ifs.ratios(), p, depth)
    } else {
        let classes = RatioClasses::new(ifs);
        let mut sums = Vec::with_capacity(depth + 1);
        for j in 0..=depth {
            let mut acc = 0.0;
            classes.for_each_class(j, |mult, e| acc += mult as f64 * e.powf(p))?;
            sums.push(acc);
        }
        sums
    };
    Ok(LevelSums {
        enumerated,
        power_form,
        literal,
    })
}

fn literal_level_sums(ratios: &[f64], p: f64, depth: usize) -> Vec<f64> {
    fn descend(rp: &[f64], e: f64, len: usize, depth: usize, acc: &mut [f64]) {
        acc[len] += e;
        if len < depth {
            for &r in rp {
                descend(rp, e * r, len + 1, depth, acc);
            }
        }
    }
    let rp: Vec<f64> = ratios.iter().map(|r| r.powf(p)).collect();
    let mut sums = vec![0.0; depth + 1];
    sums[0] = 1.0;
    if depth == 0 {
        return sums;
    }
    // partition by first symbol; partial results are added in symbol order
    let parts: Vec<Vec<f64>> = rp
        .par_iter()
        .map(|&r| {
            let mut acc = vec![0.0; depth + 1];
            descend(&rp, r, 1, depth, &mut acc);
            acc
        })
        .collect();
    for part in parts {
        for (s, x) in sums.iter_mut().zip(part) {
            *s += x;
        }
    }
    sums
}

/// `2^n Σ_{|w| ≤ J} e_w^p` with the geometric tail bound `2^n c^{J+1}/(1-c)`.
pub fn zeta_truncated(ifs: &IfsSystem, p: f64, depth: usize, budget: u64) -> Result<TraceReport> {
    if !(p > 0.0) {
        return Err(Error::InvalidArgument(format!("exponent {p} must be positive")));
    }
    let sums = level_sums(ifs, p, depth, budget)?;
    let (c, converges) = ratio_series(ifs, p);
    let scale = block_dim(ifs);
    Ok(TraceReport {
        quantity: Quantity::ZetaTruncated,
        p,
        value: scale * sums.enumerated.iter().sum::<f64>(),
        depth: Some(depth),
        error_bound: converges.then(|| scale * c.powi(depth as i32 + 1) / (1.0 - c)),
        dim_s: similarity_dimension(ifs),
    })
}

/// `Tr_ω(|D_K|^{-p})`: the residue `-2^n / (d Σ r_s^d log r_s)` at
/// `p = d = dim_s`, zero above it.
pub fn dixmier_trace_dirac(ifs: &IfsSystem, p: f64) -> Result<TraceReport> {
    let d = similarity_dimension(ifs);
    let value = dixmier_value(ifs, p, d)?;
    Ok(TraceReport {
        quantity: Quantity::DixmierDirac,
        p,
        value,
        depth: None,
        error_bound: None,
        dim_s: d,
    })
}

fn dixmier_value(ifs: &IfsSystem, p: f64, d: f64) -> Result<f64> {
    if p < d - CRITICAL_TOL {
        return Err(Error::BelowCritical { p, critical: d });
    }
    if p > d + CRITICAL_TOL {
        return Ok(0.0);
    }
    let slope: f64 = ifs.ratios().iter().map(|r| r.powf(d) * r.ln()).sum();
    Ok(-block_dim(ifs) / (d * slope))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResidueCheck {
    /// `(z - 1, (z - 1) ζ(z p))` pairs.
    pub samples: Vec<(f64, f64)>,
    /// Richardson extrapolation of the two smallest offsets.
    pub extrapolated: f64,
}

/// Linear Richardson step for samples at `h` and `h/10`.
pub fn richardson(at_h: f64, at_h_over_10: f64) -> f64 {
    (10.0 * at_h_over_10 - at_h) / 9.0
}

/// `lim_{z→1+} (z-1) ζ(z p)` sampled at [`RESIDUE_OFFSETS`].
pub fn dixmier_residue_limit(ifs: &IfsSystem, p: f64) -> Result<ResidueCheck> {
    let samples = RESIDUE_OFFSETS
        .iter()
        .map(|&h| Ok((h, h * zeta_closed(ifs, (1.0 + h) * p)?.value)))
        .collect::<Result<Vec<_>>>()?;
    let k = samples.len();
    let extrapolated = richardson(samples[k - 2].1, samples[k - 1].1);
    Ok(ResidueCheck {
        samples,
        extrapolated,
    })
}

/// `Tr_ω(|[F_K,x^1]⋯[F_K,x^n]|^p) = n^{-d/2} Tr_ω(|D_K|^{-np})`.
pub fn quantized_volume(ifs: &IfsSystem, p: f64) -> Result<TraceReport> {
    let d = similarity_dimension(ifs);
    let n = ifs.n() as f64;
    let critical = d / n;
    if p < critical - CRITICAL_TOL {
        return Err(Error::BelowCritical { p, critical });
    }
    let value = if (p - critical).abs() <= CRITICAL_TOL {
        n.powf(-d / 2.0) * dixmier_value(ifs, d, d)?
    } else {
        0.0
    };
    Ok(TraceReport {
        quantity: Quantity::QuantizedVolume,
        p,
        value,
        depth: None,
        error_bound: None,
        dim_s: d,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct VolumeTruncation {
    /// Truncated `Tr |[F_K,x^1]⋯[F_K,x^n]|^p` (reported as a partial zeta sum).
    pub report: TraceReport,
    /// `max_w ‖ |B_1⋯B_n| - e_w^n/n^{n/2} I ‖_∞` over the visited blocks.
    pub max_block_residual: f64,
    pub blocks: u64,
}

/// Sum over words of `Tr |B_1(w)⋯B_n(w)|^p`, with `B_α(w)` the block of
/// `[F_K, x^α]` on the placed cube of `w`.
pub fn quantized_volume_truncated(
    ifs: &IfsSystem,
    p: f64,
    depth: usize,
    budget: u64,
) -> Result<VolumeTruncation> {
    let n = ifs.n();
    let nf = n as f64;
    let mut total = 0.0;
    let mut max_block_residual = 0.0f64;
    let mut blocks = 0u64;
    for cube in enumerate_words(ifs, depth, budget)? {
        let abs = volume_block_abs(&cube.placement)?;
        let expected = cube.edge().powi(n as i32) / nf.powf(nf / 2.0);
        max_block_residual =
            max_block_residual.max(abs.max_abs_diff(&RealMatrix::scalar(abs.dim(), expected)));
        total += trace_power(&abs, p);
        blocks += 1;
    }
    let (c, converges) = ratio_series(ifs, nf * p);
    let head = block_dim(ifs) * nf.powf(-nf * p / 2.0);
    Ok(VolumeTruncation {
        report: TraceReport {
            quantity: Quantity::QuantizedVolume,
            p,
            value: total,
            depth: Some(depth),
            error_bound: converges.then(|| head * c.powi(depth as i32 + 1) / (1.0 - c)),
            dim_s: similarity_dimension(ifs),
        },
        max_block_residual,
        blocks,
    })
}

/// `|B_1⋯B_n|` for one placed cube.
pub fn volume_block_abs(placement: &CubePlacement) -> Result<RealMatrix> {
    let mut prod = RealMatrix::identity(1 << placement.n);
    for axis in 1..=placement.n {
        prod = &prod * &placed_coordinate_form(placement, axis)?;
    }
    Ok(matrix_abs(&prod))
}

/// `Tr A^p` for a positive semidefinite symmetric `A`.
fn trace_power(a: &RealMatrix, p: f64) -> f64 {
    if let Some(c) = scalar_multiple(a) {
        return a.dim() as f64 * c.max(0.0).powf(p);
    }
    a.to_nalgebra()
        .symmetric_eigenvalues()
        .iter()
        .map(|&l| l.max(0.0).powf(p))
        .sum()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QuadratureMode {
    Deterministic,
    ChaosGame,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub depth: usize,
    pub mode: QuadratureMode,
    /// Chaos-game sample count.
    pub samples: usize,
    pub seed: u64,
    /// Treat the weights `r_s^{dim_s}` as the Hausdorff probability measure
    /// even without the open set condition flag.
    pub assume_osc: bool,
}

impl QuadratureSpec {
    pub fn deterministic(depth: usize) -> Self {
        Self {
            depth,
            mode: QuadratureMode::Deterministic,
            samples: 0,
            seed: 0,
            assume_osc: false,
        }
    }

    pub fn chaos_game(depth: usize, samples: usize, seed: u64) -> Self {
        Self {
            depth,
            mode: QuadratureMode::ChaosGame,
            samples,
            seed,
            assume_osc: false,
        }
    }
}

/// `∫_K f dΛ` against the self-similar measure with weights `r_s^{dim_s}`,
/// sampling `f` at centres of depth-`J` cubes.
pub fn integrate_hausdorff(
    ifs: &IfsSystem,
    f: &dyn Fn(&[f64]) -> f64,
    spec: &QuadratureSpec,
    budget: u64,
) -> Result<f64> {
    if !ifs.osc() && !spec.assume_osc {
        return Err(Error::NotOsc);
    }
    let d = similarity_dimension(ifs);
    match spec.mode {
        QuadratureMode::Deterministic => {
            let mut total = 0.0;
            let mut weight = 0.0;
            for cube in level_placements(ifs, spec.depth, budget)? {
                let w = cube.edge().powf(d);
                weight += w;
                total += w * f(&cube.center());
            }
            // weights sum to (Σ r^d)^J = 1 up to the root-finding error
            Ok(total / weight)
        }
        QuadratureMode::ChaosGame => {
            if spec.samples == 0 {
                return Err(Error::InvalidArgument("chaos game needs samples > 0".into()));
            }
            let weights: Vec<f64> = ifs.ratios().iter().map(|r| r.powf(d)).collect();
            let dist = WeightedIndex::new(&weights)
                .map_err(|e| Error::InvalidArgument(e.to_string()))?;
            let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
            let centre = vec![0.5; ifs.n()];
            let maps = ifs.maps();
            let mut symbols = vec![0usize; spec.depth];
            let mut total = 0.0;
            for _ in 0..spec.samples {
                for s in symbols.iter_mut() {
                    *s = dist.sample(&mut rng);
                }
                let x = symbols
                    .iter()
                    .rev()
                    .fold(centre.clone(), |x, &s| maps[s].apply(&x));
                total += f(&x);
            }
            Ok(total / spec.samples as f64)
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct WeightedFunctional {
    /// Extrapolated `lim (z-1) Tr(ρ(f)|D_K|^{-zp})`.
    pub report: TraceReport,
    /// `Tr_ω(|D_K|^{-p}) · ∫ f dΛ`.
    pub prediction: f64,
    pub samples: Vec<(f64, f64)>,
}

/// Regularised vertex sums `(z-1) Σ_w e_w^{zp} Σ_v f(v_w)` truncated at depth
/// `J` and closed with the self-similar tail `A_J(z) c/(1-c)`, `c = Σ r_s^{zp}`,
/// then extrapolated `z → 1+`.
pub fn weighted_functional(
    ifs: &IfsSystem,
    f: &dyn Fn(&[f64]) -> f64,
    p: f64,
    spec: &QuadratureSpec,
    budget: u64,
) -> Result<WeightedFunctional> {
    let d = similarity_dimension(ifs);
    if p < d - CRITICAL_TOL {
        return Err(Error::BelowCritical { p, critical: d });
    }
    let depth = spec.depth;
    let zs: Vec<f64> = RESIDUE_OFFSETS.iter().map(|h| 1.0 + h).collect();
    let mut levels = vec![vec![0.0; depth + 1]; zs.len()];
    for cube in enumerate_words(ifs, depth, budget)? {
        let vertex_sum: f64 = cube.vertices().iter().map(|v| f(v)).sum();
        let j = cube.word.len();
        let ln_e = cube.edge().ln();
        for (k, z) in zs.iter().enumerate() {
            levels[k][j] += (z * p * ln_e).exp() * vertex_sum;
        }
    }
    let samples = RESIDUE_OFFSETS
        .iter()
        .zip(&zs)
        .zip(&levels)
        .map(|((&h, &z), a)| {
            let c = ifs.ratio_sum(z * p);
            let head: f64 = a.iter().sum();
            (h, h * (head + a[depth] * c / (1.0 - c)))
        })
        .collect::<Vec<_>>();
    let k = samples.len();
    let extrapolated = richardson(samples[k - 2].1, samples[k - 1].1);
    let integral = integrate_hausdorff(ifs, f, spec, budget)?;
    let prediction = dixmier_value(ifs, p, d)? * integral;
    Ok(WeightedFunctional {
        report: TraceReport {
            quantity: Quantity::WeightedFunctional,
            p,
            value: extrapolated,
            depth: Some(depth),
            error_bound: Some((samples[k - 1].1 - extrapolated).abs()),
            dim_s: d,
        },
        prediction,
        samples,
    })
}

/// `2^n · #{|w| ≤ J : 1/e_w ≤ λ}`, counted over ratio classes.
pub fn eigenvalue_counting(ifs: &IfsSystem, depth: usize, lambda: f64) -> Result<u128> {
    if !(lambda > 0.0) {
        return Err(Error::InvalidArgument("λ must be positive".into()));
    }
    let classes = RatioClasses::new(ifs);
    let mut count: u128 = 0;
    for j in 0..=depth {
        classes.for_each_class(j, |mult, e| {
            if 1.0 / e <= lambda * (1.0 + 1e-12) {
                count += mult;
            }
        })?;
    }
    Ok(count << ifs.n())
}

/// Least-squares slope of `log N(λ)` against `log λ`.
pub fn counting_slope(ifs: &IfsSystem, depth: usize, lambdas: &[f64]) -> Result<f64> {
    let pts = lambdas
        .iter()
        .map(|&l| Ok((l.ln(), (eigenvalue_counting(ifs, depth, l)? as f64).ln())))
        .collect::<Result<Vec<_>>>()?;
    Ok(least_squares_slope(&pts))
}

pub fn least_squares_slope(points: &[(f64, f64)]) -> f64 {
    let m = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / m;
    let my = points.iter().map(|p| p.1).sum::<f64>() / m;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CommutatorNormReport {
    pub blocks: u64,
    /// Blocks violating `‖[F_K, f]_w‖ ≤ sqrt(n) · L_edge · e_w`.
    pub violations: u64,
    /// `max_w ‖[F_K, f]_w‖ / (L_edge · e_w)`; the proven constant is `sqrt(n)`.
    pub sharpest_constant: f64,
    pub max_block_norm: f64,
}

impl CommutatorNormReport {
    pub fn holds(&self) -> bool {
        self.violations == 0
    }
}

/// Operator norms of `[F_K, f]` block by block against the edge-Lipschitz bound.
pub fn commutator_norm_check(
    ifs: &IfsSystem,
    f: &dyn Fn(&[f64]) -> f64,
    depth: usize,
    budget: u64,
) -> Result<CommutatorNormReport> {
    let n = ifs.n();
    let edges = directed_edges(n);
    let sqrt_n = (n as f64).sqrt();
    let mut report = CommutatorNormReport {
        blocks: 0,
        violations: 0,
        sharpest_constant: 0.0,
        max_block_norm: 0.0,
    };
    for cube in enumerate_words(ifs, depth, budget)? {
        let values = cube.placement.sample(f);
        let block = commutator_direct(n, &values)?;
        let norm = operator_norm(&block);
        let e = cube.edge();
        let lip = edges
            .iter()
            .map(|&(a, b)| (values.values()[a] - values.values()[b]).abs() / e)
            .fold(0.0, f64::max);
        let scale = lip * e;
        if norm > sqrt_n * scale * (1.0 + 1e-12) + 1e-15 {
            report.violations += 1;
        }
        if scale > 0.0 {
            report.sharpest_constant = report.sharpest_constant.max(norm / scale);
        }
        report.max_block_norm = report.max_block_norm.max(norm);
        report.blocks += 1;
    }
    Ok(report)
}

/// Largest singular value.
pub fn operator_norm(a: &RealMatrix) -> f64 {
    a.to_nalgebra().singular_values().max()
}
