//! Independent brute-force oracles for quantities the library computes by
//! shortcut (ratio-class aggregation, closed forms).

use fractal_dirac::ifs::{enumerate_words, preset, similarity_dimension};
use fractal_dirac::spectral::{
    eigenvalue_counting, integrate_hausdorff, level_sums, zeta_truncated, QuadratureSpec,
};
use fractal_dirac::DEFAULT_WORD_BUDGET;

/// Counts words one by one.
fn literal_count(name: &str, depth: usize, lambda: f64) -> u128 {
    let k = preset(name).unwrap();
    let words = enumerate_words(&k, depth, DEFAULT_WORD_BUDGET)
        .unwrap()
        .filter(|c| 1.0 / c.edge() <= lambda * (1.0 + 1e-12))
        .count() as u128;
    words << k.n()
}

#[test]
fn counting_matches_enumeration() {
    for (name, depth) in [("cantor_set", 9), ("non_osc", 6), ("sierpinski_carpet", 4), ("rotation", 5)] {
        let k = preset(name).unwrap();
        for lambda in [0.5, 1.0, 2.9, 3.0, 9.5, 27.0, 100.0, 1e4] {
            assert_eq!(
                eigenvalue_counting(&k, depth, lambda).unwrap(),
                literal_count(name, depth, lambda),
                "{name} λ = {lambda}"
            );
        }
    }
}

#[test]
fn aggregated_sums_match_placed_cubes() {
    let k = preset("non_osc").unwrap();
    let p = 2.1;
    let depth = 7;
    let mut by_level = vec![0.0; depth + 1];
    for c in enumerate_words(&k, depth, DEFAULT_WORD_BUDGET).unwrap() {
        by_level[c.word.len()] += c.edge().powf(p);
    }
    let aggregated = level_sums(&k, p, depth, 1).unwrap();
    assert!(!aggregated.literal);
    for (a, b) in aggregated.enumerated.iter().zip(&by_level) {
        assert!(((a - b) / b).abs() <= 1e-12);
    }
    let z = zeta_truncated(&k, p, depth, DEFAULT_WORD_BUDGET).unwrap().value;
    assert!((z - 4.0 * by_level.iter().sum::<f64>()).abs() <= 1e-10 * z);
}

#[test]
fn cantor_mean_against_interval_midpoints() {
    // The depth-J Cantor intervals have equal weight 2^{-J}; their midpoints
    // are enumerated directly from ternary digits in {0, 2}.
    let depth = 12;
    let mut total = 0.0;
    for bits in 0u32..(1 << depth) {
        let left: f64 = (0..depth)
            .map(|j| 2.0 * f64::from((bits >> j) & 1) * 3f64.powi(-(j as i32) - 1))
            .sum();
        total += left + 0.5 * 3f64.powi(-(depth as i32));
    }
    let oracle = total / f64::from(1u32 << depth);
    let k = preset("cantor_set").unwrap();
    let got = integrate_hausdorff(&k, &|x| x[0], &QuadratureSpec::deterministic(depth), DEFAULT_WORD_BUDGET)
        .unwrap();
    assert!((got - oracle).abs() <= 1e-12);
    assert!((oracle - 0.5).abs() <= 1e-6);
}

#[test]
fn dust_coordinate_sum() {
    let k = preset("cantor_dust(2)").unwrap();
    let got = integrate_hausdorff(
        &k,
        &|x| x[0] + x[1],
        &QuadratureSpec::deterministic(8),
        DEFAULT_WORD_BUDGET,
    )
    .unwrap();
    assert!((got - 1.0).abs() <= 1e-6);
    let d = similarity_dimension(&k);
    assert!((d - 2.0 * 2f64.ln() / 3f64.ln()).abs() <= 1e-11);
}
