//! Acceptance gate. Every criterion prints one PASS/FAIL line listing the
//! sub-checks that failed; tolerances are pinned as constants below.

use std::f64::consts::LN_2;
use std::time::{Duration, Instant};

use fractal_dirac::calculus::{
    clifford_check, commutator_direct, commutator_hadamard, volume_element_abs, VertexFunction,
};
use fractal_dirac::cube::{f_matrix, g_matrix, grading, u_matrix};
use fractal_dirac::ifs::{preset, similarity_dimension, IfsSystem};
use fractal_dirac::index::{connes_gap_pairing, index_pairing, nonvanish_certificate, ProjectionSpec};
use fractal_dirac::spectral::{
    counting_slope, dixmier_residue_limit, dixmier_trace_dirac, integrate_hausdorff,
    quantized_volume, quantized_volume_truncated, weighted_functional, zeta_closed,
    zeta_truncated, QuadratureSpec,
};
use fractal_dirac::{Complex64, DenseMatrix, RealMatrix, DEFAULT_WORD_BUDGET};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const MATRIX_TOL: f64 = 1e-12;
const CLIFFORD_TOL: f64 = 1e-11;
const VOLUME_TOL: f64 = 1e-11;
const TWO_PATH_TOL: f64 = 1e-12;
const FORMULA_REL_TOL: f64 = 1e-10;
const RESIDUE_REL_TOL: f64 = 1e-4;
const MORAN_RESIDUAL_TOL: f64 = 1e-10;
const TAIL_SLACK: f64 = 1e-9;
const BLOCK_TOL: f64 = 1e-10;
const SLOPE_TOL: f64 = 0.05;
const FACTORIZATION_TOL: f64 = 1e-3;
const QUADRATURE_TOL: f64 = 1e-6;

const RUNTIME_MATRIX: Duration = Duration::from_secs(5);
const RUNTIME_CLIFFORD: Duration = Duration::from_secs(30);
const RUNTIME_TRUNCATION: Duration = Duration::from_secs(60);

struct Gate {
    label: &'static str,
    checks: usize,
    failures: Vec<String>,
}

impl Gate {
    fn new(label: &'static str) -> Self {
        Self {
            label,
            checks: 0,
            failures: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn within_rel(&mut self, name: &str, got: f64, want: f64, tol: f64) {
        let err = ((got - want) / want).abs();
        self.check(err <= tol, || {
            format!("{name}: got {got:.12}, want {want:.12} (rel err {err:.2e} > {tol:.0e})")
        });
    }

    fn runtime(&mut self, start: Instant, limit: Duration) {
        let took = start.elapsed();
        self.check(took < limit, || format!("runtime {took:?} exceeds {limit:?}"));
    }

    fn finish(self) {
        if self.failures.is_empty() {
            println!("[PASS] {} ({} checks)", self.label, self.checks);
        } else {
            println!(
                "[FAIL] {} ({} of {} checks failed): {}",
                self.label,
                self.failures.len(),
                self.checks,
                self.failures.join("; ")
            );
            panic!("{} failed", self.label);
        }
    }
}

fn ifs(name: &str) -> IfsSystem {
    preset(name).unwrap_or_else(|e| panic!("preset {name}: {e}"))
}

fn rows(m: &RealMatrix) -> Vec<Vec<f64>> {
    m.to_rows()
}

#[test]
fn criterion_1_matrix_identities() {
    let mut gate = Gate::new("criterion 1: matrix identities for n = 1..10");
    let start = Instant::now();
    for n in 1..=10 {
        let u = u_matrix::<f64>(n).unwrap();
        let uu = &u * &u.transpose();
        let r = uu.max_abs_diff(&RealMatrix::identity(u.dim()));
        gate.check(r <= MATRIX_TOL, || format!("U_{n} unitarity residual {r:.2e}"));
        let f = f_matrix::<f64>(n).unwrap();
        let r = (&f * &f).max_abs_diff(&RealMatrix::identity(f.dim()));
        gate.check(r <= MATRIX_TOL, || format!("F_{n}^2 residual {r:.2e}"));
        let r = f.max_abs_diff(&f.transpose());
        gate.check(r <= MATRIX_TOL, || format!("F_{n} self-adjointness residual {r:.2e}"));
        let eps = grading::<f64>(n).unwrap();
        let r = f.anticommutator(&eps).max_abs();
        gate.check(r <= MATRIX_TOL, || format!("F_{n} grading anticommutator {r:.2e}"));
    }
    let g2 = g_matrix(2).unwrap().to_rows();
    gate.check(g2 == vec![vec![1, -1], vec![1, 1]], || format!("G_2 = {g2:?}"));
    let g3 = g_matrix(3).unwrap().to_rows();
    let printed_g3 = vec![
        vec![1, -1, 0, -1],
        vec![1, 1, -1, 0],
        vec![0, 1, 1, -1],
        vec![1, 0, 1, 1],
    ];
    gate.check(g3 == printed_g3, || format!("G_3 = {g3:?}"));
    let s = 1.0 / 2f64.sqrt();
    let printed_u2 = DenseMatrix::from_rows(vec![vec![s, -s], vec![s, s]]).unwrap();
    let r = u_matrix::<f64>(2).unwrap().max_abs_diff(&printed_u2);
    gate.check(r <= MATRIX_TOL, || format!("U_2 differs by {r:.2e}"));
    let f1 = rows(&f_matrix::<f64>(1).unwrap());
    gate.check(f1 == vec![vec![0.0, 1.0], vec![1.0, 0.0]], || format!("F_1 = {f1:?}"));
    gate.runtime(start, RUNTIME_MATRIX);
    gate.finish();
}

#[test]
fn criterion_2_clifford_suite() {
    let mut gate = Gate::new("criterion 2: Clifford relations and volume element");
    let start = Instant::now();
    for n in 1..=8 {
        let r = clifford_check(n).unwrap().max_residual;
        gate.check(r <= CLIFFORD_TOL, || format!("n = {n}: anticommutator residual {r:.2e}"));
    }
    for n in 1..=6 {
        for e in [1.0, 1.0 / 3.0, 3.0] {
            let abs = volume_element_abs(n, e).unwrap();
            let want = e.powi(n as i32) / (n as f64).powf(n as f64 / 2.0);
            let r = abs.max_abs_diff(&RealMatrix::scalar(1 << n, want));
            gate.check(r <= VOLUME_TOL, || format!("n = {n}, e = {e}: residual {r:.2e}"));
        }
    }
    gate.runtime(start, RUNTIME_CLIFFORD);
    gate.finish();
}

#[test]
fn criterion_3_two_path_commutator() {
    let mut gate = Gate::new("criterion 3: direct vs Hadamard commutator on 100 random functions per n <= 8");
    let mut rng = ChaCha8Rng::seed_from_u64(20_240_601);
    for n in 1..=8 {
        let mut worst = 0.0f64;
        for _ in 0..100 {
            let f = VertexFunction::new(
                (0..1 << n)
                    .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                    .collect(),
            );
            let a = commutator_direct(n, &f).unwrap();
            let b = commutator_hadamard(n, &f).unwrap();
            worst = worst.max(a.max_abs_diff(&b));
        }
        gate.check(worst <= TWO_PATH_TOL, || format!("n = {n}: max deviation {worst:.2e}"));
    }
    gate.finish();
}

fn check_dixmier(gate: &mut Gate, name: &str, want_dim: f64, want_trace: f64) {
    let k = ifs(name);
    let d = similarity_dimension(&k);
    gate.within_rel(&format!("{name} dim_s"), d, want_dim, FORMULA_REL_TOL);
    let t = dixmier_trace_dirac(&k, d).unwrap().value;
    gate.within_rel(&format!("{name} Dixmier trace"), t, want_trace, FORMULA_REL_TOL);
    let limit = dixmier_residue_limit(&k, d).unwrap();
    let at_smallest = limit.samples.last().unwrap().1;
    gate.within_rel(&format!("{name} residue limit at z-1 = 1e-6"), at_smallest, t, RESIDUE_REL_TOL);
    gate.within_rel(&format!("{name} extrapolated residue"), limit.extrapolated, t, RESIDUE_REL_TOL);
}

#[test]
fn criterion_4_dixmier_reproduction() {
    let mut gate = Gate::new("criterion 4: Dixmier traces, dimensions and zeta values");
    let log3 = 3f64.ln();
    check_dixmier(&mut gate, "cantor_set", LN_2 / log3, 2.0 / LN_2);
    gate.within_rel("cantor_set Dixmier decimal", 2.0 / LN_2, 2.885390, 1e-6);
    for n in [2, 3] {
        let nf = n as f64;
        check_dixmier(
            &mut gate,
            &format!("cantor_dust({n})"),
            nf * LN_2 / log3,
            2f64.powi(n) / (nf * LN_2),
        );
    }
    check_dixmier(&mut gate, "sierpinski_carpet", 8f64.ln() / log3, 4.0 / 8f64.ln());
    check_dixmier(&mut gate, "menger_sponge", 20f64.ln() / log3, 8.0 / 20f64.ln());
    check_dixmier(&mut gate, "rotation", 4.0 / 3.0, 2.0 / LN_2);

    let k = ifs("non_osc");
    let moran = |s: f64| 4.0 * 3f64.powf(-s) + (2.0f64 / 3.0).powf(s);
    gate.check(moran(1.8) > 1.0 && moran(1.9) < 1.0, || {
        "bracket (1.8, 1.9) does not enclose the root".into()
    });
    let s = similarity_dimension(&k);
    let residual = (moran(s) - 1.0).abs();
    gate.check(residual <= MORAN_RESIDUAL_TOL && s > 1.8 && s < 1.9, || {
        format!("non_osc dim_s = {s}, residual {residual:.2e}")
    });
    for p in [2.0f64, 2.5] {
        let want = 4.0 * 3f64.powf(p) / (3f64.powf(p) - 2f64.powf(p) - 4.0);
        let got = zeta_closed(&k, p).unwrap().value;
        gate.within_rel(&format!("non_osc zeta at p = {p}"), got, want, FORMULA_REL_TOL);
    }
    gate.finish();
}

/// Stated quantized volume of the rotation example. The exact evaluation
/// gives `2^{-2/3} · 2/log 2 = 2^{1/3}/log 2 ≈ 1.8177`, not `√2/log 2 ≈ 2.0403`;
/// this check is kept as stated and is expected to fail.
#[test]
fn criterion_4_rotation_quantized_volume() {
    let mut gate = Gate::new("criterion 4: rotation quantized volume equals sqrt(2)/log 2");
    let k = ifs("rotation");
    let d = similarity_dimension(&k);
    let q = quantized_volume(&k, d / 2.0).unwrap().value;
    gate.within_rel("rotation quantized volume", q, 2f64.sqrt() / LN_2, FORMULA_REL_TOL);
    gate.finish();
}

const OSC_PRESETS: &[&str] = &[
    "cantor_set",
    "cantor_dust(2)",
    "cantor_dust(3)",
    "lifted_cantor",
    "sierpinski_carpet",
    "menger_sponge",
    "lifted_carpet",
    "rotation",
];

#[test]
fn criterion_5_truncation_convergence() {
    let mut gate = Gate::new("criterion 5: truncated zeta within the geometric tail bound");
    let start = Instant::now();
    for name in OSC_PRESETS {
        let k = ifs(name);
        assert!(k.osc(), "{name} should carry the OSC flag");
        let p = similarity_dimension(&k) + 0.2;
        let closed = zeta_closed(&k, p).unwrap().value;
        for depth in [5, 10, 15] {
            let r = zeta_truncated(&k, p, depth, DEFAULT_WORD_BUDGET).unwrap();
            let bound = r.error_bound.unwrap();
            let diff = (r.value - closed).abs();
            gate.check(diff <= bound * (1.0 + TAIL_SLACK), || {
                format!("{name}, J = {depth}: |diff| = {diff:.6e} > bound {bound:.6e}")
            });
        }
    }
    gate.runtime(start, RUNTIME_TRUNCATION);
    gate.finish();
}

#[test]
fn criterion_6_rotated_volume_blocks() {
    let mut gate = Gate::new("criterion 6: rotation blocks |B1 B2| = (e_w^2/2) I at depth <= 4");
    let k = ifs("rotation");
    let p = similarity_dimension(&k) / 2.0;
    let v = quantized_volume_truncated(&k, p, 4, DEFAULT_WORD_BUDGET).unwrap();
    gate.check(v.blocks == 341, || format!("visited {} blocks, want 341", v.blocks));
    let r = v.max_block_residual;
    gate.check(r <= BLOCK_TOL, || format!("max block residual {r:.2e}"));
    gate.finish();
}

#[test]
fn criterion_7_index_pairings() {
    let mut gate = Gate::new("criterion 7: index pairings and nonvanishing certificates");
    let cs = ifs("cantor_set");
    for k in 1..=6u32 {
        let depth = k as usize + 3;
        let r = index_pairing(&cs, &ProjectionSpec::cantor_initial(k), depth, 3, DEFAULT_WORD_BUDGET)
            .unwrap();
        gate.check(r.value == k as i64 && r.stabilized, || {
            format!("p_{k}: value {} stabilized {}", r.value, r.stabilized)
        });
        let g = connes_gap_pairing(k, depth as u32, DEFAULT_WORD_BUDGET).unwrap();
        gate.check(g.value == 1, || format!("gap pairing for p_{k} = {}", g.value));
    }
    let dust = nonvanish_certificate(&ifs("cantor_dust(2)"), 4, DEFAULT_WORD_BUDGET).unwrap();
    gate.check(
        dust.as_ref().is_some_and(|c| c.d0 != c.d1 && c.consistent()),
        || format!("cantor_dust(2) certificate {dust:?}"),
    );
    for name in ["sierpinski_carpet", "menger_sponge"] {
        let c = nonvanish_certificate(&ifs(name), 2, DEFAULT_WORD_BUDGET).unwrap();
        gate.check(c.is_none(), || format!("{name} unexpectedly has a certificate"));
    }
    let lifted = nonvanish_certificate(&ifs("lifted_carpet"), 3, DEFAULT_WORD_BUDGET).unwrap();
    gate.check(
        lifted.as_ref().is_some_and(|c| c.d0 != c.d1 && c.consistent()),
        || format!("lifted_carpet certificate {lifted:?}"),
    );
    gate.finish();
}

#[test]
fn criterion_8_spectral_dimension_slope() {
    let mut gate = Gate::new("criterion 8: counting-function slope near dim_s");
    let lambdas: Vec<f64> = (3..=10).map(|k| 3f64.powi(k)).collect();
    for name in ["cantor_set", "sierpinski_carpet"] {
        let k = ifs(name);
        let slope = counting_slope(&k, 10, &lambdas).unwrap();
        let d = similarity_dimension(&k);
        gate.check((slope - d).abs() <= SLOPE_TOL, || {
            format!("{name}: slope {slope:.4} vs dim_s {d:.4}")
        });
    }
    gate.finish();
}

#[test]
fn criterion_9_measure_factorization() {
    let mut gate = Gate::new("criterion 9: weighted functional factorizes through the Hausdorff measure");
    let cs = ifs("cantor_set");
    let spec = QuadratureSpec::deterministic(12);
    let x = |v: &[f64]| v[0];
    let mean = integrate_hausdorff(&cs, &x, &spec, DEFAULT_WORD_BUDGET).unwrap();
    gate.check((mean - 0.5).abs() <= QUADRATURE_TOL, || format!("integral of x = {mean}"));
    let d = similarity_dimension(&cs);
    let w = weighted_functional(&cs, &x, d, &spec, DEFAULT_WORD_BUDGET).unwrap();
    let diff = (w.report.value - w.prediction).abs();
    gate.check(diff <= FACTORIZATION_TOL, || {
        format!("functional {} vs prediction {} (diff {diff:.2e})", w.report.value, w.prediction)
    });
    let oracle = 2.0 / LN_2 * 0.5;
    let err = (w.prediction - oracle).abs();
    gate.check(err <= FACTORIZATION_TOL, || format!("prediction {} vs 1/log 2", w.prediction));
    gate.finish();
}
