use std::path::Path;
use std::process::{Command, Output};

use fractal_dirac_cli::report::{AnalyzeReport, IntegrateReport, PairingReport, VerifyReport};
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fractal-dirac"))
        .args(args)
        .env_remove("FRACTAL_DIRAC_BUDGET")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn trace_value(doc: &Value, quantity: &str) -> f64 {
    doc["traces"]
        .as_array()
        .unwrap()
        .iter()
        .find(|t| t["quantity"] == quantity)
        .unwrap_or_else(|| panic!("no {quantity} in report"))["value"]
        .as_f64()
        .unwrap()
}

#[test]
fn analyze_cantor_dust() {
    let o = run(&["analyze", "--preset", "cantor_dust2", "--depth", "8"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let doc: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let d = doc["dim_s"].as_f64().unwrap();
    assert!((d - 2.0 * 2f64.ln() / 3f64.ln()).abs() <= 1e-11);
    assert!((d - 1.26186).abs() <= 1e-5);
    let dix = trace_value(&doc, "dixmier_dirac");
    assert!((dix - 2.0 / 2f64.ln()).abs() <= 1e-10);
    assert!((dix - 2.88539).abs() <= 1e-5);
    assert_eq!(doc["header"]["exponent"].as_f64(), Some(d));
    assert_eq!(doc["certificate"]["pairing"]["value"], 1);
}

#[test]
fn analyze_menger_sponge() {
    let o = run(&["analyze", "--preset", "menger", "--depth", "4", "-p", "3"]);
    assert!(o.status.success());
    let doc: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let dix = trace_value(&doc, "dixmier_dirac");
    assert!((dix - 8.0 / 20f64.ln()).abs() <= 1e-10 * dix);
    // closed zeta at p = 3 for 20 maps of ratio 1/3
    let closed = trace_value(&doc, "zeta_closed");
    assert!((closed - 8.0 * 27.0 / 7.0).abs() <= 1e-10);
    assert!(doc["certificate"].is_null());
}

#[test]
fn invalid_files_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let skew = dir.path().join("skew.json");
    std::fs::write(
        &skew,
        r#"{"n": 2, "label": "skew", "maps": [{"ratio": 0.5, "matrix": [1, 1, 0, 1], "translation": [0, 0]}]}"#,
    )
    .unwrap();
    let o = run(&["analyze", "--file", skew.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err: Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(err["error"], "not_orthogonal");

    let missing = dir.path().join("missing.json");
    let o = run(&["analyze", "--file", missing.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));

    let o = run(&["analyze", "--preset", "carpet", "--file", skew.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err: Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(err["error"], "usage");
}

#[test]
fn loaded_files_match_presets() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("dust.json");
    let file = fractal_dirac::ifs::preset("cantor_dust(2)").unwrap().to_file();
    std::fs::write(&path, serde_json::to_string(&file).unwrap()).unwrap();
    let p = path.to_str().unwrap();
    let from_file: Value = serde_json::from_str(&stdout(&run(&["analyze", "--file", p, "--depth", "3"]))).unwrap();
    let from_preset: Value =
        serde_json::from_str(&stdout(&run(&["analyze", "--preset", "cantor_dust(2)", "--depth", "3"]))).unwrap();
    assert_eq!(from_file["dim_s"], from_preset["dim_s"]);
    assert_eq!(from_file["traces"], from_preset["traces"]);

    // quadrature needs the open set condition, which files do not claim
    let o = run(&["integrate", "--file", p]);
    assert_eq!(o.status.code(), Some(2));
    assert!(run(&["integrate", "--file", p, "--assume-osc"]).status.success());
}

#[test]
fn budget_exhaustion_exits_with_three() {
    let o = run(&["integrate", "--preset", "menger", "--depth", "6", "--budget", "100000"]);
    assert_eq!(o.status.code(), Some(3));
    let err: Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(err["error"], "budget_exceeded");

    let o = Command::new(env!("CARGO_BIN_EXE_fractal-dirac"))
        .args(["render", "--preset", "carpet", "--depth", "4"])
        .env("FRACTAL_DIRAC_BUDGET", "50")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
}

fn polygons(svg: &str) -> Vec<(String, Vec<(f64, f64)>)> {
    svg.lines()
        .filter(|l| l.starts_with("<polygon"))
        .map(|l| {
            let field = |name: &str| {
                let start = l.find(&format!("{name}=\"")).unwrap() + name.len() + 2;
                let end = start + l[start..].find('"').unwrap();
                l[start..end].to_string()
            };
            let points = field("points")
                .split(' ')
                .map(|p| {
                    let (x, y) = p.split_once(',').unwrap();
                    (x.parse().unwrap(), y.parse().unwrap())
                })
                .collect();
            (field("data-word"), points)
        })
        .collect()
}

#[test]
fn render_cantor_dust_squares() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("dust.svg");
    let o = run(&["render", "--preset", "cantor_dust2", "--depth", "3", "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(o.stderr.is_empty());
    let svg = std::fs::read_to_string(&out).unwrap();
    assert!(svg.starts_with("<svg"));
    assert_eq!(polygons(&svg).len(), 1 + 4 + 16 + 64);
    assert_eq!(svg.matches("<line").count(), 4);
    let dots = |fill: &str| svg.lines().filter(|l| l.starts_with("<circle") && l.contains(fill)).count();
    assert_eq!(dots(r#"fill="black""#), 85 * 2);
    assert_eq!(dots(r#"fill="white""#), 85 * 2);
}

#[test]
fn render_carpet_omits_centre() {
    let o = run(&["render", "--preset", "carpet", "--depth", "1", "--size", "648"]);
    let svg = stdout(&o);
    let squares = polygons(&svg);
    assert_eq!(squares.len(), 9);
    let level_one: Vec<_> = squares.iter().filter(|(w, _)| w != "∅").collect();
    assert_eq!(level_one.len(), 8);
    // 600 px drawing area, so the centre square starts at pixel 24 + 200
    let centre = (224.0, 424.0);
    for (_, pts) in &level_one {
        let (x, y) = pts[0];
        assert!((x - centre.0).abs() > 1.0 || (y - centre.1).abs() > 1.0);
    }
}

#[test]
fn render_rotation_turns_by_theta() {
    let o = run(&["render", "--preset", "rotation", "--depth", "2"]);
    let squares = polygons(&stdout(&o));
    assert_eq!(squares.len(), 1 + 4 + 16);
    let angle = |pts: &[(f64, f64)]| {
        // screen y grows downwards
        let (dx, dy) = (pts[1].0 - pts[0].0, pts[0].1 - pts[1].1);
        dy.atan2(dx)
    };
    let theta = std::f64::consts::FRAC_PI_4;
    for (word, pts) in &squares {
        let level = if word == "∅" { 0 } else { word.split('.').count() };
        let want = theta * level as f64;
        let got = angle(pts);
        let diff = (got - want).rem_euclid(std::f64::consts::TAU);
        assert!(diff.min(std::f64::consts::TAU - diff) < 1e-3, "{word}: {got} vs {want}");
    }
}

#[test]
fn render_projects_higher_dimensions_with_warning() {
    let o = run(&["render", "--preset", "menger", "--depth", "1"]);
    assert!(o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("first two axes"));
}

#[test]
fn verify_passes_by_default() {
    let o = run(&["verify"]);
    assert!(o.status.success());
    let r: VerifyReport = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(r.passed);
    let clifford = r.checks.iter().find(|c| c.name == "clifford").unwrap();
    assert_eq!(clifford.tolerance, 1e-11);
    assert!(clifford.value <= 1e-11);
    assert!(clifford.measure.contains("n <= 8"));
}

#[test]
fn verify_reports_tolerances_in_text() {
    let o = run(&["verify", "--max-n", "3", "--format", "text"]);
    let text = stdout(&o);
    assert_eq!(text.matches("[PASS]").count(), 8);
    assert!(text.contains("<= 1e-11"));
}

#[test]
fn verify_catches_injected_fault() {
    let o = run(&["verify", "--max-n", "3", "--inject-fault"]);
    assert_eq!(o.status.code(), Some(1));
    let r: VerifyReport = serde_json::from_str(&stdout(&o)).unwrap();
    let failed: Vec<_> = r.checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
    assert_eq!(failed, ["unitarity"]);
}

#[test]
fn pairing_with_initial_intervals() {
    for k in 1..=3 {
        let ks = k.to_string();
        let o = run(&["pairing", "--preset", "cantor_set", "--k", &ks, "--depth", "7"]);
        let r: PairingReport = serde_json::from_str(&stdout(&o)).unwrap();
        let index = r.index.unwrap();
        assert_eq!(index.value, k);
        assert!(index.stabilized);
        assert_eq!(r.connes_gap.unwrap().value, 1);
    }
}

#[test]
fn pairing_with_projection_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p.json");
    // neighbourhood of the corner cube f_1([0,1]^2) of the dust
    std::fs::write(
        &path,
        r#"{"regions": [{"lo": [-0.01, -0.01], "hi": [0.34, 0.34], "lo_closed": [true, true], "hi_closed": [true, true]}]}"#,
    )
    .unwrap();
    let o = run(&["pairing", "--preset", "cantor_dust(2)", "--projection", path.to_str().unwrap(), "--depth", "5"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let r: PairingReport = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(r.index.unwrap().value, 1);

    let csv = stdout(&run(&[
        "pairing", "--preset", "cantor_dust(2)", "--projection", path.to_str().unwrap(), "--depth", "2", "--format", "csv",
    ]));
    assert_eq!(csv, "depth,partial_sum\n0,1\n1,1\n2,1\n");
}

#[test]
fn pairing_certificates() {
    let r: PairingReport =
        serde_json::from_str(&stdout(&run(&["pairing", "--preset", "lifted_carpet", "--depth", "3"]))).unwrap();
    let c = r.certificate.unwrap();
    assert_ne!(c.d0, c.d1);
    assert!(c.consistent());
    let r: PairingReport =
        serde_json::from_str(&stdout(&run(&["pairing", "--preset", "carpet", "--depth", "3"]))).unwrap();
    assert!(r.certificate.is_none());
}

#[test]
fn integrate_both_modes() {
    let o = run(&[
        "integrate", "--preset", "cantor_set", "--mode", "both", "--samples", "4000", "--seed", "11", "--depth", "10",
    ]);
    assert!(o.status.success());
    let r: IntegrateReport = serde_json::from_str(&stdout(&o)).unwrap();
    let det = r.deterministic.unwrap();
    assert!((det - 0.5).abs() <= 1e-9);
    let chaos = r.chaos_game.unwrap();
    assert!((chaos.value - det).abs() <= chaos.tolerance);
    assert_eq!(r.header.seed, 11);
    let w = r.weighted.unwrap().value;
    assert!((w - r.prediction.unwrap()).abs() <= 1e-3 * w);
}

#[test]
fn outputs_are_byte_stable() {
    let cases: [&[&str]; 4] = [
        &["analyze", "--preset", "rotation", "--depth", "4", "-p", "1.7"],
        &["integrate", "--preset", "carpet", "--mode", "chaos-game", "--samples", "500", "--seed", "3"],
        &["render", "--preset", "non_osc", "--depth", "2"],
        &["verify", "--max-n", "4", "--seed", "9", "--format", "csv"],
    ];
    for args in cases {
        let a = run(args);
        let b = run(args);
        assert!(a.status.success(), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn json_reports_round_trip() {
    let text = stdout(&run(&["analyze", "--preset", "non_osc", "--depth", "3", "-p", "auto"]));
    let r: AnalyzeReport = serde_json::from_str(&text).unwrap();
    assert!(!r.notes.is_empty());
    let again = fractal_dirac_cli::report::to_json(&r).unwrap();
    assert_eq!(again, text);
    assert_eq!(serde_json::from_str::<AnalyzeReport>(&again).unwrap(), r);
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.csv");
    let o = run(&["analyze", "--preset", "cantor_set", "-p", "1", "--depth", "10", "--format", "csv", "--out", out.to_str().unwrap()]);
    assert!(o.stdout.is_empty());
    let csv = std::fs::read_to_string(Path::new(&out)).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("quantity,p,value,depth,error_bound,dim_s"));
    let truncated = lines.find(|l| l.starts_with("zeta_truncated")).unwrap();
    let value: f64 = truncated.split(',').nth(2).unwrap().parse().unwrap();
    let want = 2.0 * (1.0 - (2f64 / 3.0).powi(11)) * 3.0;
    assert!((value - want).abs() <= 1e-12);
}
