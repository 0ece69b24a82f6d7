//! Command-line front end: argument parsing, report documents, SVG figures.

pub mod args;
pub mod render;
pub mod report;

use std::fs;
use std::path::PathBuf;

use fractal_dirac::calculus::{
    clifford_check, commutator_direct, commutator_hadamard, volume_element_abs, VertexFunction,
};
use fractal_dirac::cube::{f_matrix, g_matrix, unitarity_residual};
use fractal_dirac::ifs::{level_one_components, preset, similarity_dimension, vertex_closure_check, IfsSystem};
use fractal_dirac::index::{
    certificate_from, connes_gap_pairing, index_pairing, nonvanish_certificate, ProjectionSpec,
};
use fractal_dirac::spectral::{
    dixmier_residue_limit, dixmier_trace_dirac, integrate_hausdorff, quantized_volume,
    weighted_functional, zeta_closed, zeta_truncated, QuadratureSpec,
};
use fractal_dirac::{Complex64, Error, RealMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use args::{AnalyzeArgs, Cli, Command, Format, IntegrateArgs, Mode, PairingArgs, RenderArgs, Source, VerifyArgs};
use report::{
    to_json, AnalyzeReport, ChaosEstimate, Check, Header, IntegrateReport, PairingReport,
    VerifyReport,
};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] Error),
    #[error("{0}")]
    Input(String),
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Core(e) => e.kind(),
            CliError::Input(_) => "invalid_input",
        }
    }

    /// 3 when the word budget ran out, 2 for everything the user can fix.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(Error::BudgetExceeded { .. }) => 3,
            _ => 2,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::json!({ "error": self.kind(), "message": self.to_string() }).to_string()
    }
}

/// Result of a command, not yet written anywhere.
#[derive(Debug)]
pub struct Outcome {
    pub body: String,
    pub out: Option<PathBuf>,
    pub warnings: Vec<String>,
    /// False only when `verify` found a violation.
    pub success: bool,
}

impl Outcome {
    fn document(body: String, out: Option<PathBuf>) -> Self {
        Outcome {
            body,
            out,
            warnings: Vec::new(),
            success: true,
        }
    }
}

pub fn execute(cli: &Cli) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Analyze(a) => analyze(a),
        Command::Render(a) => render_cmd(a),
        Command::Verify(a) => verify(a),
        Command::Pairing(a) => pairing(a),
        Command::Integrate(a) => integrate(a),
    }
}

fn read(path: &std::path::Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| {
        Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))).into()
    })
}

pub fn load(source: &Source, assume_osc: bool) -> Result<IfsSystem, CliError> {
    let ifs = match (&source.preset, &source.file) {
        (Some(name), None) => preset(name)?,
        (None, Some(path)) => IfsSystem::from_json(&read(path)?)?,
        _ => return Err(CliError::Input("give exactly one of --preset and --file".into())),
    };
    Ok(if assume_osc { ifs.with_osc(true) } else { ifs })
}

fn format_doc<T: Serialize>(
    doc: &T,
    format: Format,
    text: impl FnOnce(&T) -> String,
    csv: impl FnOnce(&T) -> Result<String, CliError>,
) -> Result<String, CliError> {
    match format {
        Format::Json => to_json(doc),
        Format::Csv => csv(doc),
        Format::Text => Ok(text(doc)),
    }
}

/// Keeps going when a quantity is undefined for this input and records why.
fn soft<T>(r: fractal_dirac::Result<T>, notes: &mut Vec<String>, what: &str) -> Result<Option<T>, CliError> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(e @ (Error::Divergent { .. } | Error::BelowCritical { .. })) => {
            notes.push(format!("{what}: {e}"));
            Ok(None)
        }
        Err(e) => Err(e.into()),
    }
}

pub fn analyze_report(a: &AnalyzeArgs) -> Result<AnalyzeReport, CliError> {
    let ifs = load(&a.source, a.run.assume_osc)?;
    let budget = a.run.budget;
    let d = similarity_dimension(&ifs);
    let p = a.exponent.resolve(d);
    let mut header = Header::new("analyze", &ifs, a.depth, a.run.seed, budget);
    header.exponent = Some(p);

    let mut notes = Vec::new();
    let mut traces = Vec::new();
    traces.extend(soft(zeta_closed(&ifs, p), &mut notes, "zeta_closed")?);
    traces.push(zeta_truncated(&ifs, p, a.depth, budget)?);
    traces.extend(soft(dixmier_trace_dirac(&ifs, d), &mut notes, "dixmier_dirac")?);
    traces.extend(soft(quantized_volume(&ifs, d / ifs.n() as f64), &mut notes, "quantized_volume")?);
    if !ifs.osc() {
        notes.push("no open set condition: dim_s is only an upper bound for the Hausdorff dimension".into());
    }

    let components = level_one_components(&ifs);
    let certificate = certificate_from(&ifs, &components, a.depth, budget)?;
    Ok(AnalyzeReport {
        header,
        dim_s: d,
        vertex_closure: vertex_closure_check(&ifs),
        components,
        traces,
        notes,
        certificate,
    })
}

fn analyze(a: &AnalyzeArgs) -> Result<Outcome, CliError> {
    let r = analyze_report(a)?;
    let body = format_doc(&r, a.output.format, AnalyzeReport::text, AnalyzeReport::csv)?;
    Ok(Outcome::document(body, a.output.out.clone()))
}

fn render_cmd(a: &RenderArgs) -> Result<Outcome, CliError> {
    if !(a.size.is_finite() && a.size > 100.0) {
        return Err(CliError::Input("--size must exceed 100 pixels".into()));
    }
    let ifs = load(&a.source, a.run.assume_osc)?;
    let fig = render::render(&ifs, a.depth, a.size, a.run.budget)?;
    let mut outcome = Outcome::document(fig.svg, a.out.clone());
    outcome.warnings = fig.warnings;
    Ok(outcome)
}

fn pairing(a: &PairingArgs) -> Result<Outcome, CliError> {
    let ifs = load(&a.source, a.run.assume_osc)?;
    let budget = a.run.budget;
    let header = Header::new("pairing", &ifs, a.depth, a.run.seed, budget);
    let projection = match (&a.projection, a.k) {
        (Some(path), _) => Some(ProjectionSpec::from_json(&read(path)?)?),
        (None, Some(k)) => Some(ProjectionSpec::cantor_initial(k)),
        (None, None) => None,
    };
    let report = match projection {
        Some(proj) => {
            let index = index_pairing(&ifs, &proj, a.depth, a.window, budget)?;
            let connes_gap = match a.k {
                Some(k) if ifs.n() == 1 => Some(connes_gap_pairing(k, a.depth as u32, budget)?),
                _ => None,
            };
            PairingReport {
                header,
                projection: Some(proj),
                index: Some(index),
                connes_gap,
                components: None,
                certificate: None,
            }
        }
        None => {
            let components = level_one_components(&ifs);
            let certificate = certificate_from(&ifs, &components, a.depth, budget)?;
            PairingReport {
                header,
                projection: None,
                index: None,
                connes_gap: None,
                components: Some(components),
                certificate,
            }
        }
    };
    let body = format_doc(&report, a.output.format, PairingReport::text, PairingReport::csv)?;
    Ok(Outcome::document(body, a.output.out.clone()))
}

fn integrate(a: &IntegrateArgs) -> Result<Outcome, CliError> {
    let ifs = load(&a.source, a.run.assume_osc)?;
    if let args::Integrand::Coordinate(k) = a.function {
        if k > ifs.n() {
            return Err(CliError::Input(format!("x{k} is not a coordinate of a {}-dimensional system", ifs.n())));
        }
    }
    let budget = a.run.budget;
    let d = similarity_dimension(&ifs);
    let p = a.exponent.resolve(d);
    let f = |x: &[f64]| a.function.eval(x);
    let mut header = Header::new("integrate", &ifs, a.depth, a.run.seed, budget);
    header.exponent = Some(p);

    let mut det = QuadratureSpec::deterministic(a.depth);
    det.assume_osc = a.run.assume_osc;
    let deterministic = match a.mode {
        Mode::Deterministic | Mode::Both => Some(integrate_hausdorff(&ifs, &f, &det, budget)?),
        Mode::ChaosGame => None,
    };
    let chaos_game = match a.mode {
        Mode::ChaosGame | Mode::Both => {
            let mut spec = QuadratureSpec::chaos_game(a.depth, a.samples, a.run.seed);
            spec.assume_osc = a.run.assume_osc;
            Some(ChaosEstimate {
                samples: a.samples,
                value: integrate_hausdorff(&ifs, &f, &spec, budget)?,
                tolerance: 3.0 / (a.samples as f64).sqrt(),
            })
        }
        Mode::Deterministic => None,
    };
    let w = weighted_functional(&ifs, &f, p, &det, budget)?;
    let report = IntegrateReport {
        header,
        function: a.function.to_string(),
        dim_s: d,
        deterministic,
        chaos_game,
        weighted: Some(w.report),
        prediction: Some(w.prediction),
    };
    let body = format_doc(&report, a.output.format, IntegrateReport::text, IntegrateReport::csv)?;
    Ok(Outcome::document(body, a.output.out.clone()))
}

const UNITARITY_TOL: f64 = 1e-12;
const INVOLUTION_TOL: f64 = 1e-12;
const CLIFFORD_TOL: f64 = 1e-11;
const TWO_PATH_TOL: f64 = 1e-12;
const VOLUME_TOL: f64 = 1e-11;
const TAIL_SLACK: f64 = 1e-9;
const RESIDUE_REL_TOL: f64 = 1e-4;
const TRACE_DEPTH: usize = 12;
const OSC_PRESETS: [&str; 5] = ["cantor_set", "cantor_dust(2)", "sierpinski_carpet", "menger_sponge", "rotation"];

pub fn verify_report(a: &VerifyArgs) -> Result<VerifyReport, CliError> {
    let max_n = a.max_n as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let mut checks = Vec::new();

    let mut worst = 0.0f64;
    for n in 1..=max_n {
        let mut g = g_matrix(n)?;
        if a.inject_fault && n == 3 {
            g.set(0, 0, -g.get(0, 0));
        }
        worst = worst.max(unitarity_residual(&g, n));
    }
    checks.push(Check::at_most("unitarity", format!("max |U U* - I|, n <= {max_n}"), worst, UNITARITY_TOL));

    let mut worst = 0.0f64;
    for n in 1..=max_n.min(7) {
        let f: RealMatrix = f_matrix(n)?;
        let id = RealMatrix::identity(f.dim());
        worst = worst.max((&f * &f).max_abs_diff(&id)).max(f.max_abs_diff(&f.transpose()));
    }
    checks.push(Check::at_most(
        "involution",
        format!("max |F^2 - I|, |F - F*|, n <= {}", max_n.min(7)),
        worst,
        INVOLUTION_TOL,
    ));

    let mut worst = 0.0f64;
    for n in 1..=max_n {
        worst = worst.max(clifford_check(n)?.max_residual);
    }
    checks.push(Check::at_most(
        "clifford",
        format!("max |e^a e^b + e^b e^a + 2 delta I|, n <= {max_n}"),
        worst,
        CLIFFORD_TOL,
    ));

    let mut worst = 0.0f64;
    let two_path_n = max_n.min(6);
    for n in 1..=two_path_n {
        for _ in 0..4 {
            let values = (0..1usize << n)
                .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect();
            let f = VertexFunction::new(values);
            let direct = commutator_direct(n, &f)?;
            worst = worst.max(direct.max_abs_diff(&commutator_hadamard(n, &f)?));
        }
    }
    checks.push(Check::at_most(
        "two_path",
        format!("max |[F,f] - Hadamard form|, n <= {two_path_n}"),
        worst,
        TWO_PATH_TOL,
    ));

    let mut worst = 0.0f64;
    let volume_n = max_n.min(6);
    for n in 1..=volume_n {
        for e in [1.0f64, 1.0 / 3.0, 3.0] {
            let want = e.powi(n as i32) / (n as f64).powf(n as f64 / 2.0);
            let got = volume_element_abs(n, e)?;
            worst = worst.max(got.max_abs_diff(&RealMatrix::scalar(got.dim(), want)));
        }
    }
    checks.push(Check::at_most(
        "volume_element",
        format!("max ||w| - e^n n^(-n/2) I|, n <= {volume_n}"),
        worst,
        VOLUME_TOL,
    ));

    let mut worst = 0.0f64;
    for name in OSC_PRESETS.iter().chain(&["non_osc"]) {
        let k = preset(name)?;
        let p = similarity_dimension(&k) + 0.25;
        let closed = zeta_closed(&k, p)?.value;
        let r = zeta_truncated(&k, p, TRACE_DEPTH, a.budget)?;
        let bound = r.error_bound.unwrap_or(0.0);
        worst = worst.max((closed - r.value) / bound);
        if r.value > closed * (1.0 + 1e-12) {
            worst = f64::INFINITY;
        }
    }
    checks.push(Check::at_most(
        "trace_tail",
        format!("max (zeta - zeta_J) / tail bound, J = {TRACE_DEPTH}"),
        worst,
        1.0 + TAIL_SLACK,
    ));

    let mut worst = 0.0f64;
    for name in OSC_PRESETS {
        let k = preset(name)?;
        let d = similarity_dimension(&k);
        let exact = dixmier_trace_dirac(&k, d)?.value;
        let limit = dixmier_residue_limit(&k, d)?.extrapolated;
        worst = worst.max(((limit - exact) / exact).abs());
    }
    checks.push(Check::at_most(
        "dixmier_residue",
        "max relative |residue limit - closed form|",
        worst,
        RESIDUE_REL_TOL,
    ));

    let cantor = preset("cantor_set")?;
    let mut mismatches = 0u32;
    for k in 1..=4u32 {
        let depth = k as usize + 3;
        let r = index_pairing(&cantor, &ProjectionSpec::cantor_initial(k), depth, 3, a.budget)?;
        mismatches += u32::from(r.value != i64::from(k) || !r.stabilized);
        mismatches += u32::from(connes_gap_pairing(k, depth as u32, a.budget)?.value != 1);
    }
    let dust = nonvanish_certificate(&preset("cantor_dust(2)")?, 4, a.budget)?;
    mismatches += u32::from(!dust.is_some_and(|c| c.d0 != c.d1 && c.consistent()));
    checks.push(Check::at_most(
        "pairing",
        "wrong pairings (cantor p_k, gaps, dust certificate)",
        f64::from(mismatches),
        0.0,
    ));

    Ok(VerifyReport::new(a.max_n, a.seed, checks))
}

fn verify(a: &VerifyArgs) -> Result<Outcome, CliError> {
    let r = verify_report(a)?;
    let body = format_doc(&r, a.output.format, VerifyReport::text, VerifyReport::csv)?;
    let mut outcome = Outcome::document(body, a.output.out.clone());
    outcome.success = r.passed;
    Ok(outcome)
}

/// Writes the document and returns the process exit code.
pub fn emit(outcome: &Outcome) -> Result<i32, CliError> {
    match &outcome.out {
        Some(path) => fs::write(path, &outcome.body).map_err(Error::from)?,
        None => print!("{}", outcome.body),
    }
    for w in &outcome.warnings {
        eprintln!("warning: {w}");
    }
    Ok(if outcome.success { 0 } else { 1 })
}
