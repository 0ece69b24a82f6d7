//! Report documents. Every document serializes deterministically (field
//! order is declaration order, floats use shortest round-trip form), so equal
//! inputs give byte-identical output.

use std::fmt::Write as _;

use fractal_dirac::ifs::{ComponentReport, IfsSystem};
use fractal_dirac::index::{Certificate, GapPairing, IndexReport, ProjectionSpec};
use fractal_dirac::spectral::{reports_to_csv, TraceReport};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Header {
    pub command: String,
    pub version: String,
    pub ifs: String,
    pub n: usize,
    pub maps: usize,
    pub osc: bool,
    pub depth: usize,
    /// Resolved exponent, when the command uses one.
    pub exponent: Option<f64>,
    pub seed: u64,
    pub budget: u64,
}

impl Header {
    pub fn new(command: &str, ifs: &IfsSystem, depth: usize, seed: u64, budget: u64) -> Self {
        Header {
            command: command.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            ifs: ifs.label().to_string(),
            n: ifs.n(),
            maps: ifs.len(),
            osc: ifs.osc(),
            depth,
            exponent: None,
            seed,
            budget,
        }
    }

    fn text(&self, out: &mut String) {
        let _ = writeln!(out, "# {} {}", self.command, self.ifs);
        let _ = writeln!(
            out,
            "n = {}, maps = {}, osc = {}, depth = {}, seed = {}, budget = {}",
            self.n, self.maps, self.osc, self.depth, self.seed, self.budget
        );
        if let Some(p) = self.exponent {
            let _ = writeln!(out, "p = {p}");
        }
    }
}

pub fn to_json<T: Serialize>(doc: &T) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(doc).map_err(fractal_dirac::Error::from)?;
    s.push('\n');
    Ok(s)
}

fn table<R: Serialize>(rows: impl IntoIterator<Item = R>) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(fractal_dirac::Error::from)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| fractal_dirac::Error::Io(std::io::Error::other(e.to_string())))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

fn trace_line(out: &mut String, r: &TraceReport) {
    let name = serde_json::to_value(r.quantity).expect("quantity serializes");
    let _ = write!(out, "{:<20} p = {:<22} value = {}", name.as_str().unwrap_or(""), r.p, r.value);
    if let Some(j) = r.depth {
        let _ = write!(out, "  (depth {j}");
        if let Some(b) = r.error_bound {
            let _ = write!(out, ", tail <= {b}");
        }
        out.push(')');
    }
    out.push('\n');
}

fn components_text(out: &mut String, c: &ComponentReport) {
    let _ = writeln!(out, "components: {}", c.components.len());
    for (i, comp) in c.components.iter().enumerate() {
        let cubes: Vec<String> = comp.cubes.iter().map(|s| (s + 1).to_string()).collect();
        let _ = writeln!(
            out,
            "  [{i}] maps {{{}}} vertices {:?} d0 = {} d1 = {}",
            cubes.join(", "),
            comp.vertices,
            comp.d0,
            comp.d1
        );
    }
}

fn certificate_text(out: &mut String, c: &Option<Certificate>) {
    match c {
        Some(c) => {
            let _ = writeln!(
                out,
                "certificate: component {} with d0 - d1 = {}, pairing = {} (depth {}, stabilized {}, consistent {})",
                c.component,
                c.d0 as i64 - c.d1 as i64,
                c.pairing.value,
                c.pairing.depth_used,
                c.pairing.stabilized,
                c.consistent()
            );
        }
        None => out.push_str("certificate: none (every component has d0 = d1)\n"),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnalyzeReport {
    pub header: Header,
    pub dim_s: f64,
    pub vertex_closure: bool,
    pub components: ComponentReport,
    pub traces: Vec<TraceReport>,
    /// Quantities that are undefined for this input, with the reason.
    pub notes: Vec<String>,
    pub certificate: Option<Certificate>,
}

impl AnalyzeReport {
    pub fn text(&self) -> String {
        let mut out = String::new();
        self.header.text(&mut out);
        let _ = writeln!(out, "dim_s = {}", self.dim_s);
        let _ = writeln!(out, "vertex closure: {}", self.vertex_closure);
        components_text(&mut out, &self.components);
        for r in &self.traces {
            trace_line(&mut out, r);
        }
        for n in &self.notes {
            let _ = writeln!(out, "note: {n}");
        }
        certificate_text(&mut out, &self.certificate);
        out
    }

    /// The trace table only.
    pub fn csv(&self) -> Result<String, CliError> {
        Ok(reports_to_csv(&self.traces)?)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairingReport {
    pub header: Header,
    pub projection: Option<ProjectionSpec>,
    pub index: Option<IndexReport>,
    pub connes_gap: Option<GapPairing>,
    pub components: Option<ComponentReport>,
    pub certificate: Option<Certificate>,
}

#[derive(Serialize)]
struct DepthRow {
    depth: usize,
    partial_sum: i64,
}

impl PairingReport {
    pub fn text(&self) -> String {
        let mut out = String::new();
        self.header.text(&mut out);
        if let Some(i) = &self.index {
            let _ = writeln!(
                out,
                "index pairing = {} (depth {}, stabilized {})",
                i.value, i.depth_used, i.stabilized
            );
            let _ = writeln!(out, "partial sums: {:?}", i.per_depth);
        }
        if let Some(g) = &self.connes_gap {
            let _ = writeln!(
                out,
                "gap pairing = {} over {} gaps (outer pair {{0, 1}} gives {})",
                g.value, g.gaps, g.boundary
            );
        }
        if let Some(c) = &self.components {
            components_text(&mut out, c);
            certificate_text(&mut out, &self.certificate);
        }
        out
    }

    /// Partial sums by depth of whichever pairing was computed.
    pub fn csv(&self) -> Result<String, CliError> {
        let sums = self
            .index
            .as_ref()
            .or(self.certificate.as_ref().map(|c| &c.pairing))
            .map(|i| i.per_depth.clone())
            .unwrap_or_default();
        table(sums.into_iter().enumerate().map(|(depth, partial_sum)| DepthRow { depth, partial_sum }))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChaosEstimate {
    pub samples: usize,
    pub value: f64,
    /// `3 / sqrt(samples)`, a generous bound for integrands of size O(1).
    pub tolerance: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntegrateReport {
    pub header: Header,
    pub function: String,
    pub dim_s: f64,
    pub deterministic: Option<f64>,
    pub chaos_game: Option<ChaosEstimate>,
    /// Regularised trace `lim (z-1) Tr(f |D|^{-zp})`.
    pub weighted: Option<TraceReport>,
    /// `Tr_ω(|D|^{-p}) ∫ f`, the value the weighted trace should approach.
    pub prediction: Option<f64>,
}

impl IntegrateReport {
    pub fn text(&self) -> String {
        let mut out = String::new();
        self.header.text(&mut out);
        let _ = writeln!(out, "f = {}, dim_s = {}", self.function, self.dim_s);
        if let Some(v) = self.deterministic {
            let _ = writeln!(out, "deterministic quadrature = {v}");
        }
        if let Some(c) = &self.chaos_game {
            let _ = writeln!(out, "chaos game ({} samples) = {} (+/- {})", c.samples, c.value, c.tolerance);
        }
        if let Some(w) = &self.weighted {
            trace_line(&mut out, w);
        }
        if let Some(p) = self.prediction {
            let _ = writeln!(out, "predicted weighted trace = {p}");
        }
        out
    }

    pub fn csv(&self) -> Result<String, CliError> {
        Ok(reports_to_csv(self.weighted.as_slice())?)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    /// What was measured, e.g. `max |U U* - I|, n <= 10`.
    pub measure: String,
    pub value: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl Check {
    pub fn at_most(name: &str, measure: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Check {
            name: name.to_string(),
            measure: measure.into(),
            value,
            tolerance,
            passed: value <= tolerance,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub max_n: u32,
    pub seed: u64,
    pub checks: Vec<Check>,
    pub passed: bool,
}

impl VerifyReport {
    pub fn new(max_n: u32, seed: u64, checks: Vec<Check>) -> Self {
        let passed = checks.iter().all(|c| c.passed);
        VerifyReport {
            max_n,
            seed,
            checks,
            passed,
        }
    }

    pub fn text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let _ = writeln!(
                out,
                "[{}] {:<18} {:<48} {:e} <= {:e}",
                if c.passed { "PASS" } else { "FAIL" },
                c.name,
                c.measure,
                c.value,
                c.tolerance
            );
        }
        let failed = self.checks.iter().filter(|c| !c.passed).count();
        let _ = writeln!(out, "{} checks, {} failed", self.checks.len(), failed);
        out
    }

    pub fn csv(&self) -> Result<String, CliError> {
        table(&self.checks)
    }
}
