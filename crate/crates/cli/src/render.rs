//! SVG figures of the first construction steps.

use std::fmt::Write as _;

use fractal_dirac::cube::directed_edges;
use fractal_dirac::ifs::{enumerate_words, IfsSystem, PlacedCube};
use fractal_dirac::Result;

const MARGIN: f64 = 24.0;

pub struct Figure {
    pub svg: String,
    /// Cubes drawn at each level `0..=J`.
    pub per_level: Vec<usize>,
    pub warnings: Vec<String>,
}

/// Placed cubes of levels `0..=depth` as nested outlines; even vertices are
/// filled dots, odd ones hollow, and the root edges carry their orientation.
/// Systems with `n > 2` are projected onto the first two axes; the bottom
/// face `v_0 v_1 v_2 v_3` is outlined.
pub fn render(ifs: &IfsSystem, depth: usize, size: f64, budget: u64) -> Result<Figure> {
    let n = ifs.n();
    let mut warnings = Vec::new();
    if n > 2 {
        warnings.push(format!(
            "n = {n}: projecting onto the first two axes, outlines show the bottom face"
        ));
    }
    let cubes: Vec<PlacedCube> = enumerate_words(ifs, depth, budget)?.collect();
    let mut per_level = vec![0usize; depth + 1];
    for c in &cubes {
        per_level[c.word.len()] += 1;
    }

    let scale = size - 2.0 * MARGIN;
    // In one dimension every level gets its own horizontal band.
    let band = 1.0 / (depth as f64 + 1.0);
    let to_px = |x: &[f64], level: usize| -> (f64, f64) {
        let y = if n == 1 {
            1.0 - (level as f64 + 0.5) * band
        } else {
            x[1]
        };
        (MARGIN + scale * x[0], MARGIN + scale * (1.0 - y))
    };

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">"#
    );
    let _ = writeln!(svg, "<title>{} levels 0..={depth}</title>", escape(ifs.label()));
    svg.push_str(concat!(
        "<defs><marker id=\"arrow\" viewBox=\"0 0 10 10\" refX=\"10\" refY=\"5\" ",
        "markerWidth=\"7\" markerHeight=\"7\" orient=\"auto-start-reverse\">",
        "<path d=\"M 0 0 L 10 5 L 0 10 z\" fill=\"#b22222\"/></marker></defs>\n",
    ));
    let _ = writeln!(svg, r#"<rect width="{size}" height="{size}" fill="white"/>"#);

    for level in 0..=depth {
        let grey = 40 + (160 * level / (depth + 1)) as u32;
        let width = (2.0 / (level as f64 + 1.0)).max(0.4);
        let _ = writeln!(
            svg,
            r#"<g class="level-{level}" fill="none" stroke="rgb({grey},{grey},{grey})" stroke-width="{width:.3}">"#
        );
        for c in cubes.iter().filter(|c| c.word.len() == level) {
            let v = c.vertices();
            let corners: Vec<(f64, f64)> = if n == 1 {
                let (x0, y0) = to_px(&v[0], level);
                let (x1, _) = to_px(&v[1], level);
                let h = 0.3 * band * scale;
                vec![(x0, y0 - h), (x1, y0 - h), (x1, y0 + h), (x0, y0 + h)]
            } else {
                v[..4].iter().map(|x| to_px(x, level)).collect()
            };
            let points: Vec<String> = corners.iter().map(|(x, y)| format!("{x:.3},{y:.3}")).collect();
            let _ = writeln!(svg, r#"<polygon data-word="{}" points="{}"/>"#, c.word, points.join(" "));
        }
        svg.push_str("</g>\n");
    }

    svg.push_str("<g class=\"vertices\" stroke=\"black\" stroke-width=\"0.6\">\n");
    for c in &cubes {
        let radius = (0.035 * c.edge() * scale).clamp(0.8, 5.0);
        for (i, x) in c.vertices().iter().enumerate() {
            let (px, py) = to_px(x, c.word.len());
            let fill = if i % 2 == 0 { "black" } else { "white" };
            let _ = writeln!(svg, r#"<circle cx="{px:.3}" cy="{py:.3}" r="{radius:.3}" fill="{fill}"/>"#);
        }
    }
    svg.push_str("</g>\n");

    svg.push_str("<g class=\"orientation\" stroke=\"#b22222\" stroke-width=\"1.5\" marker-end=\"url(#arrow)\">\n");
    let root = unit_vertices_of(&cubes);
    let inset = 7.0;
    for (a, b) in directed_edges(n) {
        let (ax, ay) = to_px(&root[a], 0);
        let (bx, by) = to_px(&root[b], 0);
        let len = ((bx - ax).powi(2) + (by - ay).powi(2)).sqrt();
        if len <= 2.0 * inset {
            // edge collapses under the projection
            continue;
        }
        let (ux, uy) = ((bx - ax) / len, (by - ay) / len);
        let _ = writeln!(
            svg,
            r#"<line x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}"/>"#,
            ax + inset * ux,
            ay + inset * uy,
            bx - inset * ux,
            by - inset * uy
        );
    }
    svg.push_str("</g>\n</svg>\n");

    Ok(Figure {
        svg,
        per_level,
        warnings,
    })
}

fn unit_vertices_of(cubes: &[PlacedCube]) -> Vec<Vec<f64>> {
    // enumeration starts at the root
    cubes[0].vertices()
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
