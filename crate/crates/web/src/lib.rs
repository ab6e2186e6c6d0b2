//! Browser demo: draws a carpet from the K(z) family, the harmonic
//! potential between its left and right sides, and a skeleton geodesic.

use std::fmt::Write;

use carpet::convergence::family_kz;
use carpet::geodesic::{build_skeleton, geodesic_estimate};
use carpet::geometry::{boundary_ring, parse_rational, CellLattice, Side};
use carpet::network::{across_resistance, build_cell_network, solve_dirichlet, ConductanceScheme, SolverOptions};
use carpet::{CarpetError, UscSpec};
use serde_json::json;
use wasm_bindgen::prelude::*;

/// Biggest level the page will draw; keeps the solve interactive.
const MAX_CELLS: usize = 40_000;

fn spec_of(name: &str) -> carpet::Result<UscSpec> {
    if name.trim() == "sc" {
        let mut spec = UscSpec::new(3, boundary_ring(3))?;
        spec.canonicalize();
        return Ok(spec);
    }
    family_kz(&parse_rational(name.trim())?)
}

fn lattice(spec: &UscSpec, level: u32) -> carpet::Result<CellLattice> {
    CellLattice::with_budget(spec, level, MAX_CELLS as u64).map_err(|e| match e {
        CarpetError::BudgetExceeded { level, cells, .. } => {
            CarpetError::InvalidParameter(format!("level {level} has {cells} cells; the demo draws at most {MAX_CELLS}"))
        }
        other => other,
    })
}

/// Maps `t ∈ [0, 1]` onto a blue to yellow ramp.
fn ramp(t: f64) -> String {
    let stops = [[48.0, 18.0, 59.0], [33.0, 145.0, 140.0], [253.0, 231.0, 37.0]];
    let t = t.clamp(0.0, 1.0) * 2.0;
    let i = (t as usize).min(1);
    let f = t - i as f64;
    let c: Vec<u8> = (0..3).map(|j| (stops[i][j] + f * (stops[i + 1][j] - stops[i][j])).round() as u8).collect();
    format!("#{:02x}{:02x}{:02x}", c[0], c[1], c[2])
}

fn svg(lat: &CellLattice, size: f64, fill: impl Fn(usize) -> String, overlay: &str) -> String {
    let scale = lat.scale() as f64;
    let side = lat.side() as f64 / scale * size;
    let mut s = format!(r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {size} {size}" width="{size}" height="{size}">"#);
    s.push_str(r##"<rect width="100%" height="100%" fill="#ffffff"/><g shape-rendering="crispEdges">"##);
    for (i, o) in lat.origins().iter().enumerate() {
        let x = o[0] as f64 / scale * size;
        let y = size - o[1] as f64 / scale * size - side;
        let _ = write!(s, r#"<rect x="{x:.3}" y="{y:.3}" width="{side:.3}" height="{side:.3}" fill="{}"/>"#, fill(i));
    }
    s.push_str("</g>");
    s.push_str(overlay);
    s.push_str("</svg>");
    s
}

fn js(e: CarpetError) -> JsError {
    JsError::new(&e.to_string())
}

/// SVG of the level-`level` cells of `sc` or K(z).
#[wasm_bindgen]
pub fn carpet_svg(z: &str, level: u32, size: f64) -> Result<String, JsError> {
    let spec = spec_of(z).map_err(js)?;
    let lat = lattice(&spec, level).map_err(js)?;
    Ok(svg(&lat, size, |_| "#1f3b5c".into(), ""))
}

/// Potential that is 0 on the left column of cells and 1 on the right,
/// as JSON `{svg, resistance, dimension}`.
#[wasm_bindgen]
pub fn potential(z: &str, level: u32, size: f64) -> Result<String, JsError> {
    let spec = spec_of(z).map_err(js)?;
    lattice(&spec, level).map_err(js)?;
    let net = build_cell_network(&spec, level, ConductanceScheme::default()).map_err(js)?;
    let lat = net.lattice();
    let opts = SolverOptions::default();
    let sol = solve_dirichlet(net.graph(), &lat.boundary_cells(Side::Left), &lat.boundary_cells(Side::Right), opts).map_err(js)?;
    let resistance = across_resistance(&net, opts).map_err(js)?;
    let picture = svg(lat, size, |i| ramp(sol.potentials[i]), "");
    Ok(json!({ "svg": picture, "resistance": resistance, "dimension": spec.hausdorff_dim() }).to_string())
}

/// Shortest path along the level-`level` skeleton between two points of the
/// unit square, as JSON `{svg, lower, upper}`.
#[wasm_bindgen]
pub fn geodesic(z: &str, level: u32, x: &[f64], y: &[f64], size: f64) -> Result<String, JsError> {
    if x.len() != 2 || y.len() != 2 {
        return Err(JsError::new("points need two coordinates"));
    }
    let spec = spec_of(z).map_err(js)?;
    let lat = lattice(&spec, level).map_err(js)?;
    let sk = build_skeleton(&spec, level, spec.k()).map_err(js)?;
    let (p, q) = ([x[0], x[1]], [y[0], y[1]]);
    let est = geodesic_estimate(&sk, p, q).map_err(js)?;
    let path = sk.path(sk.snap(p).vertex, sk.snap(q).vertex).map_err(js)?;
    let mut line = String::from(r##"<polyline fill="none" stroke="#e4572e" stroke-width="2.5" stroke-linejoin="round" points=""##);
    for v in path {
        let pt = sk.point(v);
        let _ = write!(line, "{:.3},{:.3} ", pt[0] * size, size - pt[1] * size);
    }
    line.push_str(r#""/>"#);
    for pt in [p, q] {
        let _ = write!(line, r##"<circle cx="{:.3}" cy="{:.3}" r="5" fill="#e4572e"/>"##, pt[0] * size, size - pt[1] * size);
    }
    let picture = svg(&lat, size, |_| "#c9d6e3".into(), &line);
    Ok(json!({ "svg": picture, "lower": est.lower, "upper": est.upper }).to_string())
}
