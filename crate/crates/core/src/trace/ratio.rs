use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::line::{besov_line_seminorm, sigma_of, DyadicFunction};
use crate::error::{CarpetError, Result};
use crate::geometry::{Side, UscSpec};
use crate::network::{across_resistance, build_cell_network, solve_boundary_values, CellNetwork, ConductanceScheme, SolverOptions};

/// Piecewise-linear function on `∂□`, parametrized counter-clockwise from
/// `(0,0)` with perimeter length 4.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PerimeterData {
    knots: Vec<f64>,
}

impl PerimeterData {
    /// `4·pieces_per_side` random knot values in `[0, 1)` from one RNG stream.
    pub fn random(pieces_per_side: usize, seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        PerimeterData { knots: (0..4 * pieces_per_side.max(1)).map(|_| rng.random::<f64>()).collect() }
    }

    pub fn from_knots(knots: Vec<f64>) -> Self {
        PerimeterData { knots }
    }

    pub fn shifted(&self, c: f64) -> Self {
        PerimeterData { knots: self.knots.iter().map(|v| v + c).collect() }
    }

    pub fn is_constant(&self) -> bool {
        self.knots.windows(2).all(|w| w[0] == w[1])
    }

    fn at_param(&self, s: f64) -> f64 {
        let n = self.knots.len();
        let t = s.rem_euclid(4.0) / 4.0 * n as f64;
        let i = (t.floor() as usize).min(n - 1);
        let frac = t - i as f64;
        self.knots[i] * (1.0 - frac) + self.knots[(i + 1) % n] * frac
    }

    /// Value at the point of `∂□` nearest to `p`.
    pub fn at(&self, p: [f64; 2]) -> f64 {
        let [x, y] = [p[0].clamp(0.0, 1.0), p[1].clamp(0.0, 1.0)];
        let d = [y, 1.0 - x, 1.0 - y, x];
        let side = (0..4).min_by(|&a, &b| d[a].total_cmp(&d[b])).unwrap_or(0);
        let s = match side {
            0 => x,
            1 => 1.0 + y,
            2 => 2.0 + (1.0 - x),
            _ => 3.0 + (1.0 - y),
        };
        self.at_param(s)
    }
}

/// Trace of a cell function on one side, as values at `l/k^n`: the average of
/// the boundary cells on either side of each point.
fn side_trace(net: &CellNetwork, h: &[f64], side: Side) -> Result<DyadicFunction> {
    let lat = net.lattice();
    let n = lat.level();
    let along = |c: usize| {
        let o = lat.origin(c);
        match side {
            Side::Bottom | Side::Top => o[0],
            Side::Left | Side::Right => o[1],
        }
    };
    let mut cells = lat.boundary_cells(side);
    cells.sort_by_key(|&c| along(c));
    let count = (lat.k() as usize).pow(n);
    if cells.len() != count || cells.iter().enumerate().any(|(i, &c)| along(c) != i as i64 * lat.side()) {
        return Err(CarpetError::Degenerate(format!("side {side:?} is not tiled by level-{n} cells")));
    }
    let values = (0..=count)
        .map(|l| match l {
            0 => h[cells[0]],
            l if l == count => h[cells[count - 1]],
            l => 0.5 * (h[cells[l - 1]] + h[cells[l]]),
        })
        .collect();
    DyadicFunction::new(lat.k(), n, values)
}

/// `[[h|_{∂□}]]² / Ê(h)` for the harmonic extension `h` of `data`; `None` for
/// constant data.
pub fn harmonic_trace_ratio(net: &CellNetwork, normalization: f64, data: &PerimeterData, r: f64) -> Result<Option<f64>> {
    if data.is_constant() {
        return Ok(None);
    }
    let lat = net.lattice();
    let fixed: Vec<(usize, f64)> = lat.all_boundary_cells().into_iter().map(|c| (c, data.at(lat.centre(c)))).collect();
    let sol = solve_boundary_values(net.graph(), &fixed, SolverOptions::default())?;
    let energy = sol.energy * normalization;
    if energy <= 0.0 {
        return Ok(None);
    }
    let mut trace = 0.0;
    for side in Side::ALL {
        trace += besov_line_seminorm(&side_trace(net, &sol.potentials, side)?, r)?.powi(2);
    }
    Ok(Some(trace / energy))
}

#[derive(Clone, Debug, Serialize)]
pub struct RatioLevel {
    pub n: u32,
    pub ratios: Vec<f64>,
    pub min: f64,
    pub max: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct RestrictionRatioReport {
    pub r: f64,
    pub sigma: f64,
    pub levels: Vec<RatioLevel>,
    /// `max/min` over every level and sample.
    pub spread: f64,
    pub excluded: usize,
}

/// Trace-to-energy ratios of harmonic functions with random piecewise-linear
/// boundary data (`k` pieces per side), at each level.
pub fn restriction_ratio(
    spec: &UscSpec,
    levels: &[u32],
    samples: usize,
    seed: u64,
    r: f64,
    scheme: ConductanceScheme,
) -> Result<RestrictionRatioReport> {
    let data: Vec<PerimeterData> = (0..samples as u64).map(|i| PerimeterData::random(spec.k() as usize, seed, i)).collect();
    let mut out = Vec::new();
    let mut excluded = 0;
    for &n in levels {
        let net = build_cell_network(spec, n, scheme)?;
        let norm = across_resistance(&net, SolverOptions::default())?;
        let vals = crate::par::map(&data, |d| harmonic_trace_ratio(&net, norm, d, r));
        let mut ratios = Vec::new();
        for v in vals {
            match v? {
                Some(x) => ratios.push(x),
                None => excluded += 1,
            }
        }
        let min = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
        let max = ratios.iter().cloned().fold(0.0, f64::max);
        out.push(RatioLevel { n, ratios, min, max });
    }
    let min = out.iter().map(|l| l.min).fold(f64::INFINITY, f64::min);
    let max = out.iter().map(|l| l.max).fold(0.0, f64::max);
    Ok(RestrictionRatioReport { r, sigma: sigma_of(r, spec.k()), levels: out, spread: max / min, excluded })
}
