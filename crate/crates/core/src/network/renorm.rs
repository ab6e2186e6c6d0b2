use serde::Serialize;

use super::{build_cell_network, effective_resistance, CellNetwork, ConductanceScheme, Graph, SolverOptions};
use crate::error::{CarpetError, Result};
use crate::geometry::{Side, UscSpec};

#[derive(Clone, Debug, Serialize)]
pub struct LevelResistance {
    pub n: u32,
    /// Unnormalized `R(L_2, L_4)` of the level-`n` network.
    #[serde(rename = "R")]
    pub resistance: f64,
    /// `R_{n-1} / R_n`; absent at the first level.
    pub ratio: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RenormEstimate {
    pub levels: Vec<LevelResistance>,
    /// Ratio at the top level, the working estimate of `r`.
    pub r_hat: f64,
    pub theta: f64,
    #[serde(rename = "d_H")]
    pub d_h: f64,
    #[serde(rename = "d_W")]
    pub d_w: f64,
    /// Aitken Δ² extrapolation of the ratio sequence, if requested and defined.
    pub extrapolated: Option<f64>,
    pub scheme: ConductanceScheme,
    /// `[2/k, N/k²]`.
    pub bounds: [f64; 2],
}

impl RenormEstimate {
    pub fn ratios(&self) -> Vec<f64> {
        self.levels.iter().filter_map(|l| l.ratio).collect()
    }

    /// Raw resistance across the square at level `n`, if that level was computed.
    pub fn resistance_at(&self, n: u32) -> Option<f64> {
        self.levels.iter().find(|l| l.n == n).map(|l| l.resistance)
    }

    pub fn ratios_within_bounds(&self) -> bool {
        self.ratios().iter().all(|r| (self.bounds[0]..=self.bounds[1]).contains(r))
    }

    /// `|r̂_top − r̂_{top−1}|`, if at least two ratios exist.
    pub fn drift(&self) -> Option<f64> {
        let r = self.ratios();
        (r.len() >= 2).then(|| (r[r.len() - 1] - r[r.len() - 2]).abs())
    }
}

/// Conductance from a cell centre to one of its sides, in units where a full
/// shared side between two cells has conductance 1.
const HALF_CELL: f64 = 2.0;

/// `R(L_2, L_4)` of one network. Each side of the square is a terminal joined
/// to the cells touching it through half a cell, so the first level already
/// sees the boundary the way deeper levels do.
pub fn across_resistance(net: &CellNetwork, opts: SolverOptions) -> Result<f64> {
    let lat = net.lattice();
    let g = net.graph();
    let n = g.n_vertices();
    let (left, right) = (n, n + 1);
    let terminals = lat
        .boundary_cells(Side::Left)
        .into_iter()
        .map(|c| (c, left, HALF_CELL))
        .chain(lat.boundary_cells(Side::Right).into_iter().map(|c| (c, right, HALF_CELL)));
    let wired = Graph::new(n + 2, g.edges().iter().copied().chain(terminals))?;
    effective_resistance(&wired, &[left], &[right], opts)
}

/// Computes `R_n(L_2, L_4)` for `1 ≤ n ≤ n_max` and the exponents they imply.
pub fn estimate_renorm(spec: &UscSpec, n_max: u32, scheme: ConductanceScheme, aitken: bool) -> Result<RenormEstimate> {
    if n_max < 2 {
        return Err(CarpetError::InvalidParameter("renormalization needs at least two levels".into()));
    }
    let levels: Vec<u32> = (1..=n_max).collect();
    let rs = crate::par::map(&levels, |&n| {
        let net = build_cell_network(spec, n, scheme)?;
        across_resistance(&net, SolverOptions::default())
    });
    let rs: Vec<f64> = rs.into_iter().collect::<Result<_>>()?;
    let levels: Vec<LevelResistance> = rs
        .iter()
        .enumerate()
        .map(|(i, &r)| LevelResistance { n: i as u32 + 1, resistance: r, ratio: (i > 0).then(|| rs[i - 1] / r) })
        .collect();
    let ratios: Vec<f64> = levels.iter().filter_map(|l| l.ratio).collect();
    let r_hat = *ratios.last().expect("n_max >= 2");
    let k = spec.k() as f64;
    let n_maps = spec.n_maps() as f64;
    let theta = -r_hat.ln() / k.ln();
    let d_h = spec.hausdorff_dim();
    let extrapolated = if aitken && ratios.len() >= 3 {
        let [a, b, c] = [ratios[ratios.len() - 3], ratios[ratios.len() - 2], ratios[ratios.len() - 1]];
        let denom = c - 2.0 * b + a;
        (denom.abs() > 1e-14).then(|| c - (c - b).powi(2) / denom)
    } else {
        None
    };
    Ok(RenormEstimate {
        levels,
        r_hat,
        theta,
        d_h,
        d_w: theta + d_h,
        extrapolated,
        scheme,
        bounds: [2.0 / k, n_maps / (k * k)],
    })
}
