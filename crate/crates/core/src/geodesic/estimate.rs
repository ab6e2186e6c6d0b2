use serde::Serialize;

use super::Skeleton;
use crate::error::{CarpetError, Result};
use crate::geometry::{estimate_c0, CellLattice, Rational, UscSpec};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GeodesicEstimate {
    pub level: u32,
    /// Euclidean distance between the snapped points.
    pub lower: f64,
    /// Shortest skeleton path between the snapped points.
    pub upper: f64,
    /// Largest distance moved while snapping the endpoints.
    pub snap_error: f64,
}

/// Bracket `d ≤ d_G ≤ upper` for two points near the skeleton.
pub fn geodesic_estimate(sk: &Skeleton, x: [f64; 2], y: [f64; 2]) -> Result<GeodesicEstimate> {
    let (sx, sy) = (sk.snap(x), sk.snap(y));
    let (p, q) = (sk.point(sx.vertex), sk.point(sy.vertex));
    Ok(GeodesicEstimate {
        level: sk.level(),
        lower: (p[0] - q[0]).hypot(p[1] - q[1]),
        upper: sk.path_length(sx.vertex, sy.vertex)?,
        snap_error: sx.error.max(sy.error),
    })
}

/// Same as [`geodesic_estimate`] for exact points that must be skeleton vertices.
pub fn geodesic_estimate_exact(sk: &Skeleton, x: &[Rational; 2], y: &[Rational; 2]) -> Result<GeodesicEstimate> {
    let off = || CarpetError::InvalidParameter("point is not a skeleton vertex".into());
    let a = sk.vertex_at(x).ok_or_else(off)?;
    let b = sk.vertex_at(y).ok_or_else(off)?;
    let (p, q) = (sk.point(a), sk.point(b));
    Ok(GeodesicEstimate {
        level: sk.level(),
        lower: (p[0] - q[0]).hypot(p[1] - q[1]),
        upper: sk.path_length(a, b)?,
        snap_error: 0.0,
    })
}

/// Constants of the comparison `d ≤ d_G ≤ C·d`: `C' = 4N/(k−1)` bounds the
/// distance to the outer boundary and `C = (2C' + 12)·k/c_0`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComparisonConstant {
    pub boundary_reach: f64,
    pub c0: f64,
    pub c: f64,
}

pub fn comparison_constant(spec: &UscSpec, c0_level: u32) -> Result<ComparisonConstant> {
    let lat = CellLattice::new(spec, c0_level)?;
    let c0 = estimate_c0(&lat)
        .ok_or_else(|| CarpetError::Degenerate("every pair of cells shares a neighbour".into()))?
        .value;
    let k = spec.k() as f64;
    let boundary_reach = 4.0 * spec.n_maps() as f64 / (k - 1.0);
    Ok(ComparisonConstant { boundary_reach, c0, c: (2.0 * boundary_reach + 12.0) * k / c0 })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ModulusRow {
    pub eta: f64,
    /// `sup{upper(x, y) : d(x, y) < η}` over the sampled pairs.
    pub value: f64,
}

/// Continuity modulus of the skeleton geodesic distance, from `sources`
/// evenly spaced source vertices against every vertex.
pub fn continuity_modulus(sk: &Skeleton, etas: &[f64], sources: usize) -> Vec<ModulusRow> {
    let stride = (sk.len() / sources.max(1)).max(1);
    let picks: Vec<usize> = (0..sk.len()).step_by(stride).take(sources.max(1)).collect();
    let per_source: Vec<Vec<(f64, f64)>> = crate::par::map(&picks, |&s| {
        let p = sk.point(s);
        let dist = sk.distances(s);
        let mut rows: Vec<(f64, f64)> = (0..sk.len())
            .map(|v| {
                let q = sk.point(v);
                ((p[0] - q[0]).hypot(p[1] - q[1]), dist[v])
            })
            .collect();
        rows.sort_by(|a, b| a.0.total_cmp(&b.0));
        rows
    });
    etas.iter()
        .map(|&eta| {
            let value = per_source
                .iter()
                .flat_map(|rows| rows.iter().take_while(|r| r.0 < eta).map(|r| r.1))
                .fold(0.0, f64::max);
            ModulusRow { eta, value }
        })
        .collect()
}
