use serde::Serialize;

use super::{classify_sequence, FamilyParam, FamilySpec, SequenceTrend, Skipped};
use crate::error::Result;
use crate::geometry::{hausdorff_distance, HausdorffInterval};
use crate::network::{across_resistance, build_cell_network, ConductanceScheme, ResistanceMetric, SolverOptions};

#[derive(Clone, Debug, Serialize)]
pub struct ConvergenceRow {
    pub param: FamilyParam,
    pub hausdorff: HausdorffInterval,
    /// `sup |R̂_n(x_n, y_n) − R̂(x, y)|` over grid pairs.
    pub deviation: f64,
    /// Raw `R(L_2, L_4)` at the working level.
    pub resistance: f64,
    /// `R_{n−1}/R_n` at the working level, if the level is at least 2.
    pub r_hat: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConvergenceReport {
    pub level: u32,
    pub scheme: ConductanceScheme,
    /// Grid cells, as limit words.
    pub grid: Vec<String>,
    pub limit_resistance: f64,
    pub limit_r_hat: Option<f64>,
    pub rows: Vec<ConvergenceRow>,
    pub trend: SequenceTrend,
    pub skipped: Vec<Skipped>,
    pub note: &'static str,
}

impl ConvergenceReport {
    pub fn deviations(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.deviation).collect()
    }
}

const TRANSPORT_NOTE: &str =
    "points are transported by matched word addresses; this tests one canonical family of convergent sequences";

/// `count` cells spread evenly over the cell indices.
pub fn default_grid(n_cells: usize, count: usize) -> Vec<usize> {
    let count = count.clamp(1, n_cells);
    (0..count).map(|i| i * (n_cells - 1) / (count - 1).max(1)).collect()
}

pub(crate) fn level_ratio(spec: &crate::UscSpec, n: u32, r_n: f64, scheme: ConductanceScheme) -> Result<Option<f64>> {
    if n < 2 {
        return Ok(None);
    }
    let prev = across_resistance(&build_cell_network(spec, n - 1, scheme)?, SolverOptions::default())?;
    Ok(Some(prev / r_n))
}

/// Normalized two-point resistances on a grid of limit cells, transported to
/// each member by word address, compared with the limit.
pub fn resistance_convergence(
    family: &FamilySpec,
    n: u32,
    grid: &[usize],
    scheme: ConductanceScheme,
    hausdorff_level: u32,
) -> Result<ConvergenceReport> {
    let (limit, members, skipped) = family.members()?;
    let pairs: Vec<(usize, usize)> =
        (0..grid.len()).flat_map(|i| (i + 1..grid.len()).map(move |j| (grid[i], grid[j]))).collect();

    let table = |spec: &crate::UscSpec| -> Result<(Vec<f64>, f64, Option<f64>)> {
        let net = build_cell_network(spec, n, scheme)?;
        let metric = ResistanceMetric::new(&net, SolverOptions::default())?;
        let vals = pairs.iter().map(|&(a, b)| metric.distance(a, b)).collect::<Result<Vec<_>>>()?;
        let ratio = level_ratio(spec, n, metric.normalization(), scheme)?;
        Ok((vals, metric.normalization(), ratio))
    };
    let (base, limit_resistance, limit_r_hat) = table(&limit)?;
    let lat = crate::geometry::CellLattice::new(&limit, n)?;
    let rows = crate::par::map(&members, |mem| -> Result<ConvergenceRow> {
        let (vals, resistance, r_hat) = table(&mem.spec)?;
        let deviation = vals.iter().zip(&base).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        Ok(ConvergenceRow {
            param: mem.param.clone(),
            hausdorff: hausdorff_distance(&limit, &mem.spec, hausdorff_level)?,
            deviation,
            resistance,
            r_hat,
        })
    });
    let rows: Vec<ConvergenceRow> = rows.into_iter().collect::<Result<_>>()?;
    let devs: Vec<f64> = rows.iter().map(|r| r.deviation).collect();
    Ok(ConvergenceReport {
        level: n,
        scheme,
        grid: grid.iter().map(|&c| lat.word(c).to_string()).collect(),
        limit_resistance,
        limit_r_hat,
        trend: classify_sequence(&devs),
        rows,
        skipped,
        note: TRANSPORT_NOTE,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::convergence::Generator;
    use crate::geometry::parse_rational;

    #[test]
    fn grid_spread() {
        assert_eq!(default_grid(10, 4), vec![0, 3, 6, 9]);
        assert_eq!(default_grid(5, 1), vec![0]);
        assert_eq!(default_grid(3, 10), vec![0, 1, 2]);
    }

    #[test]
    fn constant_family_has_zero_deviation() {
        let f = FamilySpec::constant(Generator::Kz, parse_rational("1/28").unwrap(), 2);
        let rep = resistance_convergence(&f, 2, &default_grid(1024, 6), ConductanceScheme::family_default(), 1).unwrap();
        assert!(rep.rows.iter().all(|r| r.deviation == 0.0));
        assert!(rep.limit_r_hat.is_some());
    }
}
