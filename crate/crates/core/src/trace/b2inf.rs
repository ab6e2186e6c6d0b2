use serde::Serialize;

use crate::error::{CarpetError, Result};
use crate::geometry::{CellLattice, Side, UscSpec};
use crate::network::{build_cell_network, solve_dirichlet, ConductanceScheme, SolverOptions};

/// Largest cell count for the exact pairwise double sum.
const MAX_CELLS: usize = 16_384;

/// Per-scale double sums `S_j = Σ_{|x_a − x_b| ≤ k^{-j}} μ_a μ_b (f_a − f_b)²`
/// over ordered pairs of cell centres, `0 ≤ j ≤ n`.
pub fn scale_sums(f: &[f64], lat: &CellLattice) -> Result<Vec<f64>> {
    let n = lat.len();
    if f.len() != n {
        return Err(CarpetError::InvalidParameter(format!("{} values for {n} cells", f.len())));
    }
    if n > MAX_CELLS {
        return Err(CarpetError::BudgetExceeded { level: lat.level(), cells: n as u128, budget: MAX_CELLS as u64 });
    }
    let levels = lat.level() as usize;
    let k = lat.k() as i128;
    // Squared radii in lattice units: (scale / k^j)².
    let radii: Vec<i128> = (0..=levels).map(|j| (lat.scale() as i128 / k.pow(j as u32)).pow(2)).collect();
    let mu = 1.0 / n as f64;
    let per_cell = crate::par::map_range(n, |a| {
        let mut bins = vec![0.0; levels + 1];
        let oa = lat.origin(a);
        for b in a + 1..n {
            let ob = lat.origin(b);
            let d2 = ((oa[0] - ob[0]) as i128).pow(2) + ((oa[1] - ob[1]) as i128).pow(2);
            // Deepest scale whose ball still contains the pair.
            let Some(j) = radii.iter().rposition(|&r2| d2 <= r2) else { continue };
            bins[j] += (f[a] - f[b]).powi(2);
        }
        bins
    });
    let mut sums = vec![0.0; levels + 1];
    for j in 0..=levels {
        let col: Vec<f64> = per_cell.iter().map(|b| b[j]).collect();
        sums[j] = 2.0 * mu * mu * crate::par::pairwise_sum(&col);
    }
    // Balls shrink with j, so accumulate from the finest scale outwards.
    for j in (0..levels).rev() {
        sums[j] += sums[j + 1];
    }
    Ok(sums)
}

/// `√(sup_j k^{j(2σ + d_H)} S_j)`.
pub fn besov_2inf_seminorm(f: &[f64], lat: &CellLattice, sigma: f64, d_h: f64) -> Result<f64> {
    let sums = scale_sums(f, lat)?;
    Ok(sup_over_scales(&sums, lat.k(), sigma, d_h).sqrt())
}

fn sup_over_scales(sums: &[f64], k: u32, sigma: f64, d_h: f64) -> f64 {
    sums.iter()
        .enumerate()
        .map(|(j, s)| (k as f64).powf(j as f64 * (2.0 * sigma + d_h)) * s)
        .fold(0.0, f64::max)
}

#[derive(Clone, Debug, Serialize)]
pub struct SigmaRow {
    pub sigma: f64,
    /// Semi-norm of the harmonic proxy at each level.
    pub values: Vec<f64>,
    /// Fitted growth exponent: slope of `log(value²)` in `n`, over `log k`.
    pub growth: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SigmaScan {
    pub levels: Vec<u32>,
    pub rows: Vec<SigmaRow>,
    /// Growth below this counts as stable.
    pub tolerance: f64,
    /// `[largest stable σ, smallest growing σ]`, where both exist.
    pub bracket: [Option<f64>; 2],
}

/// Semi-norms of the left-to-right harmonic potential across levels for each
/// `σ`. Above the critical exponent the values grow geometrically in `n`.
pub fn critical_sigma_scan(
    spec: &UscSpec,
    levels: &[u32],
    sigmas: &[f64],
    scheme: ConductanceScheme,
    tolerance: f64,
) -> Result<SigmaScan> {
    if levels.len() < 2 || levels.iter().any(|&n| n < 2) {
        return Err(CarpetError::InvalidParameter("scan needs at least two levels, each at least 2".into()));
    }
    let d_h = spec.hausdorff_dim();
    let sums: Vec<(CellLattice, Vec<f64>)> = levels
        .iter()
        .map(|&n| {
            let net = build_cell_network(spec, n, scheme)?;
            let lat = net.lattice();
            let sol = solve_dirichlet(
                net.graph(),
                &lat.boundary_cells(Side::Left),
                &lat.boundary_cells(Side::Right),
                SolverOptions::default(),
            )?;
            let s = scale_sums(&sol.potentials, lat)?;
            Ok((lat.clone(), s))
        })
        .collect::<Result<_>>()?;
    let k = spec.k();
    let lk = (k as f64).ln();
    let rows: Vec<SigmaRow> = sigmas
        .iter()
        .map(|&sigma| {
            let values: Vec<f64> = sums.iter().map(|(_, s)| sup_over_scales(s, k, sigma, d_h).sqrt()).collect();
            let xs: Vec<f64> = levels.iter().map(|&n| n as f64).collect();
            let ys: Vec<f64> = values.iter().map(|v| 2.0 * v.ln() / lk).collect();
            let m = xs.len() as f64;
            let (mx, my) = (xs.iter().sum::<f64>() / m, ys.iter().sum::<f64>() / m);
            let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
            let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
            SigmaRow { sigma, values, growth: sxy / sxx }
        })
        .collect();
    let stable = rows.iter().filter(|r| r.growth <= tolerance).map(|r| r.sigma).fold(None, |a: Option<f64>, s| Some(a.map_or(s, |a| a.max(s))));
    let growing = rows.iter().filter(|r| r.growth > tolerance).map(|r| r.sigma).fold(None, |a: Option<f64>, s| Some(a.map_or(s, |a| a.min(s))));
    Ok(SigmaScan { levels: levels.to_vec(), rows, tolerance, bracket: [stable, growing] })
}
