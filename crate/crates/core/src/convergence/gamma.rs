use serde::Serialize;

use super::{FamilyParam, FamilySpec, Skipped};
use crate::error::{CarpetError, Result};
use crate::network::{across_resistance, build_cell_network, solve_boundary_values, ConductanceScheme, SolverOptions};

#[derive(Clone, Debug, Serialize)]
pub struct GammaRow {
    pub param: FamilyParam,
    /// Normalized energy of the transported function.
    pub energy: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct GammaReport {
    pub level: u32,
    pub limit_energy: f64,
    pub rows: Vec<GammaRow>,
    /// Minimum over the second half of the sequence.
    pub liminf: f64,
    pub margin: f64,
    pub holds: bool,
    pub skipped: Vec<Skipped>,
    pub note: &'static str,
}

const PARTIAL_NOTE: &str = "liminf inequality on one transported sequence; recovery sequences are not tested";

/// Default test function: harmonic on the limit network with boundary cells
/// held at the first coordinate of their centres.
pub fn harmonic_x1(spec: &crate::UscSpec, n: u32, scheme: ConductanceScheme) -> Result<Vec<f64>> {
    let net = build_cell_network(spec, n, scheme)?;
    let lat = net.lattice();
    let fixed: Vec<(usize, f64)> = lat.all_boundary_cells().into_iter().map(|c| (c, lat.centre(c)[0])).collect();
    Ok(solve_boundary_values(net.graph(), &fixed, SolverOptions::default())?.potentials)
}

/// Energies `Ê_n(f)` of `f`, given on the limit's level-`n` cells and carried
/// to each member by cell index, against `Ê(f)` on the limit.
pub fn gamma_liminf_check(family: &FamilySpec, n: u32, f: &[f64], scheme: ConductanceScheme) -> Result<GammaReport> {
    let (limit, members, skipped) = family.members()?;
    let energy = |spec: &crate::UscSpec| -> Result<f64> {
        let net = build_cell_network(spec, n, scheme)?;
        if net.n_vertices() != f.len() {
            return Err(CarpetError::InvalidParameter(format!(
                "function has {} values, level {n} has {} cells",
                f.len(),
                net.n_vertices()
            )));
        }
        Ok(net.graph().energy(f) * across_resistance(&net, SolverOptions::default())?)
    };
    let limit_energy = energy(&limit)?;
    let rows: Vec<GammaRow> = crate::par::map(&members, |m| energy(&m.spec).map(|e| GammaRow { param: m.param.clone(), energy: e }))
        .into_iter()
        .collect::<Result<_>>()?;
    let tail = &rows[rows.len() / 2..];
    let liminf = tail.iter().map(|r| r.energy).fold(f64::INFINITY, f64::min);
    let margin = liminf - limit_energy;
    Ok(GammaReport {
        level: n,
        limit_energy,
        liminf,
        margin,
        holds: limit_energy <= liminf * (1.0 + 1e-9) + 1e-12,
        rows,
        skipped,
        note: PARTIAL_NOTE,
    })
}
