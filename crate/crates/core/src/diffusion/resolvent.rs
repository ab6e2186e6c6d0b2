use serde::Serialize;

use super::MeasureKind;
use crate::convergence::{classify_sequence, FamilyParam, FamilySpec, SequenceTrend, Skipped};
use crate::error::{CarpetError, Result};
use crate::network::{across_resistance, build_cell_network, CellNetwork, ConductanceScheme, Graph, GroundedSystem, SolverOptions};

/// Factored `(L̂ + α·diag(m))`, where `L̂` is the graph Laplacian scaled by the
/// network normalization.
pub struct Resolvent {
    alpha: f64,
    measure: Vec<f64>,
    system: GroundedSystem,
}

#[derive(Clone, Debug, Serialize)]
pub struct ResolventSolution {
    pub alpha: f64,
    pub x: usize,
    /// `u_α(x, ·)`.
    pub kernel: Vec<f64>,
}

impl Resolvent {
    pub fn new(graph: &Graph, measure: Vec<f64>, alpha: f64, normalization: f64) -> Result<Self> {
        if !(alpha > 0.0) {
            return Err(CarpetError::InvalidParameter(format!("alpha = {alpha} must be positive")));
        }
        if measure.len() != graph.n_vertices() {
            return Err(CarpetError::InvalidParameter("measure length differs from vertex count".into()));
        }
        let scaled = graph.scaled(|_, _| normalization)?;
        let shift: Vec<f64> = measure.iter().map(|m| alpha * m).collect();
        let system = GroundedSystem::new(&scaled.laplacian(), Some(&shift), &vec![false; measure.len()], SolverOptions::default())?;
        Ok(Resolvent { alpha, measure, system })
    }

    /// Resolvent of a cell network, normalized by its own `R(L_2, L_4)`.
    pub fn for_network(net: &CellNetwork, kind: MeasureKind, alpha: f64) -> Result<Self> {
        let norm = across_resistance(net, SolverOptions::default())?;
        Self::new(net.graph(), kind.masses(net.graph()), alpha, norm)
    }

    pub fn measure(&self) -> &[f64] {
        &self.measure
    }

    pub fn kernel(&self, x: usize) -> Result<ResolventSolution> {
        let n = self.measure.len();
        if x >= n {
            return Err(CarpetError::InvalidParameter("base vertex out of range".into()));
        }
        let mut rhs = vec![0.0; n];
        rhs[x] = 1.0;
        Ok(ResolventSolution { alpha: self.alpha, x, kernel: self.system.solve(&rhs)? })
    }

    /// `α Σ_y u_α(x, y) m_y`, which equals 1.
    pub fn mass(&self, sol: &ResolventSolution) -> f64 {
        let terms: Vec<f64> = sol.kernel.iter().zip(&self.measure).map(|(u, m)| u * m).collect();
        self.alpha * crate::par::pairwise_sum(&terms)
    }
}

/// Resolvent of one cell network at a single base point.
pub fn resolvent_kernel(net: &CellNetwork, kind: MeasureKind, alpha: f64, x: usize) -> Result<ResolventSolution> {
    Resolvent::for_network(net, kind, alpha)?.kernel(x)
}

#[derive(Clone, Debug, Serialize)]
pub struct ResolventRow {
    pub param: FamilyParam,
    /// `sup |u_{α,n}(x, y) − u_α(x, y)|` over base points and all cells.
    pub deviation: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ResolventConvergence {
    pub level: u32,
    pub alpha: f64,
    pub basepoints: Vec<usize>,
    pub rows: Vec<ResolventRow>,
    pub trend: SequenceTrend,
    pub skipped: Vec<Skipped>,
}

/// Kernels with uniform cell masses on every member, compared cell by cell
/// with the limit.
pub fn resolvent_convergence(
    family: &FamilySpec,
    n: u32,
    alpha: f64,
    basepoints: &[usize],
    scheme: ConductanceScheme,
) -> Result<ResolventConvergence> {
    let (limit, members, skipped) = family.members()?;
    let kernels = |spec: &crate::UscSpec| -> Result<Vec<Vec<f64>>> {
        let net = build_cell_network(spec, n, scheme)?;
        let r = Resolvent::for_network(&net, MeasureKind::Uniform, alpha)?;
        basepoints.iter().map(|&x| r.kernel(x).map(|s| s.kernel)).collect()
    };
    let base = kernels(&limit)?;
    let rows = crate::par::map(&members, |m| -> Result<ResolventRow> {
        let ks = kernels(&m.spec)?;
        let deviation = ks
            .iter()
            .zip(&base)
            .flat_map(|(a, b)| a.iter().zip(b).map(|(u, v)| (u - v).abs()))
            .fold(0.0, f64::max);
        Ok(ResolventRow { param: m.param.clone(), deviation })
    });
    let rows: Vec<ResolventRow> = rows.into_iter().collect::<Result<_>>()?;
    let devs: Vec<f64> = rows.iter().map(|r| r.deviation).collect();
    Ok(ResolventConvergence { level: n, alpha, basepoints: basepoints.to_vec(), trend: classify_sequence(&devs), rows, skipped })
}
