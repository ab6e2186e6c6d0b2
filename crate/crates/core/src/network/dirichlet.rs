use serde::Serialize;

use super::{Graph, GroundedSystem, SolverOptions};
use crate::error::{CarpetError, Result};
use crate::geometry::spec::Dsu;

#[derive(Clone, Debug, Serialize)]
pub struct DirichletSolution {
    pub potentials: Vec<f64>,
    /// `Σ c_xy (u_x - u_y)²`.
    pub energy: f64,
    /// Net current leaving the vertices held at the largest boundary value.
    pub flux: f64,
    /// Free vertices with no path to the boundary; they are set to 0.
    pub isolated: Vec<usize>,
}

/// Harmonic extension of prescribed values on `fixed` vertices.
pub fn solve_boundary_values(graph: &Graph, fixed: &[(usize, f64)], opts: SolverOptions) -> Result<DirichletSolution> {
    let n = graph.n_vertices();
    if fixed.is_empty() {
        return Err(CarpetError::Degenerate("no boundary vertices".into()));
    }
    let mut is_fixed = vec![false; n];
    let mut u = vec![0.0; n];
    for &(v, val) in fixed {
        if v >= n {
            return Err(CarpetError::InvalidParameter(format!("vertex {v} out of range")));
        }
        is_fixed[v] = true;
        u[v] = val;
    }

    // Free components that never touch the boundary make the system singular.
    let mut dsu = Dsu::new(n + 1);
    for &(a, b, _) in graph.edges() {
        dsu.union(a, b);
    }
    for v in 0..n {
        if is_fixed[v] {
            dsu.union(v, n);
        }
    }
    let root = dsu.find(n);
    let isolated: Vec<usize> = (0..n).filter(|&v| dsu.find(v) != root).collect();
    let mut excluded = is_fixed.clone();
    for &v in &isolated {
        excluded[v] = true;
    }

    let lap = graph.laplacian();
    let sys = GroundedSystem::new(&lap, None, &excluded, opts)?;
    let rhs: Vec<f64> = sys
        .free()
        .iter()
        .map(|&v| -lap.row(v).filter(|&(j, _)| is_fixed[j]).map(|(j, w)| w * u[j]).sum::<f64>())
        .collect();
    let x = sys.solve(&rhs)?;
    for (&v, xv) in sys.free().iter().zip(x) {
        u[v] = xv;
    }
    let energy = graph.energy(&u);
    let top = fixed.iter().map(|f| f.1).fold(f64::NEG_INFINITY, f64::max);
    let lu = lap.apply(&u);
    let flux = fixed.iter().filter(|f| f.1 == top).map(|f| lu[f.0]).sum();
    Ok(DirichletSolution { potentials: u, energy, flux, isolated })
}

/// Potential equal to 0 on `a` and 1 on `b`, harmonic elsewhere.
pub fn solve_dirichlet(graph: &Graph, a: &[usize], b: &[usize], opts: SolverOptions) -> Result<DirichletSolution> {
    if a.is_empty() || b.is_empty() {
        return Err(CarpetError::Degenerate("boundary sets must be nonempty".into()));
    }
    if a.iter().any(|v| b.contains(v)) {
        return Err(CarpetError::Degenerate("boundary sets must be disjoint".into()));
    }
    let fixed: Vec<(usize, f64)> = a.iter().map(|&v| (v, 0.0)).chain(b.iter().map(|&v| (v, 1.0))).collect();
    solve_boundary_values(graph, &fixed, opts)
}

/// `R(A, B)`: inverse energy of the unit potential from `A` to `B`.
pub fn effective_resistance(graph: &Graph, a: &[usize], b: &[usize], opts: SolverOptions) -> Result<f64> {
    let sol = solve_dirichlet(graph, a, b, opts)?;
    if sol.energy <= 0.0 {
        return Err(CarpetError::Disconnected { components: graph.components() });
    }
    Ok(1.0 / sol.energy)
}
