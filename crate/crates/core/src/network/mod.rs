//! Resistance networks on level-`n` cells.
//!
//! Vertices are the cells of [`CellLattice`](crate::geometry::CellLattice);
//! edges join cells whose squares share a segment (and, optionally, a point).
//! Effective resistances come from Dirichlet solves on the grounded Laplacian.

mod cells;
mod dirichlet;
mod graph;
mod metric;
mod renorm;
mod solver;

pub use cells::{build_cell_network, CellNetwork, ConductanceMode, ConductanceScheme};
pub use dirichlet::{effective_resistance, solve_boundary_values, solve_dirichlet, DirichletSolution};
pub use graph::{Graph, Laplacian};
pub use metric::{
    annulus_resistance, check_boundary_bound, fit_theta, AnnulusReport, BoundaryBoundReport, Endpoint,
    ResistanceMetric, ThetaFit,
};
pub use renorm::{across_resistance, estimate_renorm, LevelResistance, RenormEstimate};
pub use solver::{GroundedSystem, SolverKind, SolverOptions};
