//! Numerical laboratory for unconstrained Sierpinski carpets.
//!
//! A carpet is described by `k` and `N` offsets; each map is `x ↦ x/k + c_i`.
//! The crate builds the level-`n` cell system exactly on an integer lattice,
//! turns it into resistance networks, geodesic skeletons and random walks, and
//! runs the convergence experiments for carpet families.

pub mod convergence;
pub mod diffusion;
pub mod error;
pub mod geodesic;
pub mod geometry;
pub mod network;
pub mod par;
pub mod trace;

pub use error::{CarpetError, Result};
pub use geometry::{Rational, UscSpec, Word};

/// Default cap on the number of cells any single level may contain.
pub const DEFAULT_CELL_BUDGET: u64 = 500_000;

/// Cell budget, overridable through `CARPET_CELL_BUDGET`.
pub fn cell_budget() -> u64 {
    std::env::var("CARPET_CELL_BUDGET")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_CELL_BUDGET)
}
