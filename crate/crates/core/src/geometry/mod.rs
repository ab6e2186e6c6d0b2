//! Exact carpet geometry.
//!
//! Offsets are parsed as arbitrary-precision rationals. Everything at level `n`
//! is then done on an integer lattice ([`CellLattice`]) whose unit is chosen so
//! that every level-`n` square has integer corners, which keeps adjacency,
//! boundary membership and symmetry checks exact.

mod adjacency;
mod hausdorff;
mod lattice;
mod matching;
mod orbit;
mod rational;
mod separation;
pub(crate) mod spec;
mod symmetry;
mod word;

pub use adjacency::{cell_adjacency, AdjacencyRecord, Contact, ContactKind};
pub use hausdorff::{hausdorff_distance, HausdorffInterval};
pub use lattice::{CellLattice, Side};
pub use matching::{match_ifs, IfsMatching};
pub use orbit::{boundary_ring, complete_symmetry_orbit};
pub use rational::{parse_rational, rational_to_f64, Rational};
pub use separation::{estimate_c0, C0Estimate};
pub use spec::{parse_spec, validate_usc, Check, UscSpec, ValidationReport};
pub use symmetry::{apply_symmetry, Symmetry};
pub use word::{cell_map, AffineMap, Word};
