//! Besov-type semi-norms on segments, cell boundaries and the carpet, the
//! building-brick graph along the bottom side, and the restriction checks
//! built from them.

mod b2inf;
mod boundary;
mod brick;
mod line;
mod ratio;

pub use b2inf::{besov_2inf_seminorm, critical_sigma_scan, scale_sums, SigmaRow, SigmaScan};
pub use boundary::besov_boundary_seminorm;
pub use brick::{brick_graph_energy, check_restriction, BrickSamples, RestrictionReport, RestrictionRow};
pub use line::{besov_line_seminorm, besov_segment_seminorm, line_tail_bound, sigma_of, DyadicFunction};
pub use ratio::{harmonic_trace_ratio, restriction_ratio, PerimeterData, RatioLevel, RestrictionRatioReport};
