//! Geodesic distances on carpets and on unions of squares.
//!
//! Inside the carpet, lengths are read off the [`Skeleton`], the union of all
//! level-`m` square boundaries, which is contained in the carpet. Inside a
//! union of squares, [`SquareUnion`] computes exact polygonal geodesics.

mod equicont;
mod estimate;
mod skeleton;
mod union;

pub use equicont::{classify_trend, equicontinuity_diagnostic, ContactSequence, ContactTrend, EquicontinuityReport};
pub use estimate::{
    comparison_constant, continuity_modulus, geodesic_estimate, geodesic_estimate_exact, ComparisonConstant,
    GeodesicEstimate, ModulusRow,
};
pub use skeleton::{build_skeleton, Skeleton, Snap};
pub use union::SquareUnion;
