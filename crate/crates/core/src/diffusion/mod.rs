//! Random walks on cell networks: transition operators, crossing times,
//! resolvent kernels and on-diagonal heat-kernel decay.

mod crossing;
mod heat;
mod resolvent;
mod transition;

use serde::Serialize;

pub use crossing::{
    crossing_steps, expected_crossing_steps, simulate_crossings, CrossingLevel, CrossingReport, WalkDimension, WalkStats,
    WALK_CAP,
};
pub use heat::{geometric_times, heat_kernel_diag, HeatReport, HeatRow};
pub use resolvent::{resolvent_convergence, resolvent_kernel, Resolvent, ResolventConvergence, ResolventRow, ResolventSolution};
pub use transition::{transition_operator, MeasureKind, TransitionOperator};

/// Three estimates of the walk dimension and the ingredients they share.
#[derive(Clone, Debug, Serialize)]
pub struct ExponentEstimates {
    pub d_h: f64,
    pub theta: f64,
    /// `θ̂ + d_H`.
    pub from_resistance: f64,
    pub from_crossing: Option<f64>,
    /// `−d_H / slope` of the heat-kernel fit.
    pub from_heat_kernel: Option<f64>,
}

impl ExponentEstimates {
    pub fn new(d_h: f64, theta: f64, crossing: Option<f64>, heat_slope: Option<f64>) -> Self {
        ExponentEstimates {
            d_h,
            theta,
            from_resistance: theta + d_h,
            from_crossing: crossing,
            from_heat_kernel: heat_slope.filter(|s| *s < 0.0).map(|s| -d_h / s),
        }
    }
}
