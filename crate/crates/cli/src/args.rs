use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(name = "carpet", version, about = "Numerical experiments on unconstrained Sierpinski carpets")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Serialize)]
pub struct Global {
    /// Print the full JSON artifact on stdout.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub json: bool,
    /// Write the artifact here; the extension picks JSON, CSV or SVG.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
    /// Worker threads; results do not depend on this.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub workers: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the four defining conditions of a carpet.
    Validate(SpecArgs),
    /// Draw the level-n cells as SVG.
    Render(RenderArgs),
    /// Build the level-n cell network and summarize or export it.
    Network(NetworkArgs),
    /// Resistance across the square at successive levels and the exponents it implies.
    Renorm(RenormArgs),
    /// Two-point resistance metric on the cells.
    Metric(MetricArgs),
    /// Geodesic bounds from the boundary skeleton.
    Geodesic(GeodesicArgs),
    /// Contact-point diagnostic for a family of carpets.
    Equicont(EquicontArgs),
    /// Besov semi-norms, the σ scan and restriction ratios.
    Besov(BesovArgs),
    /// Measure, resistance and energy convergence along a family.
    FamilySweep(SweepArgs),
    /// Random-walk crossing times and heat-kernel decay.
    Walk(WalkArgs),
    /// Resolvent kernels on one carpet or along a family.
    Resolvent(ResolventArgs),
    /// Validation, renormalization and exponent summary for one carpet.
    Report(ReportArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct SpecArgs {
    /// TOML spec file, or `sc`, or `kz:<z>`.
    #[arg(long)]
    pub spec: String,
}

#[derive(Clone, Copy, Debug, Default, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SchemeArg {
    #[default]
    Overlap,
    Uniform,
}

#[derive(Debug, Args, Serialize)]
pub struct SchemeArgs {
    #[arg(long, value_enum, default_value_t = SchemeArg::Overlap)]
    pub scheme: SchemeArg,
    /// Conductance given to corner-only contacts.
    #[arg(long)]
    pub point_contact: Option<f64>,
}

#[derive(Debug, Args, Serialize)]
pub struct FamilyArgs {
    /// Family generator.
    #[arg(long, default_value = "kz")]
    pub family: String,
    /// `expr:n=a..b` or `v1,v2,...;limit=v`.
    #[arg(long)]
    pub params: String,
}

#[derive(Debug, Args, Serialize)]
pub struct RenderArgs {
    #[command(flatten)]
    pub spec: SpecArgs,
    #[arg(long, default_value_t = 2)]
    pub level: u32,
    /// Image size in pixels.
    #[arg(long, default_value_t = 600)]
    pub size: u32,
}

#[derive(Debug, Args, Serialize)]
pub struct NetworkArgs {
    #[command(flatten)]
    pub spec: SpecArgs,
    #[arg(long, default_value_t = 2)]
    pub level: u32,
    #[command(flatten)]
    pub scheme: SchemeArgs,
}

#[derive(Debug, Args, Serialize)]
pub struct RenormArgs {
    #[command(flatten)]
    pub spec: SpecArgs,
    /// Highest level.
    #[arg(long, default_value_t = 4)]
    pub levels: u32,
    #[command(flatten)]
    pub scheme: SchemeArgs,
    /// Add an Aitken extrapolation of the ratios.
    #[arg(long)]
    pub aitken: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct MetricArgs {
    #[command(flatten)]
    pub spec: SpecArgs,
    #[arg(long, default_value_t = 3)]
    pub level: u32,
    #[command(flatten)]
    pub scheme: SchemeArgs,
    /// Endpoint pairs `a-b;c-d`, each endpoint `w:<word>` or `p:<x>,<y>`.
    #[arg(long)]
    pub pairs: Option<String>,
    /// Random cell pairs added to the table.
    #[arg(long, default_value_t = 0)]
    pub samples: usize,
    /// Boundary pairs sampled for the boundary bound.
    #[arg(long, default_value_t = 50)]
    pub boundary_samples: usize,
    /// Pairs used in the fit against geodesic distance; 0 skips the fit.
    #[arg(long, default_value_t = 0)]
    pub fit_samples: usize,
    /// Geodesic distance below which pairs are left out of the fit.
    #[arg(long, default_value_t = 0.0)]
    pub min_separation: f64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
}

#[derive(Debug, Args, Serialize)]
pub struct GeodesicArgs {
    #[command(flatten)]
    pub spec: SpecArgs,
    #[arg(long, default_value_t = 2)]
    pub level: u32,
    /// Grid points per cell side on the skeleton.
    #[arg(long)]
    pub subdivision: Option<u32>,
    /// CSV with columns x1,y1,x2,y2 (rational or decimal).
    #[arg(long)]
    pub pairs: Option<PathBuf>,
    /// Scales for the continuity modulus, e.g. `1/9,1/3`.
    #[arg(long)]
    pub modulus: Option<String>,
}

#[derive(Debug, Args, Serialize)]
pub struct EquicontArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    #[arg(long, default_value_t = 2)]
    pub level: u32,
    /// Threshold for "bounded below".
    #[arg(long, default_value = "1/49")]
    pub tau: String,
}

#[derive(Debug, Args, Serialize)]
pub struct BesovArgs {
    #[command(flatten)]
    pub spec: SpecArgs,
    #[arg(long, default_value_t = 3)]
    pub level: u32,
    /// `auto` (around d̂_W/2) or a comma-separated list.
    #[arg(long, default_value = "auto")]
    pub sigma: String,
    /// CSV with columns x,y,value; values are averaged per cell.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Random harmonic samples for the restriction ratio; 0 skips it.
    #[arg(long, default_value_t = 0)]
    pub restriction_samples: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[command(flatten)]
    pub scheme: SchemeArgs,
}

#[derive(Debug, Args, Serialize)]
pub struct SweepArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    #[arg(long, default_value_t = 3)]
    pub level: u32,
    /// Grid cells for the resistance comparison.
    #[arg(long, default_value_t = 8)]
    pub grid: usize,
    #[command(flatten)]
    pub scheme: SchemeArgs,
}

#[derive(Debug, Args, Serialize)]
pub struct WalkArgs {
    #[command(flatten)]
    pub spec: SpecArgs,
    /// `a..b` or a single level.
    #[arg(long, default_value = "3..4")]
    pub levels: String,
    #[arg(long, default_value_t = 10_000)]
    pub walks: usize,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Largest time for the heat-kernel fit; values below 20 skip it.
    #[arg(long, default_value_t = 1000)]
    pub heat_time: u64,
    #[command(flatten)]
    pub scheme: SchemeArgs,
}

#[derive(Debug, Args, Serialize)]
pub struct ResolventArgs {
    /// Single carpet; omit when `--params` gives a family.
    #[arg(long)]
    pub spec: Option<String>,
    #[arg(long)]
    pub family: Option<String>,
    #[arg(long)]
    pub params: Option<String>,
    #[arg(long, default_value_t = 3)]
    pub level: u32,
    #[arg(long, default_value = "1")]
    pub alpha: String,
    /// Base points, `w:<word>` or `p:<x>,<y>`, separated by `;`.
    #[arg(long, default_value = "p:0.01,0.01")]
    pub x: String,
    /// Cell masses.
    #[arg(long, value_enum, default_value_t = MeasureArg::Weighted)]
    pub measure: MeasureArg,
    #[command(flatten)]
    pub scheme: SchemeArgs,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MeasureArg {
    Uniform,
    Weighted,
}

#[derive(Debug, Args, Serialize)]
pub struct ReportArgs {
    #[command(flatten)]
    pub spec: SpecArgs,
    #[arg(long, default_value_t = 4)]
    pub levels: u32,
    #[arg(long, default_value_t = 2000)]
    pub walks: usize,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[command(flatten)]
    pub scheme: SchemeArgs,
}
