use thiserror::Error;

#[derive(Debug, Error)]
pub enum CarpetError {
    #[error("malformed rational literal `{0}`")]
    MalformedRational(String),
    #[error("config error: {0}")]
    Config(String),
    #[error("expected {expected} offsets, found {found}")]
    OffsetCount { expected: usize, found: usize },
    #[error("offset {index} = ({x}, {y}) lies outside [0, 1-1/k]^2")]
    OffsetOutOfRange { index: usize, x: String, y: String },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("level {level} needs {cells} cells, above the budget of {budget} (set CARPET_CELL_BUDGET to override)")]
    BudgetExceeded { level: u32, cells: u128, budget: u64 },
    #[error("letter {letter} out of range 1..={n}")]
    LetterOutOfRange { letter: usize, n: usize },
    #[error("symmetry closure produces overlapping squares at offsets {0} and {1}")]
    ClosureOverlap(String, String),
    #[error("network is disconnected ({components} components)")]
    Disconnected { components: usize },
    #[error("solver did not converge: residual {residual:e} after {iterations} iterations")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("linear algebra failure: {0}")]
    Numerical(String),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("unreachable target in skeleton graph")]
    Unreachable,
    #[error("family does not converge: {0}")]
    NotConverging(String),
    #[error("walk exceeded {0} steps")]
    WalkCap(u64),
    #[error("lattice scale overflow; offsets have denominators too large for level {0}")]
    Overflow(u32),
}

pub type Result<T> = std::result::Result<T, CarpetError>;
