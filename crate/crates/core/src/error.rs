use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("sample count {got} does not match node count {expected}")]
    NodeCountMismatch { expected: usize, got: usize },

    #[error("invalid contour: {0}")]
    InvalidContour(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("domain is not star-shaped with respect to the chart center {0}")]
    NotStarShaped(String),

    #[error("evaluation point is {distance:.3e} from the boundary, inside the guard distance {guard:.3e}")]
    GuardViolation { distance: f64, guard: f64 },

    #[error("point lies outside the domain: {0}")]
    OutsideDomain(String),

    #[error("kernel is singular at the requested arguments")]
    Singular,

    #[error("contour orientation is inconsistent: winding number {0}")]
    Orientation(f64),

    #[error("boundary condition violated: {0}")]
    BoundaryCondition(String),

    #[error("basis size {requested} exceeds the supported maximum {max}")]
    BasisTooLarge { requested: usize, max: usize },

    #[error("Gram matrix is numerically singular (condition number {0:.3e})")]
    IllConditionedGram(f64),

    #[error("degenerate gradient: |grad rho| = {norm:.3e} is below kappa/2 = {floor:.3e}")]
    DegenerateGradient { norm: f64, floor: f64 },

    #[error("Neumann series diverges: estimated norm of A is {0:.6}")]
    NeumannDivergent(f64),

    #[error("I - A is ill conditioned (condition number {0:.3e})")]
    IllConditionedSolve(f64),

    #[error("fractional order {0} must lie in (0, 1)")]
    InvalidOrder(f64),

    #[error("Cauchy-Fantappie weight normalization violated: residual {0:.3e}")]
    WeightNormalization(f64),

    #[error("point is not on the boundary: |rho| = {0:.3e}")]
    OffBoundary(f64),

    #[error("sample at distance {distance:.3e} lies outside the neighborhood of radius {radius:.3e}")]
    OutsideNeighborhood { distance: f64, radius: f64 },

    #[error("singular function vanishes at an interior point; the domain is not convex")]
    NonConvex,

    #[error("finite type mismatch: {0}")]
    FiniteTypeMismatch(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
