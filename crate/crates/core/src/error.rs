use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("cutoff s = {requested} exceeds the safety bound {bound}")]
    CutoffTooLarge { requested: u64, bound: u64 },

    #[error("spectral parameter must be a finite non-negative number, got {0}")]
    InvalidLambda(f64),

    #[error("eigenvalue index k must be at least 1")]
    ZeroIndex,

    #[error(
        "no eigenvalue with norm s = {0} (not a sum of two squares or beyond the table cutoff)"
    )]
    UnknownClass(u64),

    #[error("{0} is not a sum of two squares")]
    NotSumOfTwoSquares(u64),

    #[error("spectrum table too small: last covered index is {covered}, need at least {needed}")]
    TableTooSmall { covered: u64, needed: u64 },

    #[error("J0 evaluated outside the validated range |x| <= {max}: x = {x}")]
    BesselOutOfRange { x: f64, max: f64 },

    #[error("no sign change of J0 on [{lo}, {hi}]")]
    NoSignChange { lo: f64, hi: f64 },

    #[error("Bessel zero failed its check: value {value}, residual {residual:e}")]
    BadBesselZero { value: f64, residual: f64 },

    #[error("pleijel bound needs at least 4 nodal domains (area of the smallest domain must be <= 1/pi), got k = {0}")]
    TooFewDomains(u64),

    #[error("invalid eigenfunction: {0}")]
    InvalidEigenfunction(String),

    #[error("grid size {0} is below the minimum of 16")]
    GridTooSmall(usize),

    #[error("zero tolerance must be positive and finite, got {0}")]
    InvalidZeroTolerance(f64),

    #[error("every sampled cell is within the zero tolerance")]
    DegenerateSample,

    #[error("nodal count not stable under refinement: {coarse} domains at N = {n}, {fine} at N = {}; rerun on a finer grid", 2 * n)]
    NotStable {
        n: usize,
        coarse: usize,
        fine: usize,
    },

    #[error("malformed eigenfunction spec `{spec}`: {reason}")]
    MalformedSpec { spec: String, reason: String },
}
