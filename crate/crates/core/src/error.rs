use thiserror::Error;

/// Errors surfaced by the exact-arithmetic and geometric layers.
///
/// Every variant carries a stable machine-readable code via [`Error::code`],
/// used verbatim by the CLI's structured error objects.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("zero input where a nonzero value is required")]
    ZeroInput,
    #[error("division by zero")]
    DivisionByZero,
    #[error("radicand mismatch: cannot combine sqrt({0}) with sqrt({1})")]
    RadicandMismatch(String, String),
    #[error("negative radicand: no real point over sqrt({0})")]
    NegativeRadicand(String),
    #[error("invalid conic: all six coefficients are zero")]
    InvalidConic,
    #[error("invalid linear fractional map: {0}")]
    InvalidMap(String),
    #[error("degenerate conic (rank <= 2 coefficient matrix)")]
    DegenerateConic,
    #[error("fiber degenerates: (a-dt) and (b-et) vanish simultaneously")]
    DegenerateFiber,
    #[error("map indeterminate (0/0) at this point")]
    MapIndeterminate,
    #[error("point is not on the curve")]
    PointNotOnCurve,
    #[error("point is not on the conic")]
    PointNotOnConic,
    #[error("point at infinity where an affine point is required")]
    PointAtInfinity,
    #[error("singular curve: {0}")]
    SingularCurve(String),
    #[error("point does not have order 4: {0}")]
    NotOrderFour(String),
    #[error("discriminant is zero at t0: c_n undefined")]
    DiscZeroAtSeed,
    #[error("discriminant derivative is zero at t0: k undefined")]
    DiscDerivZeroAtSeed,
    #[error("discriminant value is not a rational square at t0")]
    DiscNotSquare,
    #[error("modulus k = {0} is excluded")]
    ExcludedModulus(String),
    #[error("trivial progression: delta = 0 (point has XY = 0)")]
    TrivialProgression,
    #[error("excluded locus: {0}")]
    ExcludedLocus(String),
    #[error("arithmetic progression condition violated")]
    NotArithmeticProgression,
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    /// Stable error code for machine consumption.
    pub fn code(&self) -> &'static str {
        match self {
            Error::ZeroInput => "zero_input",
            Error::DivisionByZero => "division_by_zero",
            Error::RadicandMismatch(..) => "radicand_mismatch",
            Error::NegativeRadicand(_) => "negative_radicand",
            Error::InvalidConic => "invalid_conic",
            Error::InvalidMap(_) => "invalid_map",
            Error::DegenerateConic => "degenerate_conic",
            Error::DegenerateFiber => "degenerate_fiber",
            Error::MapIndeterminate => "map_indeterminate",
            Error::PointNotOnCurve => "point_not_on_curve",
            Error::PointNotOnConic => "point_not_on_conic",
            Error::PointAtInfinity => "point_at_infinity",
            Error::SingularCurve(_) => "singular_curve",
            Error::NotOrderFour(_) => "not_order_four",
            Error::DiscZeroAtSeed => "disc_zero_at_seed",
            Error::DiscDerivZeroAtSeed => "disc_deriv_zero_at_seed",
            Error::DiscNotSquare => "disc_not_square",
            Error::ExcludedModulus(_) => "excluded_modulus",
            Error::TrivialProgression => "trivial_progression",
            Error::ExcludedLocus(_) => "excluded_locus",
            Error::NotArithmeticProgression => "not_arithmetic_progression",
            Error::InvalidInput(_) => "invalid_input",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
