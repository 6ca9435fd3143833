//! Error type shared by every module of the crate.

use thiserror::Error;

/// Errors reported by quaternion, series, su(2) and harness operations.
///
/// All operations in this crate are pure; an `Err` never leaves partial
/// state behind.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Attempted to invert a quaternion whose norm is (numerically) zero.
    #[error("zero divisor: quaternion norm is below the invertibility floor")]
    ZeroDivisor,

    /// The vector part of the argument is too small for a well-defined
    /// imaginary direction; callers must take the real-limit code path.
    #[error("near real axis: vector part below r_min, unit imaginary undefined")]
    NearRealAxis,

    /// The reference direction passed to a splitting routine is not a unit
    /// pure imaginary quaternion.
    #[error("invalid unit imaginary: expected zero scalar part and unit norm with u^2 = -1")]
    InvalidUnitImaginary,

    /// The linear map x -> ax + xb is singular or near-singular; the
    /// Sylvester problem has no stable solution.
    #[error("singular operator: the map x -> ax + xb is singular or near-singular")]
    SingularOperator,

    /// Exponential argument too large for f64.
    #[error("overflow: exponential argument exceeds the f64 range")]
    Overflow,

    /// Logarithm of zero.
    #[error("zero argument: logarithm undefined at 0")]
    ZeroArgument,

    /// Argument on (or too close to) the logarithm's branch locus: the
    /// negative real axis, or an expansion point with imaginary magnitude
    /// at the cot(r) pole.
    #[error("branch point: argument too close to the logarithm branch locus")]
    BranchPoint,

    /// The product-rule check requires the right-hand series G to have real
    /// coefficients.
    #[error("non-real G: the product series G must have real coefficients")]
    NonRealG,

    /// The su(2) operations require real series coefficients.
    #[error("non-real coefficients: su(2) series evaluation requires real coefficients")]
    NonRealCoefficients,

    /// An su(2) element with a vanishing generator part has no local
    /// splitting direction.
    #[error("near scalar: su(2) element has no generator part to split against")]
    NearScalar,

    /// Power series degree above the supported cap.
    #[error("degree cap: series degree exceeds {0}")]
    DegreeCap(usize),

    /// Unknown convergence study name.
    #[error("unknown study: {0}")]
    UnknownStudy(String),

    /// Invalid sweep or suite configuration.
    #[error("invalid configuration: {0}")]
    ConfigInvalid(String),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
