use core::fmt;

/// Failures raised by the numerical core.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Material parameters outside `0 < a <= b`, or not finite.
    InvalidParams { a: f64, b: f64 },
    /// The point is `s = 0` or lies on the negative real axis without a cut side.
    Domain(&'static str),
    /// An argument violates an operation's precondition.
    InvalidArgument(&'static str),
    /// `|sinh(s M(s))|` is below the pole-proximity floor.
    NearPole { sinh_abs: f64 },
    /// Newton iteration did not reach the root tolerance.
    NoConvergence { index: usize, residual: f64 },
    /// Two branch indices converged to the same point.
    RootCollision { index: usize },
    /// The iterate left the upper half plane.
    EscapedToCut { index: usize },
    /// Residue requested at a pole that failed the simplicity check.
    NonSimplePole { index: usize },
    /// Adaptive quadrature hit its subdivision cap before meeting tolerance.
    QuadratureTolerance { error: f64, subdivisions: usize },
    /// The integrand returned a non-finite value.
    NonFinite { at: f64 },
    /// The forcing family violates the admissibility hypotheses for this use.
    InadmissibleForcing(&'static str),
    /// The inverse Laplace oracle could not produce a consistent value.
    OracleFailure(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidParams { a, b } => {
                write!(f, "invalid material parameters a = {a}, b = {b} (need 0 < a <= b, finite)")
            }
            Error::Domain(msg) => write!(f, "point outside the cut plane: {msg}"),
            Error::InvalidArgument(msg) => write!(f, "invalid argument: {msg}"),
            Error::NearPole { sinh_abs } => {
                write!(f, "evaluation too close to a pole (|sinh(sM)| = {sinh_abs:e})")
            }
            Error::NoConvergence { index, residual } => {
                write!(f, "pole {index}: Newton did not converge (residual {residual:e})")
            }
            Error::RootCollision { index } => {
                write!(f, "pole {index}: collided with a previously accepted root")
            }
            Error::EscapedToCut { index } => write!(f, "pole {index}: iterate escaped to the branch cut"),
            Error::NonSimplePole { index } => write!(f, "pole {index} is not simple"),
            Error::QuadratureTolerance { error, subdivisions } => write!(
                f,
                "quadrature tolerance not met after {subdivisions} subdivisions (error {error:e})"
            ),
            Error::NonFinite { at } => write!(f, "integrand is not finite at {at}"),
            Error::InadmissibleForcing(msg) => write!(f, "inadmissible forcing: {msg}"),
            Error::OracleFailure(msg) => write!(f, "oracle failure: {msg}"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
