use std::fmt;

/// Errors surfaced by the library.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Coupling strength gamma must be finite and non-negative.
    InvalidCoupling(f64),
    /// Detuning delta must be finite.
    InvalidDetuning(f64),
    /// Mean photon number must be finite and non-negative.
    InvalidMeanPhotonNumber(f64),
    /// Power transmission must lie in [0, 1].
    InvalidTransmission(f64),
    /// gamma = delta = 0 leaves the transmitted/reflected split undefined.
    DegenerateParams,
    /// Spherical Bessel functions are not evaluated at rho = 0; callers use
    /// the small-argument limit before reaching zero.
    BesselZeroArgument,
    /// Spherical Bessel order below -1 is not supported.
    BesselOrder(i64),
    /// sqrt or reciprocal of a jet whose constant term vanishes.
    JetBranchPoint(&'static str),
    /// State vector norm deviates from 1 beyond tolerance; holds the norm found.
    UnnormalizedState(f64),
    /// A probability fell below the negativity tolerance, indicating
    /// inconsistent inputs or a numerical failure.
    NegativeProbability { index: usize, value: f64 },
    /// Requested truncation cannot hold the state (e.g. Fock N above n_max).
    TruncationTooSmall { required: usize, given: usize },
    /// Derivative extraction multiplies by k!, which overflows f64 beyond
    /// order 170; the direct summation route has no such ceiling.
    JetOrderTooLarge(usize),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidCoupling(g) => {
                write!(f, "coupling gamma must be finite and >= 0, got {g}")
            }
            Error::InvalidDetuning(d) => write!(f, "detuning delta must be finite, got {d}"),
            Error::InvalidMeanPhotonNumber(n) => {
                write!(f, "mean photon number must be finite and >= 0, got {n}")
            }
            Error::InvalidTransmission(t) => {
                write!(f, "transmission must lie in [0, 1], got {t}")
            }
            Error::DegenerateParams => {
                write!(f, "gamma = delta = 0: transmitted/reflected split is undefined")
            }
            Error::BesselZeroArgument => write!(f, "spherical Bessel argument must be nonzero"),
            Error::BesselOrder(n) => write!(f, "spherical Bessel order must be >= -1, got {n}"),
            Error::JetBranchPoint(op) => {
                write!(f, "jet {op} needs a nonzero constant term")
            }
            Error::UnnormalizedState(norm) => {
                write!(f, "state vector norm is {norm}, expected 1 within 1e-10")
            }
            Error::NegativeProbability { index, value } => {
                write!(f, "probability at index {index} is {value}, below tolerance")
            }
            Error::JetOrderTooLarge(k) => {
                write!(
                    f,
                    "jet differentiation overflows beyond order 170 (requested {k}); \
                     use the direct summation route"
                )
            }
            Error::TruncationTooSmall { required, given } => {
                write!(f, "truncation n_max = {given} too small, need at least {required}")
            }
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
