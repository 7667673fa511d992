use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("the zero linear form does not define a hyperplane")]
    ZeroForm,
    #[error("value out of range: {0}")]
    OutOfRange(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("flats are not comparable")]
    Incomparable,
    #[error("derivation is not in D^{p}: fails for hyperplane #{hyperplane}")]
    NotInModule { p: usize, hyperplane: usize },
    #[error("degree mismatch: derivation degrees sum to {got}, expected {expected}")]
    DegreeMismatch { got: u32, expected: u32 },
    #[error("determinant is not a scalar multiple of the defining polynomial")]
    NotSaitoBasis,
    #[error("Hilbert numerator of D^{p} did not stabilize up to degree {horizon}")]
    NotStabilized { p: usize, horizon: u32 },
    #[error("psi numerator is not divisible by (1 - q)^{ell}")]
    PolynomialityFailure { ell: usize },
    #[error("no rank-2 basis found up to degree {0}")]
    SearchExhausted(u32),
    #[error("local freeness undetermined for {0} flat(s) of rank >= 3")]
    LocalFreenessUndetermined(usize),
    #[error("internal consistency failure: {0}")]
    Inconsistent(String),
}

impl Error {
    /// Stabilization and polynomiality failures are numerical-horizon
    /// problems rather than bad input.
    pub fn is_horizon_failure(&self) -> bool {
        matches!(self, Error::NotStabilized { .. } | Error::PolynomialityFailure { .. })
    }

    /// Process exit status: 3 for horizon failures, 1 for internal
    /// inconsistencies, 2 for everything caused by the input.
    pub fn exit_code(&self) -> i32 {
        match self {
            e if e.is_horizon_failure() => 3,
            Error::Inconsistent(_) => 1,
            _ => 2,
        }
    }
}
