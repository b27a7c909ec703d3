use thiserror::Error;

use crate::farey::Slope;
use crate::C64;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The input is degenerate for the requested construction (identity
    /// matrix, pure rotation, boundary of the normalization).
    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("argument lies on the logarithm branch cut: {0}")]
    BranchCut(String),

    /// A coordinate change left the principal chart `Re λ > 0`.
    #[error("result leaves the principal chart: {0}")]
    OutOfChart(String),

    #[error("slope {0} is a base case of the Farey recursion and has no parents")]
    BaseCase(Slope),

    #[error("complex shear is undefined for a Fuchsian parameter (Im τ = 0)")]
    FuchsianInput,

    #[error("footpoint search for slope {0} failed to bracket a minimum")]
    SearchFailure(Slope),

    #[error("trace derivative vanishes along the ray near τ = {tau}")]
    SingularRay { tau: C64, trace: C64 },

    #[error("corrector failed to converge near τ = {tau}; reduce the step")]
    StepTooLarge { tau: C64 },

    #[error("ray left the slice domain near τ = {tau} before reaching |tr| = 2")]
    LeftSlice { tau: C64 },
}

impl Error {
    /// True for failures of an iterative numerical method, as opposed to
    /// invalid input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::SearchFailure(_)
                | Error::SingularRay { .. }
                | Error::StepTooLarge { .. }
                | Error::LeftSlice { .. }
        )
    }
}
