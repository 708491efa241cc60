use thiserror::Error;

/// Errors raised by the model, the solvers and the simulator.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A utility was evaluated outside its valid wealth domain.
    #[error("wealth {wealth} is outside the domain of the {family} utility (requires {requirement})")]
    Domain {
        family: &'static str,
        wealth: f64,
        requirement: String,
    },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// A modelling assumption on p(k) or v(k) does not hold.
    #[error("{function} violates `{inequality}` at k = {k}: {detail}")]
    Invariant {
        function: &'static str,
        inequality: &'static str,
        k: usize,
        detail: String,
    },

    #[error("no grid point satisfies the participation constraint")]
    EmptyFeasibleSet,

    /// Wraps a failure raised while evaluating one point of a sweep.
    #[error("at {axis} = {at}: {source}")]
    SweepPoint {
        axis: &'static str,
        at: f64,
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    /// True when the root cause is a utility domain violation.
    pub fn is_domain(&self) -> bool {
        match self {
            Error::Domain { .. } => true,
            Error::SweepPoint { source, .. } => source.is_domain(),
            _ => false,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
