use alloc::string::String;

use crate::config::RegimeTag;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("{op}: argument out of domain ({detail})")]
    Domain { op: &'static str, detail: String },

    #[error("{op} is not available in the {regime} regime: {reason}")]
    Regime {
        op: &'static str,
        regime: RegimeTag,
        reason: &'static str,
    },

    #[error(
        "quadrature did not converge: estimate {estimate:e}, error estimate {error:e} \
         after {intervals} subintervals ({evaluations} evaluations)"
    )]
    Quadrature {
        estimate: f64,
        error: f64,
        intervals: usize,
        evaluations: usize,
    },

    #[error("{function} diverges or is unsupported at ({detail})")]
    Divergence {
        function: &'static str,
        detail: String,
    },

    #[error("empty sample")]
    EmptySample,

    #[error("moment of order {order} is infinite: {reason}")]
    InfiniteMoment { order: u32, reason: String },
}

impl Error {
    pub(crate) fn domain(op: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain {
            op,
            detail: detail.into(),
        }
    }
}
