use crate::gauge::ConditionReport;

/// Errors raised by norm computations, width formulas and their oracles.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("argument must be nonnegative and finite, got {0}")]
    NegativeArgument(f64),

    #[error("scale must be positive and finite, got {0}")]
    NonpositiveScale(f64),

    #[error("invalid gauge: {0}")]
    InvalidGauge(String),

    #[error("non-invertible gauge: {0}")]
    NonInvertibleGauge(String),

    #[error("composed gauge t -> M(t^(1/p)) is not an Orlicz function: {0}")]
    ComposedGaugeNotOrlicz(ConditionReport),

    #[error("invalid index set: {0}")]
    InvalidIndexSet(String),

    #[error("invalid weights: {0}")]
    InvalidWeights(String),

    #[error("hypothesis violated: {message}")]
    Hypothesis {
        message: String,
        report: Option<ConditionReport>,
    },

    #[error("truncation too short to certify the result: {0}")]
    Truncation(String),

    #[error("oracle scale limit exceeded: {0}")]
    OracleScale(String),
}

impl Error {
    pub(crate) fn hypothesis(message: impl Into<String>) -> Self {
        Error::Hypothesis {
            message: message.into(),
            report: None,
        }
    }

    pub(crate) fn hypothesis_with_report(message: impl Into<String>, report: ConditionReport) -> Self {
        Error::Hypothesis {
            message: message.into(),
            report: Some(report),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
