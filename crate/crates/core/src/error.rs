use thiserror::Error;

/// Errors raised by the planning and physics routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum PlanError {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("singular contact configuration: {0}")]
    SingularConfiguration(String),

    #[error("infeasible acceleration phase: {0}")]
    InfeasiblePhase(String),

    #[error("target distance {distance} m is below the minimal achievable displacement {minimum} m")]
    InfeasibleDistance { distance: f64, minimum: f64 },
}

pub type Result<T> = std::result::Result<T, PlanError>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> PlanError {
    PlanError::InvalidParameter {
        name,
        reason: reason.into(),
    }
}

/// Fails unless `value` is finite and strictly positive.
pub(crate) fn require_positive(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(invalid(name, format!("must be finite and > 0, got {value}")))
    }
}

pub(crate) fn require_finite(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(invalid(name, format!("must be finite, got {value}")))
    }
}
