//! Failure probabilities and lattice-attack cost estimates for the
//! suites in `kcx_protocols`.

pub mod dist;
pub mod error;
pub mod montecarlo;
pub mod security;

pub use error::{error_rate, ErrorRate};
pub use security::{security_estimate, AttackEstimate, CostModel, LweInstance};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum AnalysisError {
    #[error("distribution mass {0} is not 1")]
    NotNormalized(f64),
    #[error("{0}")]
    Unsupported(String),
    #[error("invalid argument: {0}")]
    Param(String),
}
