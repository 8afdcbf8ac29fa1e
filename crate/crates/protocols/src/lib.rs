//! Two-party key exchange over LWR, LWE, a hybrid LWE/LWR public-key
//! setting and RLWE, reconciled with the schemes in `kcx_core`.

pub mod bandwidth;
mod common;
pub mod hybrid;
pub mod kdf;
pub mod key;
pub mod lwe;
pub mod lwr;
pub mod rlwe;
pub mod session;
pub mod suite;
pub mod wire;

pub use bandwidth::{bandwidth, Bandwidth};
pub use kdf::{derive_key, Kdf};
pub use key::ConsensusKey;
pub use session::{finish, initiate, respond, respond_with_key, Initiator};
pub use suite::{
    all_suites, suite_by_name, Attack, Family, Instance, ProtocolSuite, Published, PublishedBw, Reconciliation,
    SecurityRow,
};

use kcx_core::algebra::AlgebraError;
use kcx_core::codes::CodeError;
use kcx_core::kc::KcError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ProtocolError {
    #[error("unknown suite {name:?}; known suites: {known}")]
    UnknownSuite { name: String, known: String },
    #[error("{what} has {got} bytes, expected {expected}")]
    Length { what: &'static str, expected: usize, got: usize },
    #[error("suite {suite} is not a {expected} suite")]
    Family { suite: String, expected: &'static str },
    #[error("supplied key has {got} bits, expected {expected}")]
    KeyLength { expected: usize, got: usize },
    #[error("invalid suite: {0}")]
    InvalidSuite(String),
    #[error("responder key only applies to asymmetric reconciliation")]
    NotAsymmetric,
    #[error(transparent)]
    Kc(#[from] KcError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Code(#[from] CodeError),
}
