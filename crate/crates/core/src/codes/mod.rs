//! Vector consensus codes: SEC, D̃4 (NewHope and AKCN-4:1) and E8.

pub mod d4;
pub mod e8;
pub mod sec;

pub use d4::{akcn41_con, akcn41_rec, cvp_d4, newhope_con, newhope_rec, Rat4};
pub use e8::{decode_e8, e8_con, e8_rec};
pub use sec::{SecCode, SecCodeword};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodeError {
    #[error("expected {expected} bits, got {got}")]
    Length { expected: usize, got: usize },
    #[error("unsupported code parameter: {0}")]
    Unsupported(String),
}
