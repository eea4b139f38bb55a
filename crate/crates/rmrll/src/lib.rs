//! Runlength-limited subcodes of Reed-Muller codes.
//!
//! This crate builds Reed-Muller codes over GF(2), carves out their
//! `(d,∞)`-runlength-limited subcodes, evaluates the closed-form rate bounds
//! that govern such subcodes, and estimates subcode rates empirically by
//! Monte-Carlo sampling and by belief propagation on an augmented Tanner
//! graph. A two-stage coding scheme (systematic outer code, constrained
//! linear inner codes) with an exact erasure decoder rounds out the toolkit.
//!
//! Each major capability has a runnable program under `examples/`; the
//! `rmrll` binary exposes the same machinery as batch subcommands that
//! emit CSV.

pub mod bp;
pub mod channel;
pub mod cli;
pub mod concat;
pub mod gf2;
pub mod math;
pub mod rll;
pub mod rm;
pub mod subcodes;

/// Errors shared across the crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("size limit exceeded: {0}")]
    TooLarge(String),
    #[error("received word inconsistent with the code: {0}")]
    Inconsistent(String),
    #[error("no sign change in bracket: {0}")]
    NoCrossover(String),
    #[error("infeasible parameters: {0}")]
    Infeasible(String),
}

pub type Result<T> = std::result::Result<T, Error>;
