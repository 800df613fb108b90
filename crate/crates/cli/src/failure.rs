//! Errors that carry their process exit code.

/// Bad arguments, unreadable or malformed input.
pub const INPUT: u8 = 2;
/// Inputs that are individually fine but do not belong together.
pub const MISMATCH: u8 = 3;
/// Anything else: a broken internal invariant.
pub const INTERNAL: u8 = 4;

#[derive(Debug, thiserror::Error)]
#[error("{message}")]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

pub fn input(message: impl Into<String>) -> anyhow::Error {
    Failure { code: INPUT, message: message.into() }.into()
}

pub fn mismatch(message: impl Into<String>) -> anyhow::Error {
    Failure { code: MISMATCH, message: message.into() }.into()
}
