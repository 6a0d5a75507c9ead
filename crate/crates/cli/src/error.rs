use std::process::ExitCode;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] gauss_sums_core::Error),
    #[error("--matrix is not a JSON array of arrays of integers: {0}")]
    MatrixJson(#[from] serde_json::Error),
    #[error("cannot write output: {0}")]
    Io(#[from] std::io::Error),
}

/// Outcome of a command that ran to completion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    VerificationFailed,
}

impl Status {
    pub fn from_verified(ok: bool) -> Self {
        if ok {
            Status::Ok
        } else {
            Status::VerificationFailed
        }
    }

    pub fn exit_code(self) -> ExitCode {
        match self {
            Status::Ok => ExitCode::SUCCESS,
            Status::VerificationFailed => ExitCode::from(1),
        }
    }
}

pub const USAGE_EXIT: u8 = 2;
