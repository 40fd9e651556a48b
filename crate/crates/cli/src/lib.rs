//! Command-line front end for the `fluxswap` simulator.

pub mod commands;
pub mod config;
pub mod output;
pub mod plot;

use std::fmt;

/// Process exit codes.
pub mod exit {
    pub const SUCCESS: i32 = 0;
    pub const USAGE: i32 = 1;
    pub const NUMERICAL: i32 = 2;
}

/// Marks an error as a numerical-contract failure (exit code 2).
#[derive(Debug)]
pub struct NumericalFailure(pub String);

impl fmt::Display for NumericalFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for NumericalFailure {}

/// Exit code for an error returned by a command.
pub fn exit_code(err: &anyhow::Error) -> i32 {
    let numerical = err.chain().any(|e| {
        e.is::<NumericalFailure>()
            || e.downcast_ref::<fluxswap::Error>()
                .is_some_and(fluxswap::Error::is_numerical)
    });
    if numerical {
        exit::NUMERICAL
    } else {
        exit::USAGE
    }
}
