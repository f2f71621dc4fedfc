//! Command implementations behind the `loopforge` binary.

pub mod campaign;
pub mod commands;

/// Result of a command that completed without error.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    /// A verification check failed.
    Fail,
}

impl Outcome {
    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Pass => 0,
            Outcome::Fail => 2,
        }
    }
}

/// Exit code for commands that could not run.
pub const ERROR_EXIT: i32 = 1;

/// Worker count from `LOOPFORGE_THREADS`, if set to a positive integer.
pub fn threads_from_env() -> Option<usize> {
    std::env::var("LOOPFORGE_THREADS").ok()?.trim().parse().ok().filter(|&n| n > 0)
}
