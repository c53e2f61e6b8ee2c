use std::fmt;
use std::process::ExitCode;

/// Why a command did not succeed; each variant has a stable exit code.
#[derive(Debug)]
pub enum Failure {
    /// Bad flags, config, or input files (exit 2).
    Usage(anyhow::Error),
    /// The solver or oracle failed while running (exit 1).
    Runtime(anyhow::Error),
    /// Every step ran, but at least one check failed (exit 1).
    Checks(usize),
}

impl Failure {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            Failure::Usage(_) => ExitCode::from(2),
            Failure::Runtime(_) | Failure::Checks(_) => ExitCode::from(1),
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(e) => write!(f, "usage error: {e:#}"),
            Failure::Runtime(e) => write!(f, "error: {e:#}"),
            Failure::Checks(n) => write!(f, "{n} check(s) failed"),
        }
    }
}

pub trait Classify<T> {
    fn usage(self) -> Result<T, Failure>;
    fn runtime(self) -> Result<T, Failure>;
}

impl<T, E: Into<anyhow::Error>> Classify<T> for Result<T, E> {
    fn usage(self) -> Result<T, Failure> {
        self.map_err(|e| Failure::Usage(e.into()))
    }
    fn runtime(self) -> Result<T, Failure> {
        self.map_err(|e| Failure::Runtime(e.into()))
    }
}
