//! Error classes and the exit codes they map to.

use std::fmt;

/// Bad input: unreadable or malformed configuration, invalid parameters.
#[derive(Debug)]
pub struct ConfigError(pub String);

/// A solver ran but did not converge.
#[derive(Debug)]
pub struct NumericalError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "configuration error: {}", self.0)
    }
}

impl fmt::Display for NumericalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "numerical failure: {}", self.0)
    }
}

impl std::error::Error for ConfigError {}
impl std::error::Error for NumericalError {}

pub fn config_error(msg: impl Into<String>) -> anyhow::Error {
    ConfigError(msg.into()).into()
}

pub fn numerical_error(msg: impl Into<String>) -> anyhow::Error {
    NumericalError(msg.into()).into()
}

/// Wraps a core error into the matching class.
pub fn core(e: resonant_core::Error) -> anyhow::Error {
    use resonant_core::Error as E;
    match e {
        E::InvalidParameter(_)
        | E::EmptyWindow
        | E::SegmentOutOfGrid { .. }
        | E::NotARoot(_)
        | E::NotDecaying
        | E::NonPositiveKappa
        | E::DimensionMismatch { .. }
        | E::BadPotential(_) => config_error(e.to_string()),
        E::AtPole(_)
        | E::NoConvergenceQr(_)
        | E::NoConvergence
        | E::NotConverged(_)
        | E::OscillationDetected { .. }
        | E::UnstableStep { .. }
        | E::Overflow(_)
        | E::ExtrapolationUnstable(_) => numerical_error(e.to_string()),
    }
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_OTHER: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

pub fn exit_code(err: &anyhow::Error) -> i32 {
    if err.downcast_ref::<ConfigError>().is_some() {
        EXIT_CONFIG
    } else if err.downcast_ref::<NumericalError>().is_some() {
        EXIT_NUMERICAL
    } else {
        EXIT_OTHER
    }
}
