use alloc::boxed::Box;

use crate::lattice::IterationTrace;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),

    #[error("search window is empty")]
    EmptyWindow,

    #[error("wave number is a pole of the S matrix (|denominator| = {0:e})")]
    AtPole(f64),

    #[error("segment [-{half_width}, {half_width}] does not lie on the sampling grid")]
    SegmentOutOfGrid { half_width: f64 },

    #[error("state is not a root of its defining equation (residual {0:e})")]
    NotARoot(f64),

    #[error("state is not a decaying resonance")]
    NotDecaying,

    #[error("decay constant kappa must be positive")]
    NonPositiveKappa,

    #[error("QR iteration did not converge for a {0}x{0} matrix")]
    NoConvergenceQr(usize),

    #[error("Newton iteration did not converge from any seed")]
    NoConvergence,

    #[error("self-consistent iteration did not converge after {} steps", .0.iterations)]
    NotConverged(Box<IterationTrace>),

    #[error("self-consistent iteration entered a cycle of period {period}")]
    OscillationDetected { period: usize, trace: Box<IterationTrace> },

    #[error("amplitude left the representable range at t = {time}")]
    UnstableStep { time: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("Jost solution would overflow (|Im k| r_max = {0})")]
    Overflow(f64),

    #[error("potential does not vanish at r_max (|U(r_max)| r_max^2 = {0:e})")]
    BadPotential(f64),

    #[error("intercept extrapolation unstable (relative spread {0:e})")]
    ExtrapolationUnstable(f64),
}
