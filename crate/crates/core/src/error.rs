use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// The group logarithm is requested too close to the cut locus.
    #[error("point is within {margin} of the cut locus (distance to antipode {distance})")]
    CutLocus { margin: f64, distance: f64 },

    #[error("consecutive path points are nearly antipodal (1 + cos = {gap:e})")]
    StepTooLarge { gap: f64 },

    #[error("field endpoint is not zero: |K_{which}| = {norm:e}")]
    Endpoint { which: u8, norm: f64 },

    #[error("form of degree ({h}, {v}) evaluated on {got_h} horizontal and {got_v} vertical fields")]
    DegreeMismatch {
        h: usize,
        v: usize,
        got_h: usize,
        got_v: usize,
    },

    #[error("form `{0}` has no derivative kernels and finite differences are disabled")]
    MissingDerivativeKernel(String),

    #[error("heat kernel time {t} is below the configured floor {floor}")]
    TimeBelowFloor { t: f64, floor: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
