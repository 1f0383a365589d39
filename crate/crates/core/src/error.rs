use std::path::PathBuf;

/// Errors raised by the construction, verification and I/O layers.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("degenerate expansion point: division by the zero jet")]
    ZeroJetDivisor,

    #[error("square root of a jet with odd valuation {0} is not an integer-power series")]
    OddValuation(i32),

    #[error("exponential of a jet with negative valuation {0} (essential singularity)")]
    EssentialSingularity(i32),

    #[error("near-singular 3x3 matrix: |det| = {det_abs:e} below threshold {threshold:e}")]
    SingularMatrix { det_abs: f64, threshold: f64 },

    #[error("eigenfunction vanishes (|phi|^2 = {norm_sqr:e}); Darboux matrix is singular")]
    ZeroEigenfunction { norm_sqr: f64 },

    #[error("series corruption at step {step}: kernel residual ratio {ratio:e} exceeds {tolerance:e}")]
    SeriesCorruption { step: usize, ratio: f64, tolerance: f64 },

    #[error("spectral seed is not even in f: odd/even coefficient ratio {ratio:e}")]
    OddSeries { ratio: f64 },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("grid too small: need at least {need_x}x{need_t} points, got {nx}x{nt}")]
    GridTooSmall { nx: usize, nt: usize, need_x: usize, need_t: usize },

    #[error("no soliton found: strongest deviation {deviation:e} below prominence {prominence:e}")]
    NoSoliton { deviation: f64, prominence: f64 },

    #[error("unknown preset `{0}`")]
    UnknownPreset(String),

    #[error("at (x, t) = ({x}, {t}): {source}")]
    AtPoint {
        x: f64,
        t: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {message}")]
    Format { path: PathBuf, message: String },
}

impl Error {
    pub(crate) fn at(self, x: f64, t: f64) -> Error {
        match self {
            e @ Error::AtPoint { .. } => e,
            e => Error::AtPoint { x, t, source: Box::new(e) },
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
