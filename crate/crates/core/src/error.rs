use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("non-finite sample {value} at grid point {point:?}")]
    NonFinite { point: Vec<f64>, value: String },

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("dimension {found} not supported here (expected {expected})")]
    Dimension { expected: &'static str, found: usize },

    /// A truncation radius, mollifier or quadrature rule is too coarse for the grid.
    #[error("unresolved: {0}")]
    Resolution(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("calibration mismatch: {0}")]
    Calibration(String),

    #[error("construction check failed: {0}")]
    Construction(String),

    #[error("fit failed: {0}")]
    Fit(String),

    #[error("config: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Configuration and resolution problems map to exit code 2, everything else to 1.
    pub fn is_configuration(&self) -> bool {
        matches!(
            self,
            Error::InvalidGrid(_)
                | Error::Dimension { .. }
                | Error::Resolution(_)
                | Error::InvalidArgument(_)
                | Error::Config(_)
                | Error::GridMismatch(_)
        )
    }
}
