use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid distance {0} m: must be positive and finite")]
    InvalidDistance(f64),

    #[error("no delayed taps above the {threshold_ns} ns degeneracy threshold")]
    NoDelayedTaps { threshold_ns: f64 },

    #[error("excess delay {delay_s} s is below the degeneracy threshold")]
    DegenerateEllipse { delay_s: f64 },

    #[error("{what} = {value} out of range {range}")]
    OutOfRange {
        what: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error("unknown antenna {0:?}")]
    UnknownAntenna(String),

    #[error("antenna {0:?} has no path-loss exponent")]
    MissingExponent(String),

    #[error("mixed antenna types {tx:?}/{rx:?}; enable mixed pairs to use the Tx exponent")]
    MixedAntennaTypes { tx: String, rx: String },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("normalized delays require a delay spread (ds_ns)")]
    MissingScale,

    #[error("power delay profile has no taps")]
    EmptyProfile,

    #[error("invalid scenario: {0}")]
    InvalidScenario(String),

    #[error("invalid config: {0}")]
    Config(String),
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}
