use std::fmt;
use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Axis of the pump-turbine characteristic a query fell outside of.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    UnitSpeed,
    Opening,
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Axis::UnitSpeed => f.write_str("unit speed n11"),
            Axis::Opening => f.write_str("guide vane opening y"),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("{axis} = {value} outside characteristic envelope [{min}, {max}]")]
    OutOfEnvelope {
        axis: Axis,
        value: f64,
        min: f64,
        max: f64,
    },

    #[error("configuration error: {0}")]
    Configuration(String),

    #[error("infeasible setpoint {target_mw} MW: {reason}")]
    InfeasibleSetpoint { target_mw: f64, reason: String },

    #[error("integration blow-up at t = {time_s} s: {detail}")]
    IntegrationBlowup { time_s: f64, detail: String },

    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("invalid value for `{field}`: {message}")]
    Field { field: String, message: String },

    #[error("duplicate key `{key}` at line {first_line} and line {second_line}")]
    DuplicateKey {
        key: String,
        first_line: usize,
        second_line: usize,
    },

    #[error("missing required section(s): {}", .0.join(", "))]
    MissingSections(Vec<String>),

    #[error("unknown channel `{0}`")]
    UnknownChannel(String),

    #[error("no channels requested")]
    EmptyChannels,

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn config(msg: impl Into<String>) -> Self {
        Error::Configuration(msg.into())
    }

    pub fn field(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Field {
            field: field.into(),
            message: message.into(),
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// True for errors caused by the input documents rather than by a run.
    pub fn is_config_error(&self) -> bool {
        matches!(
            self,
            Error::Configuration(_)
                | Error::Syntax { .. }
                | Error::Field { .. }
                | Error::DuplicateKey { .. }
                | Error::MissingSections(_)
                | Error::Io { .. }
        )
    }
}
