use std::path::{Path, PathBuf};

use serde::Serialize;
use thiserror::Error;

/// Failures of one run, each with its process exit status.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid configuration: {message}")]
    Config { message: String, field: String },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("internal error: {0}")]
    Internal(String),
}

#[derive(Serialize)]
struct Diagnostic<'a> {
    error: &'static str,
    exit_code: u8,
    message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    field: Option<&'a str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    path: Option<String>,
}

impl CliError {
    pub fn config(message: impl Into<String>, field: impl Into<String>) -> Self {
        CliError::Config {
            message: message.into(),
            field: field.into(),
        }
    }

    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    /// 2 for anything the user can fix in the configuration or the output
    /// location, 3 for broken internal invariants.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config { .. } | CliError::Io { .. } => 2,
            CliError::Internal(_) => 3,
        }
    }

    pub fn field(&self) -> Option<&str> {
        match self {
            CliError::Config { field, .. } if !field.is_empty() => Some(field),
            _ => None,
        }
    }

    /// One-line JSON diagnostic for stderr.
    pub fn diagnostic(&self) -> String {
        let d = Diagnostic {
            error: match self {
                CliError::Config { .. } => "config",
                CliError::Io { .. } => "io",
                CliError::Internal(_) => "internal",
            },
            exit_code: self.exit_code(),
            message: self.to_string(),
            field: self.field(),
            path: match self {
                CliError::Io { path, .. } => Some(path.display().to_string()),
                _ => None,
            },
        };
        serde_json::to_string(&d).expect("diagnostic serializes")
    }
}

impl From<spinorq::Error> for CliError {
    fn from(e: spinorq::Error) -> Self {
        match e {
            spinorq::Error::Contract(_) => CliError::Internal(e.to_string()),
            other => CliError::config(other.to_string(), ""),
        }
    }
}
