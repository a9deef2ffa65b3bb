use std::fmt;
use std::path::Path;

use semfeat_core::Error;

/// Process exit statuses. Each error class maps to exactly one code.
pub mod code {
    pub const PARSE: u8 = 1;
    pub const CYCLE: u8 = 2;
    pub const IO: u8 = 3;
    pub const UNKNOWN_TERM: u8 = 4;
    pub const EMPTY_TERM_SET: u8 = 5;
    pub const UNKNOWN_DATASET: u8 = 6;
    pub const USAGE: u8 = 64;
}

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: code::USAGE,
            message: message.into(),
        }
    }

    pub fn io(path: &Path, err: std::io::Error) -> Self {
        Failure {
            code: code::IO,
            message: format!("{}: {err}", path.display()),
        }
    }

    /// Prefixes the message with the file it came from.
    pub fn in_file(mut self, path: &Path) -> Self {
        self.message = format!("{}: {}", path.display(), self.message);
        self
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        let code = match &err {
            Error::CycleDetected { .. } => code::CYCLE,
            Error::Io(_) => code::IO,
            Error::UnknownTerm(_) | Error::UnknownTerms(_) => code::UNKNOWN_TERM,
            Error::EmptyTermSet(_) => code::EMPTY_TERM_SET,
            Error::UnknownDataset(_) => code::UNKNOWN_DATASET,
            Error::InvalidParameter(_) | Error::EmptyTermList => code::USAGE,
            _ => code::PARSE,
        };
        Failure {
            code,
            message: err.to_string(),
        }
    }
}
