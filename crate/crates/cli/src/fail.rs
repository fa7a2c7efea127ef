use std::fmt;

use mipvu_core::config::ConfigError;
use mipvu_core::store::StoreError;
use mipvu_core::Error;

pub const EXIT_OTHER: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_MISSING: i32 = 3;
pub const EXIT_INVALID: i32 = 4;

/// A command failure, reported as `error: <kind>: <message>` on one line.
#[derive(Debug)]
pub struct Failure {
    pub kind: &'static str,
    pub code: i32,
    pub message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Failure {
            kind: "usage",
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    pub fn missing(message: impl Into<String>) -> Self {
        Failure {
            kind: "missing-file",
            code: EXIT_MISSING,
            message: message.into(),
        }
    }

    pub fn invalid(kind: &'static str, message: impl Into<String>) -> Self {
        Failure {
            kind,
            code: EXIT_INVALID,
            message: message.into(),
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let one_line = self.message.replace(['\n', '\r'], " ");
        write!(f, "error: {}: {}", self.kind, one_line)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let message = e.to_string();
        if e.is_not_found() {
            return Failure::missing(message);
        }
        let kind = match &e {
            Error::Io { .. } | Error::Store(StoreError::Io { .. }) => {
                return Failure {
                    kind: "io",
                    code: EXIT_OTHER,
                    message,
                }
            }
            Error::Config(ConfigError::Io { source, .. }) => {
                if source.kind() == std::io::ErrorKind::NotFound {
                    return Failure::missing(message);
                }
                return Failure {
                    kind: "io",
                    code: EXIT_OTHER,
                    message,
                };
            }
            Error::Schema { .. } | Error::Corpus(_) => "schema",
            Error::Dict(_) => "dict",
            Error::Store(_) => "store",
            Error::Split(_) => "split",
            Error::Adapter(_) => "adapter",
            Error::Metrics(_) => "metrics",
            Error::Config(_) => "config",
        };
        Failure::invalid(kind, message)
    }
}

macro_rules! from_module_error {
    ($($t:ty),*) => {$(
        impl From<$t> for Failure {
            fn from(e: $t) -> Self {
                Failure::from(Error::from(e))
            }
        }
    )*};
}

from_module_error!(
    mipvu_core::dict::DictError,
    mipvu_core::store::StoreError,
    mipvu_core::corpus::CorpusError,
    mipvu_core::corpus::SplitError,
    mipvu_core::adapters::AdapterError,
    mipvu_core::metrics::MetricsError,
    mipvu_core::config::ConfigError
);

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn codes_are_distinct() {
        let missing: Failure = Error::from(StoreError::Io {
            path: "x".into(),
            source: std::io::Error::from(std::io::ErrorKind::NotFound),
        })
        .into();
        assert_eq!(missing.code, EXIT_MISSING);
        let schema: Failure = Error::Schema {
            path: "c.jsonl".into(),
            line: 3,
            message: "bad\nthing".into(),
        }
        .into();
        assert_eq!(schema.code, EXIT_INVALID);
        assert_eq!(schema.to_string(), "error: schema: c.jsonl:3: bad thing");
        assert_eq!(Failure::usage("x").code, EXIT_USAGE);
    }
}
