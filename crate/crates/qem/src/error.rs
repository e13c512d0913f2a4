//! Command failures and their exit codes.

use std::io;
use std::path::PathBuf;

use qem_core::ErrorKind;
use serde::Serialize;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Core(#[from] qem_core::Error),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Input(_) => "input",
            CliError::Core(e) => match e.kind() {
                ErrorKind::Input => "input",
                ErrorKind::Hypothesis => "hypothesis",
                ErrorKind::Numerical => "numerical",
            },
            CliError::Io { .. } => "io",
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self.kind() {
            "input" => 2,
            "hypothesis" => 3,
            "numerical" => 4,
            _ => 5,
        }
    }

    /// The machine-readable form written to stderr.
    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Body<'a> {
            kind: &'a str,
            exit_code: u8,
            message: String,
        }
        #[derive(Serialize)]
        struct Doc<'a> {
            error: Body<'a>,
        }
        let doc = Doc {
            error: Body {
                kind: self.kind(),
                exit_code: self.exit_code(),
                message: self.to_string(),
            },
        };
        serde_json::to_string(&doc)
            .unwrap_or_else(|_| String::from("{\"error\":{\"kind\":\"io\"}}"))
    }
}

pub type CliResult<T> = Result<T, CliError>;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn codes_are_distinct_per_kind() {
        let hyp = CliError::from(qem_core::Error::Hypothesis(String::from("x")));
        let num = CliError::from(qem_core::Error::AlphaNotPositive { s: 1.0 });
        let inp = CliError::Input(String::from("bad"));
        let io = CliError::io("f", io::Error::other("gone"));
        assert_eq!(
            [
                inp.exit_code(),
                hyp.exit_code(),
                num.exit_code(),
                io.exit_code()
            ],
            [2, 3, 4, 5]
        );
        let v: serde_json::Value = serde_json::from_str(&hyp.to_json()).unwrap();
        assert_eq!(v["error"]["kind"], "hypothesis");
        assert_eq!(v["error"]["exit_code"], 3);
    }
}
