use serde_json::{json, Value};

use graphcat::emb::EmbError;
use graphcat::maps::MapError;
use graphcat::operad::OperadError;
use graphcat::oracle::OracleError;
use graphcat::presheaf::PresheafError;
use graphcat::text::TextError;

pub const REPORT_VERSION: u32 = 1;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Invalid(String),
    #[error("{file}: {source}")]
    Parse { file: String, source: TextError },
    #[error(transparent)]
    Map(#[from] MapError),
    #[error(transparent)]
    Emb(#[from] EmbError),
    #[error(transparent)]
    Operad(#[from] OperadError),
    #[error(transparent)]
    Presheaf(#[from] PresheafError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Io(_) => 2,
            _ => 1,
        }
    }
}

/// Output of one command: text lines and structured data.
#[derive(Debug)]
pub struct Report {
    pub command: String,
    pub ok: bool,
    pub lines: Vec<String>,
    pub data: Value,
}

impl Report {
    pub fn new(command: &str) -> Report {
        Report {
            command: command.to_string(),
            ok: true,
            lines: Vec::new(),
            data: json!({}),
        }
    }

    pub fn line(&mut self, s: impl Into<String>) {
        self.lines.push(s.into());
    }

    pub fn set(&mut self, key: &str, v: impl serde::Serialize) {
        self.data[key] = serde_json::to_value(v).expect("report data serializes");
    }

    pub fn fail(&mut self, s: impl Into<String>) {
        self.ok = false;
        self.lines.push(s.into());
    }

    pub fn to_text(&self) -> String {
        let mut s = self.lines.join("\n");
        if !s.is_empty() {
            s.push('\n');
        }
        s
    }

    pub fn to_json(&self) -> String {
        let v = json!({
            "version": REPORT_VERSION,
            "command": self.command,
            "ok": self.ok,
            "data": self.data,
            "lines": self.lines,
        });
        let mut s = serde_json::to_string_pretty(&v).expect("report serializes");
        s.push('\n');
        s
    }
}
