//! Run configuration: defaults, a flat `key = value` file, then command-line overrides.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::error::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
    Table,
}

impl FromStr for OutputFormat {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s.trim().to_ascii_lowercase().as_str() {
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            "table" => Ok(OutputFormat::Table),
            other => Err(CliError::Usage(format!("unknown output format {other}"))),
        }
    }
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OutputFormat::Json => "json",
            OutputFormat::Csv => "csv",
            OutputFormat::Table => "table",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub default_bound: i64,
    pub precision_digits: usize,
    pub output_format: OutputFormat,
    pub oracle_cache_path: Option<PathBuf>,
    pub parallelism: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            default_bound: 200,
            precision_digits: 50,
            output_format: OutputFormat::Json,
            oracle_cache_path: None,
            parallelism: 1,
        }
    }
}

/// Values given on the command line; `None` leaves the configured value alone.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub precision: Option<usize>,
    pub format: Option<OutputFormat>,
    pub cache: Option<PathBuf>,
    pub parallelism: Option<usize>,
}

impl RunConfig {
    /// Parses `key = value` lines; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut cfg = RunConfig::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bad = |msg: &str| CliError::Usage(format!("config line {}: {msg}: {raw}", i + 1));
            let (key, value) = line.split_once('=').ok_or_else(|| bad("expected key = value"))?;
            let value = value.trim();
            match key.trim() {
                "default_bound" => cfg.default_bound = value.parse().map_err(|_| bad("not an integer"))?,
                "precision_digits" => cfg.precision_digits = value.parse().map_err(|_| bad("not an integer"))?,
                "output_format" => cfg.output_format = value.parse()?,
                "oracle_cache_path" => {
                    cfg.oracle_cache_path = if value.is_empty() { None } else { Some(PathBuf::from(value)) }
                }
                "parallelism" => cfg.parallelism = value.parse().map_err(|_| bad("not an integer"))?,
                _ => return Err(bad("unknown key")),
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn apply(mut self, o: &Overrides) -> Result<Self, CliError> {
        if let Some(p) = o.precision {
            self.precision_digits = p;
        }
        if let Some(f) = o.format {
            self.output_format = f;
        }
        if let Some(c) = &o.cache {
            self.oracle_cache_path = Some(c.clone());
        }
        if let Some(p) = o.parallelism {
            self.parallelism = p;
        }
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.default_bound < 1 {
            return Err(CliError::Usage(format!("default_bound must be at least 1, got {}", self.default_bound)));
        }
        if self.precision_digits < 15 {
            return Err(CliError::Usage(format!("precision must be at least 15 digits, got {}", self.precision_digits)));
        }
        if self.parallelism < 1 {
            return Err(CliError::Usage("parallelism must be at least 1".into()));
        }
        Ok(())
    }
}
