use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use negdim_core::error::Error as CoreError;
use negdim_core::potential::{PotentialRegistry, PotentialSpec};
use negdim_core::roots::DEFAULT_MAX_BITS;
use serde::Serialize;
use sha2::{Digest, Sha256};
use thiserror::Error;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
pub const MAX_BITS_ENV: &str = "NEGDIM_MAX_BITS";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config: {0}")]
    Config(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{context}: {source}")]
    Core { context: String, source: CoreError },
    #[error("verification failed: {0}")]
    Verification(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Verification(_) => 1,
            CliError::Config(_) | CliError::Io { .. } => 2,
            CliError::Core { source, .. } => match source {
                CoreError::NonConvergence { .. } | CoreError::NoAdmissibleCandidate(_) | CoreError::BranchAmbiguity { .. } => 3,
                _ => 2,
            },
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

pub trait Context<T> {
    fn context(self, what: impl Into<String>) -> CliResult<T>;
}

impl<T> Context<T> for std::result::Result<T, CoreError> {
    fn context(self, what: impl Into<String>) -> CliResult<T> {
        self.map_err(|source| CliError::Core { context: what.into(), source })
    }
}

#[derive(Clone, Copy, Debug, Serialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum PrecisionPolicy {
    Auto,
    Fixed(u32),
}

impl PrecisionPolicy {
    pub fn parse(s: &str) -> CliResult<Self> {
        if s == "auto" {
            return Ok(PrecisionPolicy::Auto);
        }
        match s.parse::<u32>() {
            Ok(b) if b >= 53 => Ok(PrecisionPolicy::Fixed(b)),
            _ => Err(CliError::Config(format!("--bits expects `auto` or an integer ≥ 53, got `{s}`"))),
        }
    }
}

/// Everything that determines the output of one invocation. Output paths,
/// verbosity and the timestamp flag are not part of it, so the same
/// computation written to two places hashes the same.
#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub command: String,
    pub potential: Option<String>,
    /// Canonical text of the potential actually used (file contents may change).
    pub potential_json: Option<String>,
    pub orders: Option<(usize, usize)>,
    pub precision: Option<PrecisionPolicy>,
    pub max_bits: u32,
    /// Command-specific settings, canonical `key=value` strings.
    pub params: Vec<(String, String)>,
    #[serde(skip)]
    pub verbosity: u8,
    #[serde(skip)]
    pub timestamp: bool,
}

impl RunConfig {
    pub fn new(command: &str) -> CliResult<Self> {
        Ok(RunConfig {
            command: command.to_string(),
            potential: None,
            potential_json: None,
            orders: None,
            precision: None,
            max_bits: max_bits_from_env()?,
            params: Vec::new(),
            verbosity: 0,
            timestamp: true,
        })
    }

    pub fn param(&mut self, key: &str, value: impl ToString) {
        self.params.push((key.to_string(), value.to_string()));
    }

    pub fn load_potential(&mut self, source: &str) -> CliResult<PotentialSpec> {
        let p = PotentialRegistry::default()
            .resolve(source)
            .map_err(|e| CliError::Config(format!("potential `{source}`: {e}")))?;
        self.potential = Some(source.to_string());
        self.potential_json = Some(p.to_json());
        Ok(p)
    }

    pub fn hash(&self) -> String {
        let canon = serde_json::to_string(self).expect("config serializes");
        hex::encode(Sha256::digest(canon.as_bytes()))
    }

    /// Header lines (without comment prefix).
    pub fn header(&self, precision: &str) -> Vec<String> {
        let mut h = vec![
            format!("negdim {VERSION}"),
            format!("command: {}", self.command),
            format!("config-sha256: {}", self.hash()),
            format!("precision: {precision}"),
        ];
        if let Some(p) = &self.potential {
            h.push(format!("potential: {p}"));
        }
        if self.timestamp {
            let secs = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
            h.push(format!("timestamp: {secs}"));
        }
        h
    }

    pub fn info(&self, msg: impl AsRef<str>) {
        if self.verbosity > 0 {
            eprintln!("{}", msg.as_ref());
        }
    }
}

/// Cap on the precision ladder, from `NEGDIM_MAX_BITS` if set.
pub fn max_bits_from_env() -> CliResult<u32> {
    match std::env::var(MAX_BITS_ENV) {
        Err(_) => Ok(DEFAULT_MAX_BITS),
        Ok(s) => match s.trim().parse::<u32>() {
            Ok(b) if b >= 64 => Ok(b),
            _ => Err(CliError::Config(format!("{MAX_BITS_ENV} must be an integer ≥ 64, got `{s}`"))),
        },
    }
}

/// `a..b`, `a..=b` or a single `b` (meaning `from..=b`).
pub fn parse_orders(s: &str, from: usize) -> CliResult<(usize, usize)> {
    let bad = || CliError::Config(format!("--orders expects `K` or `A..B`, got `{s}`"));
    let (lo, hi) = if let Some((a, b)) = s.split_once("..") {
        let b = b.strip_prefix('=').unwrap_or(b);
        (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?)
    } else {
        (from, s.trim().parse().map_err(|_| bad())?)
    };
    if lo > hi {
        return Err(CliError::Config(format!("empty order range {lo}..{hi}")));
    }
    Ok((lo, hi))
}

/// Text with a `# `-prefixed header block, to a file or stdout.
pub fn emit(path: Option<&Path>, header: &[String], body: &str) -> CliResult<()> {
    let mut text = String::new();
    for line in header {
        let _ = writeln!(text, "# {line}");
    }
    text.push_str(body);
    write_out(path, &text)
}

pub fn write_out(path: Option<&Path>, text: &str) -> CliResult<()> {
    match path {
        Some(p) => fs::write(p, text).map_err(|source| CliError::Io { path: p.to_path_buf(), source }),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|source| CliError::Io { path: "<stdout>".into(), source })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders_forms() {
        assert_eq!(parse_orders("60", 5).unwrap(), (5, 60));
        assert_eq!(parse_orders("10..60", 5).unwrap(), (10, 60));
        assert_eq!(parse_orders("10..=60", 5).unwrap(), (10, 60));
        assert!(parse_orders("9..3", 0).is_err());
        assert!(parse_orders("x", 0).is_err());
    }

    #[test]
    fn hash_ignores_presentation() {
        let a = RunConfig::new("roots").unwrap();
        let mut b = a.clone();
        b.verbosity = 2;
        b.timestamp = false;
        assert_eq!(a.hash(), b.hash());
        b.param("window", 1.0);
        assert_ne!(a.hash(), b.hash());
    }

    #[test]
    fn precision_parse() {
        assert_eq!(PrecisionPolicy::parse("auto").unwrap(), PrecisionPolicy::Auto);
        assert_eq!(PrecisionPolicy::parse("512").unwrap(), PrecisionPolicy::Fixed(512));
        assert!(PrecisionPolicy::parse("12").is_err());
    }
}
