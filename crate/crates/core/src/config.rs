//! Optional TOML defaults file for the command-line tool.

use std::path::Path;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::expr::DEFAULT_BUDGET;
use crate::reduction::DEFAULT_STREAM_LIMIT;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Config {
    /// Brute-force work cap, in assignments.
    pub budget: u128,
    /// Longest `δ` evaluated token by token; longer ones use the tree.
    pub stream_limit: u128,
    /// Samples for definers whose auxiliaries are too many to enumerate.
    pub samples: usize,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            budget: DEFAULT_BUDGET,
            stream_limit: DEFAULT_STREAM_LIMIT,
            samples: 10_000,
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Raw {
    budget: Option<u64>,
    stream_limit: Option<u64>,
    samples: Option<usize>,
}

impl Config {
    /// Parses flat `key = value` pairs; unknown keys are errors.
    pub fn parse(text: &str) -> Result<Config> {
        let raw: Raw = toml::from_str(text).map_err(|e| Error::Input(format!("config: {e}")))?;
        let d = Config::default();
        Ok(Config {
            budget: raw.budget.map_or(d.budget, u128::from),
            stream_limit: raw.stream_limit.map_or(d.stream_limit, u128::from),
            samples: raw.samples.unwrap_or(d.samples),
        })
    }

    pub fn load(path: &Path) -> Result<Config> {
        Config::parse(&std::fs::read_to_string(path)?)
    }
}
