//! Optional TOML configuration with one table per subcommand. Keys mirror
//! the long flag names; a flag given on the command line wins.

use std::path::{Path, PathBuf};

use anyhow::Context;
use serde::Deserialize;

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub exponents: Section,
    pub matrix: Section,
    pub transversality: Section,
    pub count: Section,
    pub audit: Section,
}

#[derive(Debug, Default, Clone, Deserialize)]
#[serde(default, rename_all = "kebab-case", deny_unknown_fields)]
pub struct Section {
    #[serde(rename = "box")]
    pub box_literal: Option<String>,
    pub set: Option<String>,
    pub p: Option<String>,
    pub format: Option<String>,
    pub l: Option<u32>,
    pub subspace: Option<PathBuf>,
    pub s: Option<u32>,
    #[serde(alias = "X")]
    pub x: Option<String>,
    pub workers: Option<usize>,
    pub mem_cap_bytes: Option<u64>,
    pub dump_table: Option<PathBuf>,
    pub max_d: Option<usize>,
    pub max_cap: Option<u32>,
    pub max_degree: Option<u32>,
    pub p_grid: Option<String>,
    pub seed: Option<u64>,
    pub random: Option<usize>,
    pub suites: Option<String>,
}

impl Config {
    pub fn load(path: Option<&Path>) -> anyhow::Result<Config> {
        let Some(path) = path else {
            return Ok(Config::default());
        };
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read config {}", path.display()))?;
        toml::from_str(&text).map_err(|e| {
            let msg = e.message().to_string();
            anyhow::anyhow!("invalid config {}: {msg}", path.display())
        })
    }
}
