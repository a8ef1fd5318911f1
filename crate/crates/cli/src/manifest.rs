use std::fs;
use std::path::{Path, PathBuf};

use anyhow::Context;
use serde::{Deserialize, Serialize};

pub const MANIFEST_NAME: &str = "manifest.json";

/// Record of one run, written next to its outputs. `args` is the command
/// line without `--output`; replaying it into any directory reproduces the
/// outputs byte for byte.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub subcommand: String,
    pub args: Vec<String>,
    pub seed: u64,
    pub frame: String,
    pub config: serde_json::Value,
    pub outputs: Vec<PathBuf>,
}

impl RunManifest {
    pub fn write(&self, dir: &Path) -> anyhow::Result<PathBuf> {
        let path = dir.join(MANIFEST_NAME);
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
        Ok(path)
    }

    pub fn read(path: &Path) -> anyhow::Result<Self> {
        let text =
            fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
    }
}

/// Drops `--output <dir>` and `--output=<dir>` from an argument list.
pub fn strip_output(args: &[String]) -> Vec<String> {
    let mut out = Vec::with_capacity(args.len());
    let mut skip = false;
    for a in args {
        if skip {
            skip = false;
        } else if a == "--output" {
            skip = true;
        } else if !a.starts_with("--output=") {
            out.push(a.clone());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strips_both_spellings() {
        let args: Vec<String> = ["sweep", "--output", "a", "--trials", "5", "--output=b"]
            .map(String::from)
            .to_vec();
        assert_eq!(strip_output(&args), vec!["sweep", "--trials", "5"]);
    }
}
