//! Parameter sweeps: one independent run per value, executed
//! concurrently, each in its own output directory.

use std::path::{Path, PathBuf};

use crate::config::{load_config, parse_config, RunConfig, SCHEMA};
use crate::error::{CliError, Result};
use crate::run::{output_directory, run_in, RunOutcome};

/// A parsed `--vary section.key=v1,v2,...` argument.
#[derive(Debug, Clone, PartialEq)]
pub struct Variation {
    pub section: String,
    pub key: String,
    pub values: Vec<String>,
}

impl Variation {
    /// A bare key is accepted when exactly one section defines it.
    pub fn parse(arg: &str) -> Result<Self> {
        let usage = || CliError::Usage(format!("expected key=v1,v2,... got `{arg}`"));
        let (lhs, rhs) = arg.split_once('=').ok_or_else(usage)?;
        let lhs = lhs.trim();
        let values: Vec<String> = rhs.split(',').map(|v| v.trim().to_string()).collect();
        if lhs.is_empty() || values.iter().any(String::is_empty) {
            return Err(usage());
        }
        let (section, key) = match lhs.split_once('.') {
            Some((s, k)) => (s.to_string(), k.to_string()),
            None => {
                let owners: Vec<&str> = SCHEMA
                    .iter()
                    .filter(|(_, keys)| keys.contains(&lhs))
                    .map(|(s, _)| *s)
                    .collect();
                match owners[..] {
                    [one] => (one.to_string(), lhs.to_string()),
                    [] => {
                        return Err(CliError::UnknownKey {
                            key: lhs.to_string(),
                            suggestion: None,
                        })
                    }
                    _ => {
                        return Err(CliError::Usage(format!(
                            "`{lhs}` is ambiguous; qualify it as one of {}",
                            owners
                                .iter()
                                .map(|s| format!("{s}.{lhs}"))
                                .collect::<Vec<_>>()
                                .join(", ")
                        )))
                    }
                }
            }
        };
        Ok(Self {
            section,
            key,
            values,
        })
    }

    /// Directory name of one member, e.g. `detuning=-5`.
    pub fn label(&self, value: &str) -> String {
        let safe: String = value
            .chars()
            .map(|c| if c == '/' || c == '\\' { '_' } else { c })
            .collect();
        format!("{}={safe}", self.key)
    }
}

fn toml_value(raw: &str) -> toml::Value {
    toml::from_str::<toml::Table>(&format!("v = {raw}"))
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| toml::Value::String(raw.to_string()))
}

/// Configs of every sweep member, validated, with output directories
/// already assigned.
pub fn expand(path: &Path, variation: &Variation) -> Result<Vec<(String, RunConfig, PathBuf)>> {
    let base = load_config(path)?;
    let root = output_directory(&base);
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let table: toml::Table = toml::from_str(&text).map_err(|e| CliError::Parse {
        path: path.display().to_string(),
        line: 1,
        message: e.message().to_string(),
    })?;
    let mut members = Vec::new();
    for value in &variation.values {
        let mut t = table.clone();
        let section = t
            .entry(variation.section.clone())
            .or_insert_with(|| toml::Value::Table(toml::Table::new()));
        let toml::Value::Table(section) = section else {
            return Err(CliError::invalid(
                variation.section.clone(),
                "expected a [section]",
            ));
        };
        section.insert(variation.key.clone(), toml_value(value));
        let mut config = parse_config(&toml::to_string(&t).expect("table serialises"), path)?;
        let label = variation.label(value);
        let dir = root.join(&label);
        config.output.directory = dir.clone();
        members.push((label, config, dir));
    }
    Ok(members)
}

/// Runs every member concurrently. Results keep the order of the values.
pub fn sweep(path: &Path, variation: &Variation) -> Result<Vec<(String, Result<RunOutcome>)>> {
    let members = expand(path, variation)?;
    let results = std::thread::scope(|scope| {
        let handles: Vec<_> = members
            .iter()
            .map(|(label, config, dir)| (label.clone(), scope.spawn(move || run_in(config, dir))))
            .collect();
        handles
            .into_iter()
            .map(|(label, h)| (label, h.join().expect("sweep member panicked")))
            .collect()
    });
    Ok(results)
}
