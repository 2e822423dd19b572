//! Flag and file configuration.
//!
//! Every subcommand has a flag struct whose fields are all optional and a
//! resolved config with defaults. Both serialize to the same kebab-case keys,
//! so merging is a key-wise overlay: file table first, then set flags.

use std::path::Path;

use anyhow::{bail, Context};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{Map, Value};

/// A configuration that cannot be read or does not fit the subcommand;
/// reported with the usage exit code.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(e: impl std::fmt::Display) -> anyhow::Error {
    UsageError(format!("{e:#}")).into()
}

/// Parsed `--config` file, one table per subcommand name.
#[derive(Debug, Default)]
pub struct ConfigFile {
    tables: Map<String, Value>,
}

impl ConfigFile {
    pub fn load(path: Option<&Path>) -> anyhow::Result<Self> {
        Self::read(path).map_err(usage)
    }

    fn read(path: Option<&Path>) -> anyhow::Result<Self> {
        let Some(path) = path else {
            return Ok(ConfigFile::default());
        };
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let parsed: toml::Table = toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
        match serde_json::to_value(parsed)? {
            Value::Object(tables) => Ok(ConfigFile { tables }),
            _ => bail!("{} is not a table of subcommand tables", path.display()),
        }
    }

    fn table(&self, name: &str) -> anyhow::Result<Map<String, Value>> {
        match self.tables.get(name) {
            None => Ok(Map::new()),
            Some(Value::Object(t)) => Ok(t.clone()),
            Some(_) => bail!("config entry [{name}] must be a table"),
        }
    }
}

/// Overlay the set flags on the subcommand's file table and fill defaults.
pub fn resolve<A: Serialize, C: DeserializeOwned>(flags: A, file: &ConfigFile, name: &str) -> anyhow::Result<C> {
    let mut merged = file.table(name).map_err(usage)?;
    if let Value::Object(set) = serde_json::to_value(flags)? {
        for (k, v) in set {
            if !v.is_null() {
                merged.insert(k, v);
            }
        }
    }
    serde_json::from_value(Value::Object(merged)).map_err(|e| usage(format!("invalid [{name}] configuration: {e}")))
}

/// `start:step:end` as the points `start, start+step, …` up to `end`.
pub fn parse_grid(text: &str) -> anyhow::Result<Vec<f64>> {
    let parts: Vec<f64> = text
        .split(':')
        .map(|p| p.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .with_context(|| format!("time grid {text:?} is not start:step:end"))?;
    let [start, step, end] = parts[..] else {
        bail!("time grid {text:?} is not start:step:end");
    };
    if !(step > 0.0) || end < start || start < 0.0 {
        bail!("time grid {text:?} needs 0 ≤ start ≤ end and a positive step");
    }
    let n = ((end - start) / step + 1e-9).floor() as usize;
    Ok((0..=n).map(|i| start + step * i as f64).collect())
}

/// Comma-separated list, e.g. `1,0,2`.
pub fn parse_list<T: std::str::FromStr>(text: &str) -> anyhow::Result<Vec<T>> {
    text.split(',')
        .map(|p| p.trim().parse::<T>().map_err(|_| anyhow::anyhow!("cannot parse {p:?} in {text:?}")))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde::Deserialize;

    #[derive(Serialize)]
    #[serde(rename_all = "kebab-case")]
    struct Flags {
        n: Option<usize>,
        t_final: Option<f64>,
    }

    #[derive(Deserialize, Debug, PartialEq)]
    #[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
    struct Resolved {
        n: usize,
        t_final: f64,
    }

    impl Default for Resolved {
        fn default() -> Self {
            Resolved { n: 64, t_final: 1.0 }
        }
    }

    fn file(text: &str) -> ConfigFile {
        let parsed: toml::Table = toml::from_str(text).unwrap();
        match serde_json::to_value(parsed).unwrap() {
            Value::Object(tables) => ConfigFile { tables },
            _ => unreachable!(),
        }
    }

    #[test]
    fn flags_override_the_file_and_defaults_fill_gaps() {
        let f = file("[run]\nn = 32\nt-final = 3.0\n");
        let r: Resolved = resolve(Flags { n: Some(16), t_final: None }, &f, "run").unwrap();
        assert_eq!(r, Resolved { n: 16, t_final: 3.0 });
        let r: Resolved = resolve(Flags { n: None, t_final: None }, &ConfigFile::default(), "run").unwrap();
        assert_eq!(r, Resolved::default());
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let f = file("[run]\nresolution = 32\n");
        let err = resolve::<_, Resolved>(Flags { n: None, t_final: None }, &f, "run").unwrap_err();
        assert!(err.downcast_ref::<UsageError>().is_some());
    }

    #[test]
    fn grids_and_lists() {
        assert_eq!(parse_grid("1:1:4").unwrap(), vec![1.0, 2.0, 3.0, 4.0]);
        assert_eq!(parse_grid("0:0.5:1").unwrap(), vec![0.0, 0.5, 1.0]);
        assert_eq!(parse_grid("0:0.3:1").unwrap().len(), 4);
        assert!(parse_grid("1:0:2").is_err());
        assert!(parse_grid("2:1:1").is_err());
        assert!(parse_grid("0:1").is_err());
        assert_eq!(parse_list::<u32>("1, 0,2").unwrap(), vec![1, 0, 2]);
        assert!(parse_list::<u32>("1,x").is_err());
    }
}
