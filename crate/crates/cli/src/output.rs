//! CSV emission and the JSON run manifest.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use anyhow::Context;
use serde::Serialize;
use serde_json::Value;

/// File name of the manifest inside the output directory.
pub const MANIFEST: &str = "manifest.json";

/// Write `rows` with a header derived from the row type.
pub fn write_csv<T: Serialize>(path: &Path, rows: &[T]) -> anyhow::Result<()> {
    let mut w = csv::Writer::from_path(path).with_context(|| format!("creating {}", path.display()))?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

/// Run record: resolved configuration, versions, empirical constants and
/// the files produced.
#[derive(Debug, Serialize)]
pub struct Manifest {
    pub command: String,
    pub config: Value,
    pub versions: BTreeMap<&'static str, &'static str>,
    /// Norm and discretization choices that shift constants.
    pub conventions: BTreeMap<&'static str, &'static str>,
    pub constants: BTreeMap<String, Value>,
    pub outputs: Vec<String>,
    /// Set when some requested output could not be produced.
    pub partial: bool,
    pub notes: Vec<String>,
}

impl Manifest {
    pub fn new<C: Serialize>(command: &str, config: &C) -> anyhow::Result<Self> {
        let versions = BTreeMap::from([("analyticity", analyticity::VERSION), ("analyticity-cli", env!("CARGO_PKG_VERSION"))]);
        Ok(Manifest {
            command: command.to_string(),
            config: serde_json::to_value(config)?,
            versions,
            conventions: BTreeMap::from([("vector_norm", "seminorms applied per component and summed")]),
            constants: BTreeMap::new(),
            outputs: Vec::new(),
            partial: false,
            notes: Vec::new(),
        })
    }

    pub fn constant(&mut self, key: impl Into<String>, value: impl Serialize) -> anyhow::Result<()> {
        self.constants.insert(key.into(), serde_json::to_value(value)?);
        Ok(())
    }

    pub fn convention(&mut self, key: &'static str, value: &'static str) {
        self.conventions.insert(key, value);
    }

    /// Record a file written under `dir` and return its full path.
    pub fn output(&mut self, dir: &Path, name: &str) -> PathBuf {
        self.outputs.push(name.to_string());
        dir.join(name)
    }

    pub fn write(&self, dir: &Path) -> anyhow::Result<()> {
        let path = dir.join(MANIFEST);
        std::fs::write(&path, serde_json::to_string_pretty(self)? + "\n").with_context(|| format!("writing {}", path.display()))
    }
}
