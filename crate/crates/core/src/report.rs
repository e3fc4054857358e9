//! CSV and JSON output plus the run manifest. A manifest captures the full
//! argv and seed of a run; re-running it reproduces the data files
//! byte-for-byte, whatever the worker count.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use crate::error::Result;

pub const MANIFEST_SCHEMA: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    pub schema: u32,
    pub subcommand: String,
    /// full command line, re-runnable as-is
    pub argv: Vec<String>,
    pub seed: u64,
    pub version: String,
    pub started_unix_ms: u128,
    pub finished_unix_ms: u128,
    pub outputs: Vec<String>,
}

impl RunManifest {
    pub fn begin(subcommand: &str, argv: &[String], seed: u64) -> Self {
        RunManifest {
            schema: MANIFEST_SCHEMA,
            subcommand: subcommand.to_string(),
            argv: argv.to_vec(),
            seed,
            version: env!("CARGO_PKG_VERSION").to_string(),
            started_unix_ms: now_ms(),
            finished_unix_ms: 0,
            outputs: Vec::new(),
        }
    }

    pub fn finish(&mut self, outputs: Vec<PathBuf>) {
        self.finished_unix_ms = now_ms();
        self.outputs = outputs
            .into_iter()
            .map(|p| p.display().to_string())
            .collect();
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let mut file = fs::File::create(path)?;
        serde_json::to_writer_pretty(&mut file, self)?;
        file.write_all(b"\n")?;
        Ok(())
    }

    pub fn read(path: &Path) -> Result<Self> {
        Ok(serde_json::from_slice(&fs::read(path)?)?)
    }
}

fn now_ms() -> u128 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_millis())
        .unwrap_or(0)
}

/// Write rows as CSV with a header. Floats must already be formatted by the
/// caller (shortest round-trip via `format!("{}", v)`), which keeps outputs
/// bit-stable across runs and thread counts.
pub fn write_csv(path: &Path, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
    let mut out = String::new();
    out.push_str(&header.join(","));
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    fs::write(path, out)?;
    Ok(())
}

pub fn write_json(path: &Path, value: &serde_json::Value) -> Result<()> {
    let mut file = fs::File::create(path)?;
    serde_json::to_writer_pretty(&mut file, value)?;
    file.write_all(b"\n")?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn manifest_round_trips() {
        let dir = std::env::temp_dir().join("lampwalk-manifest-test");
        fs::create_dir_all(&dir).unwrap();
        let path = dir.join("m.json");
        let mut m = RunManifest::begin("walk-speed", &["walk-speed".into(), "--seed".into(), "7".into()], 7);
        m.finish(vec![dir.join("out.csv")]);
        m.write(&path).unwrap();
        let back = RunManifest::read(&path).unwrap();
        assert_eq!(back.subcommand, "walk-speed");
        assert_eq!(back.seed, 7);
        assert_eq!(back.argv.len(), 3);
        assert_eq!(back.schema, MANIFEST_SCHEMA);
        fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn csv_is_deterministic_text() {
        let dir = std::env::temp_dir().join("lampwalk-csv-test");
        fs::create_dir_all(&dir).unwrap();
        let path = dir.join("t.csv");
        let rows = vec![vec!["1".to_string(), format!("{}", 0.1 + 0.2)]];
        write_csv(&path, &["a", "b"], &rows).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        assert_eq!(text, "a,b\n1,0.30000000000000004\n");
        fs::remove_dir_all(&dir).ok();
    }
}
