//! CSV emission and the `run.json` manifest.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::CliError;

/// 17 significant digits, enough to reproduce every `f64` exactly.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_f64).unwrap_or_default()
}

/// Collects the artifacts written into one output directory.
#[derive(Debug)]
pub struct OutputDir {
    root: PathBuf,
    artifacts: Vec<String>,
}

#[derive(Debug, Serialize)]
struct Artifact {
    file: String,
    bytes: u64,
    sha256: String,
}

impl OutputDir {
    pub fn create(root: &Path) -> Result<Self, CliError> {
        fs::create_dir_all(root).map_err(|e| CliError::io(root, e))?;
        Ok(Self {
            root: root.to_path_buf(),
            artifacts: Vec::new(),
        })
    }

    pub fn path(&self) -> &Path {
        &self.root
    }

    pub fn write_csv<R, I>(&mut self, name: &str, header: &[&str], rows: I) -> Result<(), CliError>
    where
        R: IntoIterator,
        R::Item: AsRef<[u8]>,
        I: IntoIterator<Item = R>,
    {
        let path = self.root.join(name);
        let mut w = csv::Writer::from_path(&path)?;
        w.write_record(header)?;
        for row in rows {
            w.write_record(row)?;
        }
        w.flush().map_err(|e| CliError::io(&path, e))?;
        self.artifacts.push(name.to_string());
        Ok(())
    }

    pub fn write_text(&mut self, name: &str, text: &str) -> Result<(), CliError> {
        let path = self.root.join(name);
        fs::write(&path, text).map_err(|e| CliError::io(&path, e))?;
        self.artifacts.push(name.to_string());
        Ok(())
    }

    /// Writes `run.json` with the command, the configuration echo and a
    /// checksum for every artifact written so far.
    pub fn write_manifest(
        &self,
        command: &str,
        config: &serde_json::Value,
        resolved: serde_json::Value,
    ) -> Result<(), CliError> {
        let mut names = self.artifacts.clone();
        names.sort();
        names.dedup();
        let mut artifacts = Vec::with_capacity(names.len());
        for name in names {
            let path = self.root.join(&name);
            let data = fs::read(&path).map_err(|e| CliError::io(&path, e))?;
            artifacts.push(Artifact {
                file: name,
                bytes: data.len() as u64,
                sha256: hex::encode(Sha256::digest(&data)),
            });
        }
        let manifest = serde_json::json!({
            "tool": env!("CARGO_PKG_NAME"),
            "version": env!("CARGO_PKG_VERSION"),
            "command": command,
            "config": config,
            "resolved": resolved,
            "artifacts": artifacts,
        });
        let path = self.root.join("run.json");
        let text = serde_json::to_string_pretty(&manifest)
            .map_err(|e| CliError::Runtime(e.to_string()))?;
        fs::write(&path, text + "\n").map_err(|e| CliError::io(&path, e))
    }
}

/// Reads a CSV written by [`OutputDir::write_csv`] back as strings.
pub fn read_csv(path: &Path) -> Result<(Vec<String>, Vec<Vec<String>>), CliError> {
    let mut r = csv::Reader::from_path(path)?;
    let header = r.headers()?.iter().map(str::to_string).collect();
    let mut rows = Vec::new();
    for rec in r.records() {
        rows.push(rec?.iter().map(str::to_string).collect());
    }
    Ok((header, rows))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_text_round_trips() {
        for x in [
            0.1,
            1.0 / 3.0,
            36.080_05,
            1e-300,
            9.6e3,
            f64::MAX,
            2.0f64.sqrt(),
        ] {
            assert_eq!(fmt_f64(x).parse::<f64>().unwrap(), x);
        }
        assert_eq!(fmt_f64(0.75), "7.5000000000000000e-1");
        assert_eq!(fmt_opt(None), "");
    }

    #[test]
    fn csv_and_manifest() {
        let dir = tempfile::tempdir().unwrap();
        let mut out = OutputDir::create(&dir.path().join("nested")).unwrap();
        let rows = vec![
            vec![fmt_f64(1.5), fmt_f64(1.0 / 7.0)],
            vec![fmt_f64(2.0), fmt_f64(-0.25)],
        ];
        out.write_csv("a.csv", &["x", "y"], rows.clone()).unwrap();
        let (header, back) = read_csv(&out.path().join("a.csv")).unwrap();
        assert_eq!(header, vec!["x", "y"]);
        assert_eq!(back, rows);
        out.write_manifest("test", &serde_json::json!({}), serde_json::json!({}))
            .unwrap();
        let manifest: serde_json::Value =
            serde_json::from_str(&fs::read_to_string(out.path().join("run.json")).unwrap())
                .unwrap();
        let sha = manifest["artifacts"][0]["sha256"].as_str().unwrap();
        let data = fs::read(out.path().join("a.csv")).unwrap();
        assert_eq!(sha, hex::encode(Sha256::digest(&data)));
    }
}
