//! Output files and the run manifest. All writes go through one `Output`
//! owned by the main thread.

use std::path::PathBuf;

use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::config::RunConfig;
use crate::error::{CliError, Result};

#[derive(Serialize)]
struct FileEntry {
    name: String,
    bytes: usize,
    sha256: String,
}

pub struct Output {
    dir: PathBuf,
    files: Vec<FileEntry>,
}

impl Output {
    pub fn create(dir: PathBuf) -> Result<Self> {
        std::fs::create_dir_all(&dir)?;
        Ok(Output { dir, files: vec![] })
    }

    pub fn write(&mut self, name: &str, data: &[u8]) -> Result<()> {
        std::fs::write(self.dir.join(name), data)?;
        let digest = Sha256::digest(data);
        let sha256 = digest.iter().map(|b| format!("{b:02x}")).collect();
        self.files.push(FileEntry { name: name.into(), bytes: data.len(), sha256 });
        Ok(())
    }

    pub fn json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<()> {
        let mut text = serde_json::to_string_pretty(value).map_err(|e| CliError::Config(e.to_string()))?;
        text.push('\n');
        self.write(name, text.as_bytes())
    }

    pub fn csv(&mut self, name: &str, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
        let mut w = csv::Writer::from_writer(vec![]);
        let err = |e: csv::Error| CliError::Config(e.to_string());
        w.write_record(header).map_err(err)?;
        for r in rows {
            w.write_record(r).map_err(err)?;
        }
        let data = w.into_inner().map_err(|e| CliError::Config(e.to_string()))?;
        self.write(name, &data)
    }

    /// Writes `manifest.json` listing the inputs and every file written.
    pub fn finish(mut self, command: &str, arguments: Value, config: &RunConfig) -> Result<()> {
        let manifest = json!({
            "tool": "exwkb",
            "version": env!("CARGO_PKG_VERSION"),
            "core_version": exwkb::VERSION,
            "profile": if cfg!(debug_assertions) { "debug" } else { "release" },
            "command": command,
            "arguments": arguments,
            "config": config,
            "files": self.files,
        });
        let mut text = serde_json::to_string_pretty(&manifest).map_err(|e| CliError::Config(e.to_string()))?;
        text.push('\n');
        std::fs::write(self.dir.join("manifest.json"), text)?;
        self.files.clear();
        Ok(())
    }
}

pub fn num(v: f64) -> String {
    format!("{v:e}")
}
