use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::config::RunConfig;
use crate::CliError;

/// Artifact writer rooted at the configured output directory.
pub struct Output {
    dir: PathBuf,
    header: String,
}

fn io_error(path: &Path, e: std::io::Error) -> CliError {
    CliError::Runtime(format!("{}: {e}", path.display()))
}

impl Output {
    pub fn new(config: &RunConfig, command: &str) -> Result<Self, CliError> {
        fs::create_dir_all(&config.out).map_err(|e| io_error(&config.out, e))?;
        Ok(Self {
            dir: config.out.clone(),
            header: format!(
                "# config_sha256={} seed={} command={command}",
                config.hash(),
                config.seed
            ),
        })
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.dir.join(name)
    }

    /// Opens a CSV file whose first line is the metadata comment; `fill`
    /// writes the header row and records.
    pub fn csv(
        &self,
        name: &str,
        fill: impl FnOnce(&mut BufWriter<File>) -> qae_core::Result<()>,
    ) -> Result<PathBuf, CliError> {
        let path = self.path(name);
        let file = File::create(&path).map_err(|e| io_error(&path, e))?;
        let mut w = BufWriter::new(file);
        writeln!(w, "{}", self.header).map_err(|e| io_error(&path, e))?;
        fill(&mut w)?;
        w.flush().map_err(|e| io_error(&path, e))?;
        Ok(path)
    }

    pub fn json<T: Serialize>(&self, name: &str, value: &T) -> Result<PathBuf, CliError> {
        let path = self.path(name);
        let text =
            serde_json::to_string_pretty(value).map_err(|e| CliError::Runtime(e.to_string()))?;
        fs::write(&path, text + "\n").map_err(|e| io_error(&path, e))?;
        Ok(path)
    }
}
