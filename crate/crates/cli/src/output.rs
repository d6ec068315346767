//! Data files: deterministic JSON and comma-separated CSV with LF endings.

use std::fs;
use std::path::{Path, PathBuf};

use serde_json::Value;

use crate::error::CliError;

/// `x` with 17 significant digits.
pub fn fmt(x: f64) -> String {
    format!("{x:.16e}")
}

pub struct OutDir {
    root: Option<PathBuf>,
}

impl OutDir {
    pub fn new(root: Option<&Path>) -> Result<Self, CliError> {
        if let Some(r) = root {
            fs::create_dir_all(r).map_err(|e| CliError::Output(format!("{}: {e}", r.display())))?;
        }
        Ok(Self { root: root.map(Path::to_path_buf) })
    }

    pub fn json(&self, name: &str, v: &Value) -> Result<(), CliError> {
        if let Some(r) = &self.root {
            fs::write(r.join(name), sitterloc::json::to_string(v))?;
        }
        Ok(())
    }

    pub fn csv(&self, name: &str, header: &[&str], rows: &[Vec<String>]) -> Result<(), CliError> {
        let Some(r) = &self.root else { return Ok(()) };
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_path(r.join(name))?;
        w.write_record(header)?;
        for row in rows {
            w.write_record(row)?;
        }
        w.flush()?;
        Ok(())
    }
}
