//! Output-directory plumbing: artifact writers and the run manifest.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};

/// Collects artifacts for one invocation and writes the manifest at the end.
pub struct OutputDir {
    dir: PathBuf,
    written: Vec<String>,
}

impl OutputDir {
    pub fn create(dir: &Path) -> Result<Self> {
        fs::create_dir_all(dir)
            .with_context(|| format!("cannot create output directory {}", dir.display()))?;
        Ok(Self {
            dir: dir.to_path_buf(),
            written: Vec::new(),
        })
    }

    pub fn write(&mut self, name: &str, contents: &str) -> Result<()> {
        let path = self.dir.join(name);
        fs::write(&path, contents).with_context(|| format!("cannot write {}", path.display()))?;
        self.written.push(name.to_owned());
        Ok(())
    }

    pub fn write_json<T: serde::Serialize>(&mut self, name: &str, value: &T) -> Result<()> {
        let mut text = serde_json::to_string_pretty(value)?;
        text.push('\n');
        self.write(name, &text)
    }

    /// Write `run-manifest.json`: everything needed to re-run the invocation.
    pub fn finish(
        self,
        subcommand: &str,
        inputs: &[&Path],
        parameters: serde_json::Value,
        threads: Option<usize>,
    ) -> Result<()> {
        let manifest = serde_json::json!({
            "tool": "contagion",
            "version": env!("CARGO_PKG_VERSION"),
            "subcommand": subcommand,
            "argv": std::env::args().collect::<Vec<String>>(),
            "threads": threads,
            "inputs": inputs.iter().map(|p| p.display().to_string()).collect::<Vec<_>>(),
            "parameters": parameters,
            "outputs": self.written,
        });
        let mut text = serde_json::to_string_pretty(&manifest)?;
        text.push('\n');
        let path = self.dir.join("run-manifest.json");
        fs::write(&path, text).with_context(|| format!("cannot write {}", path.display()))?;
        Ok(())
    }
}

/// Two-or-more-column CSV assembly with deterministic float formatting.
pub struct Csv {
    text: String,
}

impl Csv {
    pub fn new(header: &str) -> Self {
        Self {
            text: format!("{header}\n"),
        }
    }

    pub fn row(&mut self, fields: &[CsvField<'_>]) {
        for (k, f) in fields.iter().enumerate() {
            if k > 0 {
                self.text.push(',');
            }
            match f {
                CsvField::Str(s) => self.text.push_str(s),
                CsvField::Uint(v) => self.text.push_str(&v.to_string()),
                CsvField::Float(v) => self.text.push_str(&format_float(*v)),
                CsvField::OptFloat(v) => {
                    if let Some(v) = v {
                        self.text.push_str(&format_float(*v));
                    }
                }
            }
        }
        self.text.push('\n');
    }

    pub fn into_string(self) -> String {
        self.text
    }
}

pub enum CsvField<'a> {
    Str(&'a str),
    Uint(u64),
    Float(f64),
    OptFloat(Option<f64>),
}

/// Shortest round-trip representation; stable across runs and platforms.
pub fn format_float(v: f64) -> String {
    if v == v.trunc() && v.abs() < 1e15 {
        format!("{v:.1}")
    } else {
        format!("{v}")
    }
}
