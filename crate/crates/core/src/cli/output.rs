//! CSV tables with a `# key=value` metadata block, and SVG files.

use std::fmt::Display;
use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use super::Failure;

/// Every setting of one invocation, in the order it was recorded.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: String,
    pub entries: Vec<(String, String)>,
}

impl RunConfig {
    pub fn new(command: &str) -> Self {
        RunConfig {
            command: command.to_string(),
            entries: Vec::new(),
        }
    }

    pub fn set(mut self, key: &str, value: impl Display) -> Self {
        self.entries.push((key.to_string(), value.to_string()));
        self
    }

    pub fn header_lines(&self) -> Vec<String> {
        let mut out = vec![
            format!("# tool={}", env!("CARGO_PKG_NAME")),
            format!("# version={}", env!("CARGO_PKG_VERSION")),
            format!("# command={}", self.command),
        ];
        out.extend(self.entries.iter().map(|(k, v)| format!("# {k}={v}")));
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    F(f64),
    I(usize),
    S(String),
}

impl Display for Cell {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Cell::F(x) if x.is_nan() => f.write_str("nan"),
            Cell::F(x) if x.is_infinite() => f.write_str(if *x > 0.0 { "inf" } else { "-inf" }),
            Cell::F(x) => write!(f, "{x:.16e}"),
            Cell::I(n) => write!(f, "{n}"),
            Cell::S(s) => f.write_str(s),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::F(x)
    }
}

impl From<usize> for Cell {
    fn from(n: usize) -> Self {
        Cell::I(n)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::S(s.to_string())
    }
}

fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    Failure::io(format!("{}: {e}", path.display()))
}

/// Writes into one output directory, remembering every file produced.
#[derive(Debug)]
pub struct OutputDir {
    root: PathBuf,
    config: RunConfig,
    written: Vec<PathBuf>,
}

impl OutputDir {
    pub fn create(root: &Path, config: RunConfig) -> Result<Self, Failure> {
        fs::create_dir_all(root).map_err(|e| io_failure(root, e))?;
        Ok(OutputDir {
            root: root.to_path_buf(),
            config,
            written: Vec::new(),
        })
    }

    pub fn config(&self) -> &RunConfig {
        &self.config
    }

    pub fn csv(&mut self, name: &str, header: &[&str], rows: &[Vec<Cell>]) -> Result<(), Failure> {
        let path = self.root.join(name);
        let file = fs::File::create(&path).map_err(|e| io_failure(&path, e))?;
        let mut w = BufWriter::new(file);
        let mut body = || -> std::io::Result<()> {
            for line in self.config.header_lines() {
                writeln!(w, "{line}")?;
            }
            writeln!(w, "{}", header.join(","))?;
            for row in rows {
                let cells: Vec<String> = row.iter().map(Cell::to_string).collect();
                writeln!(w, "{}", cells.join(","))?;
            }
            w.flush()
        };
        body().map_err(|e| io_failure(&path, e))?;
        self.written.push(path);
        Ok(())
    }

    /// Writes an SVG document with the run metadata in a leading comment.
    pub fn svg(&mut self, name: &str, document: &str) -> Result<(), Failure> {
        let path = self.root.join(name);
        let meta: Vec<String> = self
            .config
            .header_lines()
            .iter()
            .map(|l| l.trim_start_matches("# ").replace("--", "- -"))
            .collect();
        let text = format!("<!--\n{}\n-->\n{document}", meta.join("\n"));
        fs::write(&path, text).map_err(|e| io_failure(&path, e))?;
        self.written.push(path);
        Ok(())
    }

    pub fn into_written(self) -> Vec<PathBuf> {
        self.written
    }
}
