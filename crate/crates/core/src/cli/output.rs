//! CSV export and the metadata sidecar.
//!
//! Fields are written with the θ nodes across the first row and the ℘ nodes
//! down the first column; curves are two-column `x,y` files. Numbers use
//! the shortest representation that round-trips, so identical runs give
//! identical bytes.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::Value;

use crate::classical::SEPARATRIX_TOL;
use crate::mathieu::COEFFICIENT_TAIL_TOL;
use crate::quantum::{DENSITY_CUTOFF, REALITY_TOL, UNITARITY_TOL};
use crate::scaling::PhaseSpaceField;

#[derive(Debug, Clone, Serialize)]
pub struct FileEntry {
    pub file: String,
    pub content: String,
}

#[derive(Debug, Clone, Serialize)]
struct Tolerances {
    unitarity: f64,
    reality: f64,
    density_cutoff: f64,
    coefficient_tail: f64,
    separatrix: f64,
}

#[derive(Debug, Clone, Serialize)]
struct Sidecar<'a> {
    software: &'static str,
    version: &'static str,
    command: &'a str,
    parameters: &'a Value,
    tolerances: Tolerances,
    files: &'a [FileEntry],
}

/// Collects the files of one command and writes the sidecar last.
pub struct Output {
    dir: PathBuf,
    files: Vec<FileEntry>,
}

impl Output {
    pub fn new(dir: &Path) -> std::io::Result<Output> {
        fs::create_dir_all(dir)?;
        Ok(Output { dir: dir.to_path_buf(), files: Vec::new() })
    }

    pub fn files(&self) -> &[FileEntry] {
        &self.files
    }

    fn put(&mut self, name: &str, content: &str, text: String) -> std::io::Result<()> {
        fs::write(self.dir.join(name), text)?;
        self.files.push(FileEntry { file: name.to_string(), content: content.to_string() });
        Ok(())
    }

    pub fn field(&mut self, name: &str, content: &str, field: &PhaseSpaceField) -> std::io::Result<()> {
        let grid = &field.grid;
        let mut text = String::from("wp\\theta");
        for t in grid.thetas() {
            let _ = write!(text, ",{t}");
        }
        text.push('\n');
        for j in 0..grid.n_wp {
            let _ = write!(text, "{}", grid.wp(j));
            for i in 0..grid.n_theta {
                let _ = write!(text, ",{}", field.values[[i, j]]);
            }
            text.push('\n');
        }
        self.put(name, content, text)
    }

    pub fn curve(&mut self, name: &str, content: &str, columns: (&str, &str), samples: &[(f64, f64)]) -> std::io::Result<()> {
        let mut text = format!("{},{}\n", columns.0, columns.1);
        for (x, y) in samples {
            let _ = writeln!(text, "{x},{y}");
        }
        self.put(name, content, text)
    }

    /// Matrix with labeled rows and columns; `corner` names both axes.
    pub fn matrix(
        &mut self,
        name: &str,
        content: &str,
        corner: &str,
        rows: &[f64],
        cols: &[f64],
        value: impl Fn(usize, usize) -> f64,
    ) -> std::io::Result<()> {
        let mut text = corner.to_string();
        for c in cols {
            let _ = write!(text, ",{c}");
        }
        text.push('\n');
        for (r, row) in rows.iter().enumerate() {
            let _ = write!(text, "{row}");
            for c in 0..cols.len() {
                let _ = write!(text, ",{}", value(r, c));
            }
            text.push('\n');
        }
        self.put(name, content, text)
    }

    /// Writes `<command>.meta.json` and returns its path.
    pub fn finish(self, command: &str, parameters: &Value) -> std::io::Result<PathBuf> {
        let sidecar = Sidecar {
            software: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            command,
            parameters,
            tolerances: Tolerances {
                unitarity: UNITARITY_TOL,
                reality: REALITY_TOL,
                density_cutoff: DENSITY_CUTOFF,
                coefficient_tail: COEFFICIENT_TAIL_TOL,
                separatrix: SEPARATRIX_TOL,
            },
            files: &self.files,
        };
        let path = self.dir.join(format!("{}.meta.json", command.replace(' ', "_")));
        let mut text = serde_json::to_string_pretty(&sidecar).expect("sidecar serializes");
        text.push('\n');
        fs::write(&path, text)?;
        Ok(path)
    }
}
