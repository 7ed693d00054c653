//! CSV files with a `#` header recording the producing configuration.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::config::RunConfig;
use crate::error::PipelineError;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// One output file, fully rendered in memory before it touches disk.
#[derive(Debug, Clone, PartialEq)]
pub struct OutputFile {
    pub name: String,
    pub content: String,
}

pub struct Table {
    name: String,
    notes: Vec<String>,
    columns: &'static [&'static str],
    body: String,
}

impl Table {
    pub fn new(name: impl Into<String>, columns: &'static [&'static str]) -> Self {
        Self {
            name: name.into(),
            notes: Vec::new(),
            columns,
            body: String::new(),
        }
    }

    /// Extra `# key = value` line after the config block.
    pub fn note(&mut self, key: &str, value: impl std::fmt::Display) -> &mut Self {
        self.notes.push(format!("{key} = {value}"));
        self
    }

    pub fn row(&mut self, fields: &[&dyn std::fmt::Display]) {
        debug_assert_eq!(fields.len(), self.columns.len());
        for (i, f) in fields.iter().enumerate() {
            if i > 0 {
                self.body.push(',');
            }
            write!(self.body, "{f}").expect("writing to a String");
        }
        self.body.push('\n');
    }

    /// Header, column line and rows. The header carries everything that
    /// determines the data; `out` and `jobs` are left out so that reruns in
    /// another directory or with another thread count match byte for byte.
    pub fn render(&self, config: &RunConfig) -> OutputFile {
        let mut s = format!("# adspec {VERSION}\n");
        for (k, v) in config.entries(false) {
            let _ = writeln!(s, "# {k} = {v}");
        }
        for n in &self.notes {
            let _ = writeln!(s, "# {n}");
        }
        s.push_str(&self.columns.join(","));
        s.push('\n');
        s.push_str(&self.body);
        OutputFile {
            name: self.name.clone(),
            content: s,
        }
    }
}

/// Lines after the `#` header, i.e. the column line and the rows.
pub fn data_section(content: &str) -> &str {
    let mut offset = 0;
    for line in content.split_inclusive('\n') {
        if !line.starts_with('#') {
            break;
        }
        offset += line.len();
    }
    &content[offset..]
}

/// Writes through a temporary sibling and a rename, so readers never see a
/// half-written file.
pub fn write_atomic(dir: &Path, file: &OutputFile) -> Result<PathBuf, PipelineError> {
    let io = |path: &Path| {
        let path = path.to_path_buf();
        move |source| PipelineError::Io { path, source }
    };
    fs::create_dir_all(dir).map_err(io(dir))?;
    let target = dir.join(&file.name);
    let tmp = dir.join(format!(".{}.tmp", file.name));
    fs::write(&tmp, &file.content).map_err(io(&tmp))?;
    fs::rename(&tmp, &target).map_err(io(&target))?;
    Ok(target)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Command;

    #[test]
    fn header_then_data() {
        let mut cfg = RunConfig::defaults(Command::Spectrum);
        let mut t = Table::new("x.csv", &["a", "b"]);
        t.note("extra", 1.5);
        t.row(&[&1, &0.25]);
        let f = t.render(&cfg);
        assert!(f.content.starts_with("# adspec "));
        assert!(f.content.contains("# extra = 1.5\n"));
        assert_eq!(data_section(&f.content), "a,b\n1,0.25\n");
        cfg.jobs = 7;
        cfg.out = "elsewhere".into();
        assert_eq!(t.render(&cfg), f);
    }

    #[test]
    fn atomic_write_leaves_no_temp() {
        let dir = tempfile::tempdir().unwrap();
        let f = OutputFile {
            name: "a.csv".into(),
            content: "x\n".into(),
        };
        let p = write_atomic(dir.path(), &f).unwrap();
        assert_eq!(fs::read_to_string(p).unwrap(), "x\n");
        let names: Vec<_> = fs::read_dir(dir.path())
            .unwrap()
            .map(|e| e.unwrap().file_name())
            .collect();
        assert_eq!(names.len(), 1);
    }
}
