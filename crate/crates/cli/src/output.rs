//! CSV tables and the line-oriented summary file.

use std::fmt::Display;
use std::fs;
use std::path::{Path, PathBuf};

use schrodinger_lab::experiments::Check;

use crate::error::CliError;

/// 17 significant digits: enough to round-trip any `f64`.
pub fn real(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn opt_real(x: Option<f64>) -> String {
    x.map(real).unwrap_or_default()
}

fn io_error(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    }
}

pub fn ensure_dir(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(io_error(dir))
}

/// Writes `header` and `rows` to `dir/name`; an empty `rows` gives a header-only file.
pub fn write_csv<I>(dir: &Path, name: &str, header: &[&str], rows: I) -> Result<PathBuf, CliError>
where
    I: IntoIterator<Item = Vec<String>>,
{
    let path = dir.join(name);
    let mut w = csv::Writer::from_writer(Vec::new());
    let csv_err = |e: csv::Error| CliError::Io {
        path: path.clone(),
        source: std::io::Error::other(e),
    };
    w.write_record(header).map_err(csv_err)?;
    for row in rows {
        w.write_record(&row).map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io {
        path: path.clone(),
        source: std::io::Error::other(e.to_string()),
    })?;
    fs::write(&path, bytes).map_err(io_error(&path))?;
    Ok(path)
}

/// `key=value` lines followed by an assertions block.
#[derive(Debug, Clone)]
pub struct Summary {
    command: &'static str,
    entries: Vec<(String, String)>,
    checks: Vec<Check>,
}

impl Summary {
    pub fn new(command: &'static str) -> Self {
        Self {
            command,
            entries: Vec::new(),
            checks: Vec::new(),
        }
    }

    pub fn set(&mut self, key: impl Into<String>, value: impl Display) -> &mut Self {
        self.entries.push((key.into(), value.to_string()));
        self
    }

    pub fn list<T: Display>(&mut self, key: &str, values: &[T]) -> &mut Self {
        let joined: Vec<String> = values.iter().map(|v| v.to_string()).collect();
        self.set(key, joined.join(","))
    }

    pub fn checks(&mut self, checks: impl IntoIterator<Item = Check>) -> &mut Self {
        self.checks.extend(checks);
        self
    }

    pub fn check_list(&self) -> &[Check] {
        &self.checks
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn render(&self) -> String {
        let mut out = format!("command={}\n", self.command);
        for (k, v) in &self.entries {
            out.push_str(&format!("{k}={v}\n"));
        }
        out.push_str("[assertions]\n");
        for c in &self.checks {
            let tag = if c.passed { "PASS" } else { "FAIL" };
            out.push_str(&format!("{tag} {}: {}\n", c.name, c.detail));
        }
        let status = if self.passed() { "PASS" } else { "FAIL" };
        out.push_str(&format!("status={status}\n"));
        out
    }

    pub fn write(&self, dir: &Path) -> Result<PathBuf, CliError> {
        let path = dir.join(format!("{}_summary.txt", self.command));
        fs::write(&path, self.render()).map_err(io_error(&path))?;
        Ok(path)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn real_round_trips() {
        for x in [0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, f64::MIN_POSITIVE] {
            let s = real(x);
            assert_eq!(s.parse::<f64>().unwrap(), x);
        }
        assert_eq!(real(1.0), "1.0000000000000000e0");
    }

    #[test]
    fn empty_table_is_header_only() {
        let dir = tempfile::tempdir().unwrap();
        let path = write_csv(dir.path(), "t.csv", &["N", "ratio"], Vec::new()).unwrap();
        assert_eq!(fs::read_to_string(path).unwrap(), "N,ratio\n");
    }

    #[test]
    fn summary_layout() {
        let mut s = Summary::new("gaps");
        s.set("lambda", 0.2).list("N", &[64, 128]);
        s.checks([Check::new("a", true, "ok"), Check::new("b", false, "bad")]);
        assert!(!s.passed());
        assert_eq!(
            s.render(),
            "command=gaps\nlambda=0.2\nN=64,128\n[assertions]\nPASS a: ok\nFAIL b: bad\nstatus=FAIL\n"
        );
    }
}
