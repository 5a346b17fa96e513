//! Deterministic text outputs, written atomically.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use super::CliError;
use crate::halfspace::Profile;

pub const PROFILE_HEADER: &str = "x,rho_s,rho_f,v_s,p,P_s,P_f";

/// `{:.16e}`: 17 significant digits, round-trip exact for `f64`.
pub fn number(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn profile_csv(profile: &Profile) -> String {
    let mut out = String::with_capacity(profile.len() * 170);
    out.push_str(PROFILE_HEADER);
    out.push('\n');
    for i in 0..profile.len() {
        let row = [
            profile.x[i],
            profile.rho_s[i],
            profile.rho_f[i],
            profile.v_s[i],
            profile.p[i],
            profile.p_s[i],
            profile.p_f[i],
        ];
        let cells: Vec<String> = row.iter().map(|&v| number(v)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

/// Flat `key=value` lines in insertion order.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct KeyValues {
    entries: Vec<(String, String)>,
}

impl KeyValues {
    pub fn text(&mut self, key: impl Into<String>, value: impl Into<String>) -> &mut Self {
        self.entries.push((key.into(), value.into()));
        self
    }

    pub fn num(&mut self, key: impl Into<String>, value: f64) -> &mut Self {
        self.text(key, number(value))
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        for (k, v) in &self.entries {
            let _ = writeln!(s, "{k}={v}");
        }
        s
    }
}

/// Writes through a temporary file in the target directory and renames it
/// into place, so readers never observe a partial file.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    std::fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| io_err(dir, e))?;
    tmp.write_all(contents.as_bytes())
        .map_err(|e| io_err(path, e))?;
    tmp.persist(path).map_err(|e| io_err(path, e.error))?;
    Ok(())
}

fn io_err(path: &Path, e: std::io::Error) -> CliError {
    CliError::Config(format!("cannot write {}: {e}", path.display()))
}
