//! CSV emission: `#`-prefixed self-describing metadata, 17-significant-digit
//! floats (round-trip exact), byte-deterministic for fixed inputs.

use anyhow::{Context, Result};
use std::io::Write;
use std::path::Path;

/// 17 significant digits; parses back to the identical f64.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

pub struct Csv {
    pub meta: Vec<String>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<f64>>,
    pub footer: Vec<String>,
}

impl Csv {
    pub fn render(&self) -> String {
        let mut out = String::new();
        for line in &self.meta {
            out.push_str("# ");
            out.push_str(line);
            out.push('\n');
        }
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let line: Vec<String> = row.iter().map(|&x| format_float(x)).collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        for line in &self.footer {
            out.push_str("# ");
            out.push_str(line);
            out.push('\n');
        }
        out
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let mut file = std::fs::File::create(path)
            .with_context(|| format!("cannot create {}", path.display()))?;
        file.write_all(self.render().as_bytes())
            .with_context(|| format!("cannot write {}", path.display()))?;
        Ok(())
    }
}

/// Standard metadata block: tool version, command, resolved configuration.
pub fn metadata(
    command: &str,
    resolved: &[(String, String)],
    extra: &[(String, String)],
) -> Vec<String> {
    let mut meta = vec![
        format!("mzsim {}", env!("CARGO_PKG_VERSION")),
        format!("command = {command}"),
    ];
    for (key, value) in resolved {
        meta.push(format!("{key} = {value}"));
    }
    for (key, value) in extra {
        meta.push(format!("{key} = {value}"));
    }
    meta
}
