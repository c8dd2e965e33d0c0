//! Number formatting and all-or-nothing writes of result files.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::Context;

/// 17 significant digits: parses back to the identical `f64`.
pub fn fmt_num(x: f64) -> String {
    format!("{x:.16e}")
}

/// Headerless one-column CSV.
pub fn column_csv(values: &[f64]) -> String {
    let mut out = String::with_capacity(values.len() * 24);
    for &v in values {
        out.push_str(&fmt_num(v));
        out.push('\n');
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Num(f64),
    Int(u64),
    Str(String),
    Null,
}

/// Flat JSON object with keys in insertion order.
#[derive(Debug, Default, Clone)]
pub struct Summary {
    entries: Vec<(String, Value)>,
}

impl Summary {
    pub fn num(&mut self, key: impl Into<String>, v: f64) -> &mut Self {
        self.entries.push((key.into(), Value::Num(v)));
        self
    }

    pub fn int(&mut self, key: impl Into<String>, v: u64) -> &mut Self {
        self.entries.push((key.into(), Value::Int(v)));
        self
    }

    pub fn str(&mut self, key: impl Into<String>, v: impl Into<String>) -> &mut Self {
        self.entries.push((key.into(), Value::Str(v.into())));
        self
    }

    pub fn opt_num(&mut self, key: impl Into<String>, v: Option<f64>) -> &mut Self {
        let v = v.map_or(Value::Null, Value::Num);
        self.entries.push((key.into(), v));
        self
    }

    pub fn to_json(&self) -> String {
        let quote = |s: &str| serde_json::to_string(s).expect("strings serialize");
        let body: Vec<String> = self
            .entries
            .iter()
            .map(|(k, v)| {
                let v = match v {
                    Value::Num(x) if x.is_finite() => fmt_num(*x),
                    Value::Num(_) | Value::Null => "null".to_string(),
                    Value::Int(i) => i.to_string(),
                    Value::Str(s) => quote(s),
                };
                format!("  {}: {v}", quote(k))
            })
            .collect();
        format!("{{\n{}\n}}\n", body.join(",\n"))
    }
}

/// Files of one command run. Nothing is visible in the output directory
/// until every file has been written.
#[derive(Debug, Default)]
pub struct OutputSet {
    files: Vec<(String, String)>,
}

impl OutputSet {
    pub fn add(&mut self, name: &str, contents: String) {
        self.files.push((name.to_string(), contents));
    }

    /// Writes to temporary names, then renames into place; on any error
    /// removes everything this call created.
    pub fn commit(&self, dir: &Path) -> anyhow::Result<Vec<PathBuf>> {
        fs::create_dir_all(dir).with_context(|| format!("cannot create output directory {}", dir.display()))?;
        let pid = std::process::id();
        let staged: Vec<(PathBuf, PathBuf)> = self
            .files
            .iter()
            .map(|(name, _)| (dir.join(format!(".{name}.{pid}.tmp")), dir.join(name)))
            .collect();
        let mut created: Vec<&Path> = Vec::new();
        let result = (|| -> anyhow::Result<()> {
            for ((tmp, _), (_, contents)) in staged.iter().zip(&self.files) {
                created.push(tmp);
                fs::write(tmp, contents).with_context(|| format!("cannot write {}", tmp.display()))?;
            }
            for (tmp, dest) in &staged {
                fs::rename(tmp, dest).with_context(|| format!("cannot write {}", dest.display()))?;
                created.push(dest);
            }
            Ok(())
        })();
        if let Err(e) = result {
            for p in created {
                let _ = fs::remove_file(p);
            }
            return Err(e);
        }
        Ok(staged.into_iter().map(|(_, dest)| dest).collect())
    }
}
