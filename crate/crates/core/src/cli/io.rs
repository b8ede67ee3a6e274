use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::config::RunConfig;
use crate::entropy::{renyi_bound_with_hbar, ConjugatePair};
use crate::error::{Error, Result};
use crate::revivals::{DiagnosticSeries, RevivalReport};
use crate::systems::Timescales;

pub const UNITS_NOTE: &str = "oscillator: m = omega = hbar = 1 unless set; \
well: 2m = hbar = L = 1 unless set; bouncer: hbar = 2m = g = 1, lengths in (hbar^2/(2 m^2 g))^(1/3)";

/// Sidecar describing a series file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Meta {
    pub version: String,
    pub units: String,
    pub config: RunConfig,
    pub hbar: f64,
    pub timescales: Timescales,
    pub pairs: Vec<ConjugatePair>,
    /// Lower bound of each pair's entropy sum, in the same order.
    pub bounds: Vec<f64>,
    pub columns: Vec<String>,
    pub samples: usize,
}

impl Meta {
    pub fn new(config: &RunConfig, series: &DiagnosticSeries, timescales: Timescales) -> Self {
        let pairs: Vec<ConjugatePair> = series.entropy_sums.iter().map(|(p, _)| *p).collect();
        let mut columns = vec!["t".to_string()];
        columns.extend(series.columns().into_iter().map(|(n, _)| n));
        Self {
            version: env!("CARGO_PKG_VERSION").to_string(),
            units: UNITS_NOTE.to_string(),
            config: config.clone(),
            hbar: series.hbar,
            timescales,
            bounds: pairs
                .iter()
                .map(|p| renyi_bound_with_hbar(p, series.hbar))
                .collect(),
            pairs,
            columns,
            samples: series.len(),
        }
    }
}

/// Combined revival analysis written next to the series.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReportFile {
    pub version: String,
    pub timescales: Timescales,
    pub reports: Vec<RevivalReport>,
}

/// Writes via a temporary sibling and a rename, so readers never observe a
/// partial file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let io = |source| Error::Io {
        path: path.to_path_buf(),
        source,
    };
    let name = path
        .file_name()
        .ok_or_else(|| Error::Config(format!("{} is not a file path", path.display())))?;
    let tmp = path.with_file_name(format!(
        ".{}.tmp{}",
        name.to_string_lossy(),
        std::process::id()
    ));
    let result = (|| {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
        fs::rename(&tmp, path)
    })();
    if result.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    result.map_err(io)
}

pub fn series_csv(series: &DiagnosticSeries) -> String {
    let columns = series.columns();
    let mut out = String::from("t");
    for (name, _) in &columns {
        out.push(',');
        out.push_str(name);
    }
    out.push('\n');
    for (i, t) in series.times.iter().enumerate() {
        out.push_str(&format!("{t:.11e}"));
        for (_, values) in &columns {
            out.push_str(&format!(",{:.11e}", values[i]));
        }
        out.push('\n');
    }
    out
}

/// Named columns of a series file; the first is always `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub names: Vec<String>,
    pub columns: Vec<Vec<f64>>,
}

pub fn parse_csv(text: &str, origin: &str) -> Result<Table> {
    let schema = |line: usize, message: String| Error::Schema {
        path: PathBuf::from(format!("{origin}:{line}")),
        message,
    };
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or_else(|| schema(1, "empty file".into()))?;
    let names: Vec<String> = header.split(',').map(|s| s.trim().to_string()).collect();
    if names.first().map(String::as_str) != Some("t") {
        return Err(schema(1, "first column must be `t`".into()));
    }
    let mut columns = vec![Vec::new(); names.len()];
    for (i, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != names.len() {
            return Err(schema(
                i + 1,
                format!("expected {} fields, found {}", names.len(), fields.len()),
            ));
        }
        for (col, field) in columns.iter_mut().zip(&fields) {
            let v: f64 = field
                .trim()
                .parse()
                .map_err(|_| schema(i + 1, format!("`{}` is not a number", field.trim())))?;
            col.push(v);
        }
    }
    if columns[0].len() < 2 {
        return Err(schema(1, "need at least two data rows".into()));
    }
    Ok(Table { names, columns })
}

pub fn read_to_string(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn read_meta(path: &Path) -> Result<Meta> {
    let text = read_to_string(path)?;
    serde_json::from_str(&text).map_err(|e| Error::Schema {
        path: PathBuf::from(format!("{}:{}", path.display(), e.line())),
        message: e.to_string(),
    })
}

/// `<prefix><suffix>`, keeping any directory part of the prefix.
pub fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_schema_errors_name_lines() {
        let ok = "t,a\n0,1\n1,2\n";
        let t = parse_csv(ok, "s.csv").unwrap();
        assert_eq!(t.names, ["t", "a"]);
        assert_eq!(t.columns[1], [1.0, 2.0]);
        let e = parse_csv("t,a\n0,1\n1\n", "s.csv").unwrap_err();
        assert!(matches!(e, Error::Schema { .. }));
        assert!(e.to_string().contains("s.csv:3"), "{e}");
        assert!(parse_csv("x,a\n0,1\n", "s.csv").is_err());
        assert!(parse_csv("t,a\n0,z\n1,2\n", "s.csv")
            .unwrap_err()
            .to_string()
            .contains(":2"));
    }

    #[test]
    fn atomic_write_replaces() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("x.txt");
        write_atomic(&p, b"one").unwrap();
        write_atomic(&p, b"two").unwrap();
        assert_eq!(fs::read_to_string(&p).unwrap(), "two");
        assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 1);
        let missing = dir.path().join("nope").join("x.txt");
        assert!(matches!(
            write_atomic(&missing, b"x"),
            Err(Error::Io { .. })
        ));
    }

    #[test]
    fn suffix_keeps_directory() {
        assert_eq!(
            with_suffix(Path::new("out/run"), "_meta.json"),
            PathBuf::from("out/run_meta.json")
        );
    }
}
