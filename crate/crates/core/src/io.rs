//! Run configuration and artifact files: CSV tables plus JSON sidecars.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::minkowski::MinkVec3;

/// JSON artifact schema version.
pub const SCHEMA: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Horizon {
    Period,
    Time(f64),
}

impl Horizon {
    pub fn resolve(&self, period: f64) -> f64 {
        match *self {
            Horizon::Period => period,
            Horizon::Time(t) => t,
        }
    }
}

impl std::str::FromStr for Horizon {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        if s == "period" {
            return Ok(Horizon::Period);
        }
        s.parse::<f64>()
            .ok()
            .filter(|t| *t >= 0.0 && t.is_finite())
            .map(Horizon::Time)
            .ok_or_else(|| format!("horizon must be `period` or a non-negative number, got `{s}`"))
    }
}

/// Echo of a command's settings, stored in every sidecar.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunConfig {
    pub subcommand: String,
    #[serde(flatten)]
    pub params: serde_json::Value,
    pub out: PathBuf,
    pub format: Format,
}

/// One row of a trajectory file.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryRow {
    pub t: f64,
    pub s: f64,
    #[serde(rename = "X1")]
    pub x1: f64,
    #[serde(rename = "X2")]
    pub x2: f64,
    #[serde(rename = "X3")]
    pub x3: f64,
    #[serde(rename = "T1")]
    pub t1: f64,
    #[serde(rename = "T2")]
    pub t2: f64,
    #[serde(rename = "T3")]
    pub t3: f64,
}

impl TrajectoryRow {
    pub fn new(t: f64, s: f64, x: MinkVec3, tan: MinkVec3) -> Self {
        TrajectoryRow { t, s, x1: x.x1, x2: x.x2, x3: x.x3, t1: tan.x1, t2: tan.x2, t3: tan.x3 }
    }
}

/// Writes rows with a header; floats use the shortest representation that
/// parses back to the same value.
pub fn write_csv<T: Serialize>(path: &Path, rows: &[T]) -> Result<()> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_path(path)?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<Vec<T>> {
    let mut r = csv::Reader::from_path(path)?;
    let mut out = Vec::new();
    for row in r.deserialize() {
        out.push(row?);
    }
    Ok(out)
}

#[derive(Serialize)]
struct Artifact<'a, C: Serialize, D: Serialize> {
    schema: u32,
    config: &'a C,
    data: &'a D,
}

/// `{ "schema": 1, "config": ..., "data": ... }`.
pub fn write_json<C: Serialize, D: Serialize>(path: &Path, config: &C, data: &D) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(&mut w, &Artifact { schema: SCHEMA, config, data })?;
    w.write_all(b"\n")?;
    w.flush()?;
    Ok(())
}

/// Sidecar path for an artifact: `run.csv` → `run.csv.json`.
pub fn sidecar_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".json");
    PathBuf::from(s)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Provenance {
    pub package: String,
    pub version: String,
    pub seconds: f64,
    pub threads: Option<usize>,
}

impl Provenance {
    pub fn new(seconds: f64) -> Self {
        Provenance {
            package: env!("CARGO_PKG_NAME").into(),
            version: env!("CARGO_PKG_VERSION").into(),
            seconds,
            threads: std::env::var("HYPERVFE_THREADS").ok().and_then(|v| v.parse().ok()),
        }
    }
}

/// Writes `rows` to `out` as CSV or JSON and, for CSV, a JSON sidecar holding
/// the configuration and `summary`.
pub fn write_artifact<T: Serialize, S: Serialize>(
    config: &RunConfig,
    rows: &[T],
    summary: &S,
    seconds: f64,
) -> Result<()> {
    #[derive(Serialize)]
    struct Meta<'a, S> {
        provenance: Provenance,
        summary: &'a S,
    }
    #[derive(Serialize)]
    struct Full<'a, T, S> {
        provenance: Provenance,
        summary: &'a S,
        rows: &'a [T],
    }
    match config.format {
        Format::Csv => {
            write_csv(&config.out, rows)?;
            let meta = Meta { provenance: Provenance::new(seconds), summary };
            write_json(&sidecar_path(&config.out), config, &meta)
        }
        Format::Json => {
            let full = Full { provenance: Provenance::new(seconds), summary, rows };
            write_json(&config.out, config, &full)
        }
    }
}
