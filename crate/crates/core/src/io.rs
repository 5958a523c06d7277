//! CSV files for paths and series, and the JSON manifest that ties an
//! ensemble's files to the seed and specification that produced them.

use std::fs::File;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::discrete_ar::DiscreteSeries;
use crate::error::{Error, Result};
use crate::path_core::{GridDescription, SamplePath, TimeGrid};

/// 17 significant digits: enough to round-trip every double.
fn fmt(v: f64) -> String {
    format!("{v:.16e}")
}

fn csv_error(file: &Path, e: csv::Error) -> Error {
    match e.kind() {
        csv::ErrorKind::Io(_) => Error::Io(format!("{}: {e}", file.display())),
        _ => Error::Data(format!("{}: {e}", file.display())),
    }
}

fn write_rows(file: &Path, header: [&str; 2], rows: impl Iterator<Item = (String, f64)>) -> Result<()> {
    let mut w = csv::Writer::from_path(file).map_err(|e| csv_error(file, e))?;
    w.write_record(header).map_err(|e| csv_error(file, e))?;
    for (key, value) in rows {
        w.write_record([key, fmt(value)]).map_err(|e| csv_error(file, e))?;
    }
    w.flush().map_err(|e| Error::Io(format!("{}: {e}", file.display())))
}

fn read_rows(file: &Path, header: [&str; 2]) -> Result<Vec<(String, f64)>> {
    let mut r = csv::Reader::from_path(file).map_err(|e| csv_error(file, e))?;
    let found = r.headers().map_err(|e| csv_error(file, e))?.clone();
    if found.iter().collect::<Vec<_>>() != header {
        return Err(Error::Data(format!(
            "{}: expected header {}, found {}",
            file.display(),
            header.join(","),
            found.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(|e| csv_error(file, e))?;
        let value: f64 = rec[1]
            .trim()
            .parse()
            .map_err(|_| Error::Data(format!("{}: bad value {:?}", file.display(), &rec[1])))?;
        rows.push((rec[0].trim().to_string(), value));
    }
    Ok(rows)
}

/// Writes `t,value` rows.
pub fn write_path_csv(path: &SamplePath, file: &Path) -> Result<()> {
    write_rows(
        file,
        ["t", "value"],
        path.times().iter().zip(path.values()).map(|(&t, &v)| (fmt(t), v)),
    )
}

/// Reads `t,value` rows; the grid layout is inferred from the times.
pub fn read_path_csv(file: &Path) -> Result<SamplePath> {
    let rows = read_rows(file, ["t", "value"])?;
    let mut times = Vec::with_capacity(rows.len());
    let mut values = Vec::with_capacity(rows.len());
    for (t, v) in rows {
        times.push(
            t.parse::<f64>()
                .map_err(|_| Error::Data(format!("{}: bad time {t:?}", file.display())))?,
        );
        values.push(v);
    }
    SamplePath::new(Arc::new(TimeGrid::infer(times)?), values)
}

/// Writes `n,value` rows.
pub fn write_series_csv(series: &DiscreteSeries, file: &Path) -> Result<()> {
    write_rows(
        file,
        ["n", "value"],
        series.indices().zip(series.values()).map(|(n, &v)| (n.to_string(), v)),
    )
}

/// Reads `n,value` rows with contiguous indices.
pub fn read_series_csv(file: &Path) -> Result<DiscreteSeries> {
    let rows = read_rows(file, ["n", "value"])?;
    let mut start = None;
    let mut values = Vec::with_capacity(rows.len());
    for (k, (n, v)) in rows.into_iter().enumerate() {
        let n: i64 = n
            .parse()
            .map_err(|_| Error::Data(format!("{}: bad index {n:?}", file.display())))?;
        let first = *start.get_or_insert(n);
        if n != first + k as i64 {
            return Err(Error::Data(format!("{}: indices are not contiguous at {n}", file.display())));
        }
        values.push(v);
    }
    DiscreteSeries::new(start.unwrap_or(0), values)
}

/// What the files of a manifest contain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DataKind {
    /// `t,value` sample paths on a shared grid.
    Paths,
    /// `n,value` integer-indexed series.
    Series,
    /// `n,value` series of log-increments `ξ_n` of the counterexample
    /// noise, whose increments `e^{ξ_n}` overflow.
    LogIncrements,
}

/// Provenance record of an ensemble on disk. File names are relative to the
/// manifest's directory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub tool: String,
    pub version: String,
    pub data: DataKind,
    pub seed: u64,
    pub stream_ids: Vec<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridDescription>,
    pub files: Vec<String>,
    /// How the data was produced: the generator specification, or the
    /// operation and parameters applied to a parent manifest.
    pub provenance: serde_json::Value,
}

impl Manifest {
    pub fn save(&self, file: &Path) -> Result<()> {
        let text = serde_json::to_string_pretty(self).expect("manifests always serialize");
        std::fs::write(file, text + "\n").map_err(|e| Error::Io(format!("{}: {e}", file.display())))
    }

    pub fn load(file: &Path) -> Result<Self> {
        let f = File::open(file).map_err(|e| Error::Io(format!("{}: {e}", file.display())))?;
        serde_json::from_reader(std::io::BufReader::new(f))
            .map_err(|e| Error::Data(format!("{}: {e}", file.display())))
    }

    /// Absolute locations of the data files of a manifest stored at
    /// `manifest_file`.
    pub fn resolve(&self, manifest_file: &Path) -> Vec<PathBuf> {
        let dir = manifest_file.parent().unwrap_or_else(|| Path::new("."));
        self.files.iter().map(|f| dir.join(f)).collect()
    }
}

/// File name of path `i` among `n`, zero-padded so names sort in order.
pub fn data_file_name(prefix: &str, i: usize, n: usize) -> String {
    let width = n.saturating_sub(1).to_string().len().max(4);
    format!("{prefix}_{i:0width$}.csv")
}
