use std::path::{Path, PathBuf};

use serde_json::{json, Value};

use lamperti_core::discrete_ar::DiscreteSeries;
use lamperti_core::generators::ParetoNoise;
use lamperti_core::io::{
    data_file_name, read_path_csv, read_series_csv, write_path_csv, write_series_csv, DataKind, Manifest,
};
use lamperti_core::path_core::Ensemble;
use lamperti_core::Error;

use crate::CliError;

pub const MANIFEST: &str = "manifest.json";

/// Contents of an ensemble directory.
pub enum Data {
    Paths(Ensemble),
    Series(Vec<DiscreteSeries>),
    Pareto(Vec<ParetoNoise>),
}

pub struct Loaded {
    pub manifest: Manifest,
    pub data: Data,
}

impl Data {
    pub fn len(&self) -> usize {
        match self {
            Data::Paths(e) => e.len(),
            Data::Series(s) => s.len(),
            Data::Pareto(p) => p.len(),
        }
    }
}

fn pareto_alpha(provenance: &Value) -> Option<f64> {
    provenance.get("spec").and_then(|s| s.get("alpha")).and_then(Value::as_f64)
}

pub fn load(file: &Path) -> Result<Loaded, CliError> {
    let manifest = Manifest::load(file)?;
    let files = manifest.resolve(file);
    if files.len() != manifest.stream_ids.len() {
        return Err(CliError::from(Error::Data(format!(
            "{}: {} files for {} streams",
            file.display(),
            files.len(),
            manifest.stream_ids.len()
        ))));
    }
    let data = match manifest.data {
        DataKind::Paths => {
            let paths = files.iter().map(|f| read_path_csv(f)).collect::<Result<Vec<_>, _>>()?;
            Data::Paths(Ensemble::new(paths, manifest.seed, manifest.stream_ids.clone())?)
        }
        DataKind::Series => Data::Series(files.iter().map(|f| read_series_csv(f)).collect::<Result<_, _>>()?),
        DataKind::LogIncrements => {
            let alpha = pareto_alpha(&manifest.provenance).ok_or_else(|| {
                CliError::from(Error::Data(format!("{}: provenance does not record alpha", file.display())))
            })?;
            let noises = files
                .iter()
                .map(|f| {
                    let s = read_series_csv(f)?;
                    ParetoNoise::from_log_increments(alpha, s.into_values())
                })
                .collect::<Result<_, _>>()?;
            Data::Pareto(noises)
        }
    };
    Ok(Loaded { manifest, data })
}

/// Writes the data files and the manifest into `dir`, returning the manifest
/// location.
pub fn save(
    dir: &Path,
    data: &Data,
    seed: u64,
    stream_ids: Vec<u64>,
    provenance: Value,
) -> Result<PathBuf, CliError> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(format!("{}: {e}", dir.display())))?;
    let n = data.len();
    let mut files = Vec::with_capacity(n);
    let (kind, grid) = match data {
        Data::Paths(ens) => {
            for (i, p) in ens.paths().iter().enumerate() {
                let name = data_file_name("path", i, n);
                write_path_csv(p, &dir.join(&name))?;
                files.push(name);
            }
            (DataKind::Paths, Some(ens.grid().describe()))
        }
        Data::Series(series) => {
            for (i, s) in series.iter().enumerate() {
                let name = data_file_name("series", i, n);
                write_series_csv(s, &dir.join(&name))?;
                files.push(name);
            }
            (DataKind::Series, None)
        }
        Data::Pareto(noises) => {
            for (i, p) in noises.iter().enumerate() {
                let name = data_file_name("log_increments", i, n);
                write_series_csv(&DiscreteSeries::new(0, p.log_increments().to_vec())?, &dir.join(&name))?;
                files.push(name);
            }
            (DataKind::LogIncrements, None)
        }
    };
    let manifest = Manifest {
        tool: "lamperti".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        data: kind,
        seed,
        stream_ids,
        grid,
        files,
        provenance,
    };
    let file = dir.join(MANIFEST);
    manifest.save(&file)?;
    Ok(file)
}

/// Provenance of a derived ensemble: the operation, its parameters and the
/// provenance of the input.
pub fn derived(command: &str, params: Value, parent: &Manifest) -> Value {
    json!({
        "command": command,
        "params": params,
        "parent": parent.provenance,
    })
}

pub fn write_report(dir: &Path, name: &str, report: &lamperti_core::stat_tests::TestReport) -> Result<PathBuf, CliError> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(format!("{}: {e}", dir.display())))?;
    let file = dir.join(name);
    std::fs::write(&file, report.to_json() + "\n").map_err(|e| CliError::io(format!("{}: {e}", file.display())))?;
    Ok(file)
}
