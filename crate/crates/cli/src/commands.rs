use std::sync::Arc;

use rayon::prelude::*;
use serde_json::{json, Map, Value};

use lamperti_core::discrete_ar::{
    ar1_residual, default_depth, discrete_stationary_solution, extract_discrete_noise,
};
use lamperti_core::generators::{Generated, ProcessSpec};
use lamperti_core::lamperti::{discrete_lamperti, discrete_lamperti_inverse, lamperti_forward, lamperti_inverse};
use lamperti_core::langevin::{extract_noise, solve_forward, stationary_solution, verify_gh_noise};
use lamperti_core::path_core::{Ensemble, HurstParam, SamplePath, TimeGrid};
use lamperti_core::stat_tests::{
    all_of, test_increment_stationarity, test_self_similarity, test_stationarity, TestReport,
};
use lamperti_core::Result as CoreResult;

use crate::args::*;
use crate::data::{self, Data, Loaded};
use crate::CliError;

/// What a command reports back to `main`.
pub struct Outcome {
    pub message: String,
    /// `Some(false)` makes `verify` exit with status 1.
    pub verdict: Option<bool>,
}

impl Outcome {
    fn done(message: String) -> Self {
        Self { message, verdict: None }
    }
}

/// `start:stop:step` or `geo:start:stop:ratio`.
pub fn parse_grid(text: &str) -> Result<TimeGrid, CliError> {
    let bad = || CliError::usage(format!("grid {text:?}: expected start:stop:step or geo:start:stop:ratio"));
    let parts: Vec<&str> = text.split(':').collect();
    let nums = |items: &[&str]| -> Result<Vec<f64>, CliError> {
        items.iter().map(|s| s.trim().parse::<f64>().map_err(|_| bad())).collect()
    };
    match parts.as_slice() {
        ["geo", rest @ ..] if rest.len() == 3 => {
            let v = nums(rest)?;
            Ok(TimeGrid::geometric(v[0], v[1], v[2])?)
        }
        [_, _, _] => {
            let v = nums(&parts)?;
            Ok(TimeGrid::uniform(v[0], v[1], v[2])?)
        }
        _ => Err(bad()),
    }
}

fn spec_from_flags(a: &GenerateArgs) -> Result<ProcessSpec, CliError> {
    let mut m = Map::new();
    m.insert("kind".into(), Value::from(a.kind.replace('-', "_")));
    let mut put = |k: &str, v: Option<Value>| {
        if let Some(v) = v {
            m.insert(k.into(), v);
        }
    };
    put("hurst", a.hurst.map(Value::from));
    put("theta", a.theta.map(Value::from));
    put("slope", a.slope.map(Value::from));
    put("alpha", a.alpha.map(Value::from));
    put("n", a.n.map(Value::from));
    put("c", a.c.map(Value::from));
    put("ar", a.ar.clone().map(Value::from));
    put("ma", a.ma.clone().map(Value::from));
    put("noise_sd", a.noise_sd.map(Value::from));
    put("burn_in", a.burn_in.map(Value::from));
    put("b", a.b.clone().map(Value::from));
    let spec: ProcessSpec = serde_json::from_value(Value::Object(m))
        .map_err(|e| CliError::usage(format!("process {}: {e}", a.kind)))?;
    spec.validate()?;
    Ok(spec)
}

pub fn generate(a: &GenerateArgs) -> Result<Outcome, CliError> {
    let spec = spec_from_flags(a)?;
    let grid = a.grid.as_deref().map(parse_grid).transpose()?.map(Arc::new);
    let (data, seed, streams) = match spec.generate(grid, a.seed, a.paths)? {
        Generated::Paths(ens) => {
            let (seed, ids) = (ens.seed(), ens.stream_ids().to_vec());
            (Data::Paths(ens), seed, ids)
        }
        Generated::Series { series, seed, stream_ids } => (Data::Series(series), seed, stream_ids),
        Generated::Pareto { noises, seed, stream_ids } => (Data::Pareto(noises), seed, stream_ids),
    };
    let provenance = json!({
        "command": "generate",
        "spec": serde_json::to_value(&spec).expect("specs serialize"),
        "seed": a.seed,
        "paths": a.paths,
        "grid": a.grid,
    });
    let file = data::save(&a.output.out, &data, seed, streams, provenance)?;
    Ok(Outcome::done(format!("wrote {} {} to {}", data.len(), spec.name(), file.display())))
}

fn map_paths(ens: &Ensemble, f: impl Fn(&SamplePath) -> CoreResult<SamplePath> + Sync) -> Result<Ensemble, CliError> {
    Ok(ens.map_paths(f)?)
}

fn map_series<T: Sync, U: Send>(items: &[T], f: impl Fn(&T) -> CoreResult<U> + Sync + Send) -> Result<Vec<U>, CliError> {
    Ok(items.par_iter().map(f).collect::<CoreResult<Vec<_>>>()?)
}

fn save_derived(
    out: &std::path::Path,
    loaded: &Loaded,
    data: &Data,
    command: &str,
    params: Value,
) -> Result<std::path::PathBuf, CliError> {
    data::save(
        out,
        data,
        loaded.manifest.seed,
        loaded.manifest.stream_ids.clone(),
        data::derived(command, params, &loaded.manifest),
    )
}

fn needs_paths(cmd: &str, what: &Data) -> CliError {
    let kind = match what {
        Data::Paths(_) => "paths",
        Data::Series(_) => "series",
        Data::Pareto(_) => "log-increment series",
    };
    CliError::usage(format!("{cmd} does not apply to {kind}"))
}

pub fn transform(a: &TransformArgs) -> Result<Outcome, CliError> {
    let loaded = data::load(&a.input.input)?;
    let h = HurstParam::new(a.hurst)?;
    let forward = a.direction == Direction::Forward;
    let out = match &loaded.data {
        Data::Paths(ens) => Data::Paths(map_paths(ens, |p| {
            if forward {
                lamperti_forward(p, h)
            } else {
                lamperti_inverse(p, h)
            }
        })?),
        Data::Series(s) => Data::Series(map_series(s, |x| {
            if forward {
                discrete_lamperti(x, a.hurst)
            } else {
                discrete_lamperti_inverse(x, a.hurst)
            }
        })?),
        other => return Err(needs_paths("transform", other)),
    };
    let direction = if forward { "forward" } else { "inverse" };
    let file = save_derived(&a.output.out, &loaded, &out, "transform", json!({"direction": direction, "H": a.hurst}))?;
    Ok(Outcome::done(format!("wrote {direction} transforms to {}", file.display())))
}

pub fn solve(a: &SolveArgs) -> Result<Outcome, CliError> {
    let loaded = data::load(&a.input.input)?;
    let h = a.hurst;
    let names = &loaded.manifest.files;
    match (&loaded.data, a.u0) {
        (Data::Paths(ens), Some(u0)) => {
            let sols = ens
                .paths()
                .par_iter()
                .map(|g| solve_forward(g, h, u0).map(|s| s.path))
                .collect::<CoreResult<Vec<_>>>()?;
            let out = Data::Paths(Ensemble::new(sols, ens.seed(), ens.stream_ids().to_vec())?);
            let file = save_derived(&a.output.out, &loaded, &out, "solve", json!({"H": h, "u0": u0}))?;
            Ok(Outcome::done(format!("wrote solutions to {}", file.display())))
        }
        (Data::Paths(ens), None) => {
            let sols = ens
                .paths()
                .par_iter()
                .map(|g| stationary_solution(g, h, a.tol))
                .collect::<CoreResult<Vec<_>>>()?;
            let flags: Vec<Value> = sols
                .iter()
                .zip(names)
                .map(|(s, name)| {
                    json!({
                        "noise": name,
                        "converged": s.converged(),
                        "horizon": s.integral.horizon,
                        "u0": s.integral.value,
                    })
                })
                .collect();
            let failed = sols.iter().filter(|s| !s.converged()).count();
            let report = TestReport::threshold_test("improper_integral_convergence", failed as f64, 0.0, vec![sols.len()])
                .with_detail("tol", a.tol)
                .with_detail("paths", flags);
            let paths = sols.into_iter().map(|s| s.solution.path).collect();
            let out = Data::Paths(Ensemble::new(paths, ens.seed(), ens.stream_ids().to_vec())?);
            let file = save_derived(&a.output.out, &loaded, &out, "solve", json!({"H": h, "tol": a.tol, "stationary": true}))?;
            data::write_report(&a.output.out, "solve_report.json", &report)?;
            Ok(Outcome::done(format!(
                "wrote stationary solutions to {} ({} of {} integrals converged)",
                file.display(),
                report.n_samples[0] - failed,
                report.n_samples[0]
            )))
        }
        (Data::Series(s), None) => {
            let depth = a.depth.unwrap_or_else(|| default_depth(h));
            let sols = map_series(s, |dg| discrete_stationary_solution(dg, h, depth).map(|d| d.series))?;
            let file = save_derived(&a.output.out, &loaded, &Data::Series(sols), "solve", json!({"H": h, "depth": depth}))?;
            Ok(Outcome::done(format!("wrote stationary solutions to {}", file.display())))
        }
        (Data::Series(_), Some(_)) => Err(CliError::usage("series are solved from their history; drop --u0")),
        (other, _) => Err(needs_paths("solve", other)),
    }
}

pub fn extract(a: &ExtractArgs) -> Result<Outcome, CliError> {
    let loaded = data::load(&a.input.input)?;
    let h = a.hurst;
    let out = match &loaded.data {
        Data::Paths(ens) => Data::Paths(map_paths(ens, |u| extract_noise(u, h))?),
        Data::Series(s) => Data::Series(map_series(s, |u| extract_discrete_noise(u, h))?),
        other => return Err(needs_paths("extract", other)),
    };
    let file = save_derived(&a.output.out, &loaded, &out, "extract", json!({"H": h}))?;
    Ok(Outcome::done(format!("wrote noises to {}", file.display())))
}

fn gh_reports(d: &Data, h: f64, tol: f64, names: &[String]) -> Result<Vec<TestReport>, CliError> {
    let label = |r: TestReport, name: &String| r.with_detail("file", name.clone());
    match d {
        Data::Paths(ens) => Ok(ens
            .paths()
            .par_iter()
            .zip(names.par_iter())
            .map(|(g, name)| verify_gh_noise(g, h, tol).map(|r| label(r, name)))
            .collect::<CoreResult<_>>()?),
        Data::Pareto(noises) => Ok(noises
            .par_iter()
            .zip(names.par_iter())
            .map(|(g, name)| verify_gh_noise(g, h, tol).map(|r| label(r, name)))
            .collect::<CoreResult<_>>()?),
        other => Err(needs_paths("noise verification", other)),
    }
}

pub fn verify_noise(a: &VerifyNoiseArgs) -> Result<Outcome, CliError> {
    let loaded = data::load(&a.input.input)?;
    let reports = gh_reports(&loaded.data, a.hurst, a.tol, &loaded.manifest.files)?;
    let report = all_of("verify_noise", reports).with_detail("H", a.hurst).with_detail("tol", a.tol);
    let file = data::write_report(&a.output.out, "verify_noise.json", &report)?;
    Ok(Outcome::done(format!("{} ({})", report.summary(), file.display())))
}

fn sup(v: impl Iterator<Item = f64>) -> f64 {
    v.fold(0.0f64, |m, x| m.max(x.abs()))
}

fn roundtrip(d: &Data, h: f64, tol: f64) -> Result<TestReport, CliError> {
    match d {
        Data::Paths(ens) => {
            let errs = ens
                .paths()
                .par_iter()
                .map(|u| -> CoreResult<f64> {
                    let g = extract_noise(u, h)?;
                    let back = solve_forward(&g, h, u.values()[0])?.path;
                    let scale = sup(u.values().iter().copied());
                    let err = sup(back.values().iter().zip(u.values()).map(|(a, b)| a - b));
                    Ok(if scale == 0.0 { err } else { err / scale })
                })
                .collect::<CoreResult<Vec<_>>>()?;
            Ok(TestReport::threshold_test("roundtrip", sup(errs.into_iter()), tol, vec![ens.len()])
                .with_detail("measure", "sup-norm error relative to sup |U|"))
        }
        Data::Series(s) => {
            let res = map_series(s, |u| ar1_residual(u, &extract_discrete_noise(u, h)?, h))?;
            Ok(TestReport::threshold_test("roundtrip", sup(res.into_iter()), 0.0, vec![s.len()])
                .with_detail("measure", "AR(1) residual of the extracted increments"))
        }
        other => Err(needs_paths("--roundtrip", other)),
    }
}

pub fn verify(a: &VerifyArgs) -> Result<Outcome, CliError> {
    if !(a.roundtrip || a.stationarity || a.increment_stationarity || a.self_similarity || a.gh) {
        return Err(CliError::usage(
            "select at least one of --roundtrip, --stationarity, --increment-stationarity, --self-similarity, --gh",
        ));
    }
    let loaded = data::load(&a.input.input)?;
    let d = &loaded.data;
    let ensemble = || match d {
        Data::Paths(e) => Ok(e),
        other => Err(needs_paths("ensemble tests", other)),
    };
    let mut parts = Vec::new();
    if a.roundtrip {
        parts.push(roundtrip(d, a.hurst, a.roundtrip_tol)?);
    }
    if a.stationarity {
        parts.push(test_stationarity(ensemble()?, a.base, &a.lags, a.shift)?);
    }
    if a.increment_stationarity {
        let lags: Vec<f64> = a.lags.iter().copied().filter(|&l| l > 0.0).collect();
        parts.push(test_increment_stationarity(ensemble()?, a.base, &lags, a.shift)?);
    }
    if a.self_similarity {
        parts.push(test_self_similarity(ensemble()?, a.hurst, a.scale, &a.times)?);
    }
    if a.gh {
        let reports = gh_reports(d, a.hurst, a.tol, &loaded.manifest.files)?;
        parts.push(all_of("gh_membership", reports));
    }
    let report = all_of("verify", parts).with_detail("H", a.hurst);
    let file = data::write_report(&a.output.out, "verify.json", &report)?;
    Ok(Outcome {
        message: format!("{} ({})", report.summary(), file.display()),
        verdict: Some(report.pass),
    })
}
