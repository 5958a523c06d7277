//! `--config` files. Top-level keys are global flags, and the table named
//! after the subcommand holds its flags. Both are spliced into the argument
//! list ahead of the command-line flags, which therefore take precedence.

use std::ffi::OsString;
use std::path::Path;

use toml::{Table, Value};

use crate::CliError;

/// Returns the `--config` path of the raw arguments, if any.
pub fn config_path(args: &[OsString]) -> Option<OsString> {
    let mut it = args.iter().skip(1);
    while let Some(a) = it.next() {
        let s = a.to_string_lossy();
        if s == "--" {
            return None;
        }
        if s == "--config" {
            return it.next().cloned();
        }
        if let Some(rest) = s.strip_prefix("--config=") {
            return Some(rest.into());
        }
    }
    None
}

const SUBCOMMANDS: [&str; 6] = ["generate", "transform", "solve", "extract", "verify-noise", "verify"];

fn flags(table: &Table, skip_tables: bool) -> Result<Vec<OsString>, CliError> {
    let mut out = Vec::new();
    for (key, value) in table {
        let flag = format!("--{key}");
        match value {
            Value::Table(_) if skip_tables => {}
            Value::Boolean(true) => out.push(flag.into()),
            Value::Boolean(false) => {}
            Value::String(s) => out.push(format!("{flag}={s}").into()),
            Value::Integer(i) => out.push(format!("{flag}={i}").into()),
            Value::Float(f) => out.push(format!("{flag}={f:?}").into()),
            Value::Array(items) => {
                let parts: Result<Vec<String>, CliError> = items
                    .iter()
                    .map(|v| match v {
                        Value::Integer(i) => Ok(i.to_string()),
                        Value::Float(f) => Ok(format!("{f:?}")),
                        Value::String(s) => Ok(s.clone()),
                        other => Err(CliError::usage(format!("config key {key}: unsupported list item {other}"))),
                    })
                    .collect();
                out.push(format!("{flag}={}", parts?.join(",")).into());
            }
            other => return Err(CliError::usage(format!("config key {key}: unsupported value {other}"))),
        }
    }
    Ok(out)
}

/// Inserts the configured flags into `args`.
pub fn splice(args: Vec<OsString>, file: &Path) -> Result<Vec<OsString>, CliError> {
    let text = std::fs::read_to_string(file).map_err(|e| CliError::io(format!("{}: {e}", file.display())))?;
    let table: Table = text
        .parse()
        .map_err(|e| CliError::usage(format!("{}: {e}", file.display())))?;
    let Some(pos) = args
        .iter()
        .position(|a| SUBCOMMANDS.contains(&a.to_string_lossy().as_ref()))
    else {
        return Ok(args);
    };
    let name = args[pos].to_string_lossy().into_owned();
    let global = flags(&table, true)?;
    let local = match table.get(&name).or_else(|| table.get(&name.replace('-', "_"))) {
        Some(Value::Table(t)) => flags(t, false)?,
        Some(_) => return Err(CliError::usage(format!("config entry {name} must be a table"))),
        None => Vec::new(),
    };
    let mut out = Vec::with_capacity(args.len() + global.len() + local.len());
    out.extend_from_slice(&args[..1]);
    out.extend(global);
    out.extend_from_slice(&args[1..=pos]);
    out.extend(local);
    out.extend_from_slice(&args[pos + 1..]);
    Ok(out)
}
