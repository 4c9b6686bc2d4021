//! Flat `key=value` configuration files. Keys are long flag names (`-` or
//! `_` separated); blank lines and lines starting with `#` are ignored.
//! Values fill in flags absent from the command line.

use std::ffi::OsString;

use anyhow::{Context, Result};

use crate::FormatError;

fn config_path(args: &[OsString]) -> Option<String> {
    let mut it = args.iter().map(|a| a.to_string_lossy().into_owned());
    while let Some(a) = it.next() {
        if a == "--config" {
            return it.next();
        }
        if let Some(p) = a.strip_prefix("--config=") {
            return Some(p.to_string());
        }
    }
    None
}

fn has_flag(args: &[OsString], flag: &str) -> bool {
    args.iter().map(|a| a.to_string_lossy()).any(|a| a == flag || a.starts_with(&format!("{flag}=")))
}

fn cli_param_keys(args: &[OsString]) -> Vec<String> {
    let args: Vec<String> = args.iter().map(|a| a.to_string_lossy().into_owned()).collect();
    let mut keys = Vec::new();
    for (i, a) in args.iter().enumerate() {
        let value = if a == "--param" { args.get(i + 1).cloned() } else { a.strip_prefix("--param=").map(str::to_string) };
        if let Some(v) = value {
            keys.push(v.split_once('=').map(|(k, _)| k.to_string()).unwrap_or(v));
        }
    }
    keys
}

/// `args` with the config file's entries appended for every flag the
/// command line leaves unset.
pub fn merge(mut args: Vec<OsString>) -> Result<Vec<OsString>> {
    let Some(path) = config_path(&args) else {
        return Ok(args);
    };
    let text = std::fs::read_to_string(&path).with_context(|| format!("cannot read config `{path}`"))?;
    let param_keys = cli_param_keys(&args);
    let mut extra: Vec<OsString> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| FormatError(format!("{path}:{}: expected `key=value`", i + 1)))?;
        let key = key.trim().replace('_', "-");
        let value = value.trim();
        if key == "config" {
            return Err(FormatError(format!("{path}:{}: nested config files are not supported", i + 1)).into());
        }
        let flag = format!("--{key}");
        match key.as_str() {
            "timing" => match value {
                "true" if !has_flag(&args, &flag) => extra.push(flag.into()),
                "true" | "false" => {}
                _ => return Err(FormatError(format!("{path}:{}: `timing` expects true or false", i + 1)).into()),
            },
            "param" => {
                let k = value.split_once('=').map(|(k, _)| k).unwrap_or(value);
                if !param_keys.iter().any(|p| p == k) {
                    extra.push(format!("--param={value}").into());
                }
            }
            _ if !has_flag(&args, &flag) => extra.push(format!("{flag}={value}").into()),
            _ => {}
        }
    }
    args.extend(extra);
    Ok(args)
}
