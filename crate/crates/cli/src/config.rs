//! `--config FILE`: `key = value` lines that fill in flags missing from argv.

use std::collections::HashSet;
use std::ffi::OsString;
use std::fs;

use crate::error::{CliError, CliResult};

/// Parses `key = value` lines; `#` starts a comment, blank lines are skipped.
pub fn parse(text: &str) -> CliResult<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| {
            CliError::Usage(format!("config line {}: expected key = value", n + 1))
        })?;
        let key = k.trim().trim_start_matches("--").to_string();
        if key.is_empty() {
            return Err(CliError::Usage(format!("config line {}: empty key", n + 1)));
        }
        out.push((key, v.trim().to_string()));
    }
    Ok(out)
}

fn flag_name(arg: &str) -> Option<&str> {
    let name = arg.strip_prefix("--")?;
    Some(name.split_once('=').map_or(name, |(k, _)| k))
}

/// Appends the config file's entries to `args` for every flag not already
/// given on the command line. Boolean entries (`true`/`false`) become bare
/// flags or are dropped.
pub fn merge(args: Vec<OsString>) -> CliResult<Vec<OsString>> {
    let strings: Vec<String> = args
        .iter()
        .map(|a| a.to_string_lossy().into_owned())
        .collect();
    let mut path = None;
    for (i, a) in strings.iter().enumerate() {
        if a == "--config" {
            path = Some(
                strings
                    .get(i + 1)
                    .cloned()
                    .ok_or_else(|| CliError::Usage("--config needs a file".into()))?,
            );
        } else if let Some(p) = a.strip_prefix("--config=") {
            path = Some(p.to_string());
        }
    }
    let Some(path) = path else {
        return Ok(args);
    };
    let text = fs::read_to_string(&path)
        .map_err(|e| CliError::Usage(format!("cannot read config {path}: {e}")))?;
    let given: HashSet<&str> = strings.iter().filter_map(|a| flag_name(a)).collect();
    let mut merged = args.clone();
    for (key, value) in parse(&text)? {
        if key == "config" || given.contains(key.as_str()) {
            continue;
        }
        match value.as_str() {
            "true" => merged.push(format!("--{key}").into()),
            "false" => {}
            _ => merged.push(format!("--{key}={value}").into()),
        }
    }
    Ok(merged)
}
