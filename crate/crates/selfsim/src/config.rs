//! `--config` files: one `key=value` per line, keys being long flag names.
//!
//! The file is expanded into flags placed ahead of the command-line flags,
//! and the parser keeps the last occurrence of each flag, so flags given on
//! the command line win.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{ArgAction, Command};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("FileNotFound: config file {0}")]
    FileNotFound(PathBuf),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("MalformedConfig: {path}, line {line}: expected key=value")]
    Malformed { path: PathBuf, line: usize },
    #[error("UnknownFlag: {path}, line {line}: `{key}` is not a flag of `{subcommand}`")]
    UnknownKey { path: PathBuf, line: usize, key: String, subcommand: String },
    #[error("MalformedConfig: {path}, line {line}: `{key}` takes true or false")]
    NotABool { path: PathBuf, line: usize, key: String },
}

/// `(line, key, value)` entries. Blank lines and lines starting with `#`
/// are skipped.
pub fn parse_config(text: &str, path: &Path) -> Result<Vec<(usize, String, String)>, ConfigError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(ConfigError::Malformed { path: path.to_path_buf(), line: i + 1 });
        };
        let key = key.trim().trim_start_matches("--");
        if key.is_empty() {
            return Err(ConfigError::Malformed { path: path.to_path_buf(), line: i + 1 });
        }
        out.push((i + 1, key.to_string(), value.trim().to_string()));
    }
    Ok(out)
}

fn config_path(args: &[OsString]) -> Option<PathBuf> {
    let mut it = args.iter();
    while let Some(a) = it.next() {
        let s = a.to_string_lossy();
        if s == "--config" {
            return it.next().map(PathBuf::from);
        }
        if let Some(rest) = s.strip_prefix("--config=") {
            return Some(PathBuf::from(rest));
        }
    }
    None
}

/// Splices the flags of a `--config` file, if one is given, in front of the
/// subcommand's own arguments. Anything the expansion cannot make sense of
/// is left for the parser to report.
pub fn expand_args(cmd: &Command, args: Vec<OsString>) -> Result<Vec<OsString>, ConfigError> {
    if args.len() < 2 {
        return Ok(args);
    }
    let name = args[1].to_string_lossy().into_owned();
    let Some(sub) = cmd.find_subcommand(&name) else { return Ok(args) };
    let Some(path) = config_path(&args[2..]) else { return Ok(args) };
    let text = std::fs::read_to_string(&path).map_err(|e| match e.kind() {
        std::io::ErrorKind::NotFound => ConfigError::FileNotFound(path.clone()),
        _ => ConfigError::Io { path: path.clone(), source: e },
    })?;
    let mut injected = Vec::new();
    for (line, key, value) in parse_config(&text, &path)? {
        let arg = sub
            .get_arguments()
            .find(|a| a.get_long() == Some(key.as_str()) && key != "config")
            .ok_or_else(|| ConfigError::UnknownKey {
                path: path.clone(),
                line,
                key: key.clone(),
                subcommand: name.clone(),
            })?;
        if matches!(arg.get_action(), ArgAction::SetTrue) {
            match value.as_str() {
                "true" => injected.push(OsString::from(format!("--{key}"))),
                "false" => {}
                _ => return Err(ConfigError::NotABool { path: path.clone(), line, key }),
            }
        } else {
            injected.push(OsString::from(format!("--{key}={value}")));
        }
    }
    let mut out = Vec::with_capacity(args.len() + injected.len());
    out.extend(args[..2].iter().cloned());
    out.extend(injected);
    out.extend(args[2..].iter().cloned());
    Ok(out)
}
