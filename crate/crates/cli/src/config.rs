//! `key = value` defaults file.
//!
//! Blank lines and lines starting with `#` are ignored; values may be quoted.
//! Keys are long flag names (`lambda`, `max-iter`, `format`, ...). Keys that
//! the selected subcommand does not accept are skipped, so one file can
//! serve several commands.

use std::ffi::OsString;
use std::path::Path;

use clap::parser::ValueSource;
use clap::{ArgAction, ArgMatches, Command};

pub fn parse(text: &str) -> Result<Vec<(String, String)>, String> {
    let mut out = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| format!("config line {}: expected key = value", lineno + 1))?;
        let key = key.trim().trim_start_matches("--").replace('_', "-");
        let value = value.trim().trim_matches('"').to_string();
        if key.is_empty() {
            return Err(format!("config line {}: empty key", lineno + 1));
        }
        out.push((key, value));
    }
    Ok(out)
}

pub fn read(path: &Path) -> Result<Vec<(String, String)>, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
    parse(&text)
}

/// Appends `--key=value` for every config entry that the selected
/// (sub)command accepts and that was not given on the command line.
pub fn merge(
    mut command: Command,
    args: &[OsString],
    matches: &ArgMatches,
    entries: &[(String, String)],
) -> Vec<OsString> {
    command.build();
    let mut cmd = &command;
    let mut m = matches;
    while let Some((name, sub)) = m.subcommand() {
        match cmd.find_subcommand(name) {
            Some(c) => {
                cmd = c;
                m = sub;
            }
            None => break,
        }
    }
    let mut out = args.to_vec();
    for (key, value) in entries {
        if key == "config" {
            continue;
        }
        let Some(arg) = cmd.get_arguments().find(|a| a.get_long() == Some(key.as_str())) else {
            continue;
        };
        if m.value_source(arg.get_id().as_str()) == Some(ValueSource::CommandLine) {
            continue;
        }
        match arg.get_action() {
            ArgAction::SetTrue => {
                if matches!(value.as_str(), "true" | "1" | "yes") {
                    out.push(format!("--{key}").into());
                }
            }
            _ => out.push(format!("--{key}={value}").into()),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_entries() {
        let e = parse("# defaults\nlambda = 2/3\n\nmax_iter=50\nformat = \"table\"\n").unwrap();
        assert_eq!(
            e,
            vec![
                ("lambda".into(), "2/3".into()),
                ("max-iter".into(), "50".into()),
                ("format".into(), "table".into())
            ]
        );
        assert!(parse("lambda 2/3").is_err());
        assert!(parse("= 3").is_err());
    }
}
