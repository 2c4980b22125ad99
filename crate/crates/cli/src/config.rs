//! Optional TOML defaults, spliced into the argument list ahead of the
//! user's own flags so that explicit flags win.

use std::ffi::OsString;
use std::path::Path;

use anyhow::{bail, Context, Result};
use toml::{Table, Value};

fn render(value: &Value) -> Result<String> {
    Ok(match value {
        Value::String(s) => s.clone(),
        Value::Integer(i) => i.to_string(),
        Value::Float(f) => f.to_string(),
        Value::Array(items) => items.iter().map(render).collect::<Result<Vec<_>>>()?.join(","),
        other => bail!("unsupported config value {other}"),
    })
}

fn push_flags(table: &Table, out: &mut Vec<OsString>) -> Result<()> {
    for (key, value) in table {
        if matches!(value, Value::Table(_)) {
            continue;
        }
        if key == "config" {
            bail!("config files cannot include other config files");
        }
        match value {
            Value::Boolean(true) => out.push(format!("--{key}").into()),
            Value::Boolean(false) => {}
            v => out.push(format!("--{key}={}", render(v)?).into()),
        }
    }
    Ok(())
}

/// Flags for `command` from the config file at `path`.
pub fn flags_for(path: &Path, command: &str) -> Result<Vec<OsString>> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
    let table: Table = text
        .parse()
        .with_context(|| format!("parsing config {}", path.display()))?;
    let mut out = Vec::new();
    push_flags(&table, &mut out)?;
    if let Some(section) = table.get(command) {
        match section {
            Value::Table(t) => push_flags(t, &mut out)?,
            _ => bail!("config key {command:?} must be a table"),
        }
    }
    Ok(out)
}

/// Inserts `flags` right after the subcommand token in `args`.
pub fn splice(args: &[OsString], command: &str, flags: Vec<OsString>) -> Vec<OsString> {
    let at = args.iter().position(|a| a == command).map_or(args.len(), |i| i + 1);
    let mut out = args[..at].to_vec();
    out.extend(flags);
    out.extend_from_slice(&args[at..]);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sections_and_types() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.toml");
        std::fs::write(
            &path,
            "seed = 3\n[demod]\nsf = 7\nbw = 1.6e6\nsync-word = [1, 2]\nno-scramble = true\n[emulate]\nsf = 9\n",
        )
        .unwrap();
        let flags = flags_for(&path, "demod").unwrap();
        let flags: Vec<_> = flags.iter().map(|f| f.to_str().unwrap()).collect();
        assert_eq!(
            flags,
            ["--seed=3", "--bw=1600000", "--no-scramble", "--sf=7", "--sync-word=1,2"]
        );
    }

    #[test]
    fn splice_after_command() {
        let args: Vec<OsString> = ["cck-lora", "--config", "c", "demod", "--sf", "8"]
            .iter()
            .map(OsString::from)
            .collect();
        let out = splice(&args, "demod", vec!["--sf=7".into()]);
        assert_eq!(out[4], "--sf=7");
        assert_eq!(out[5], "--sf");
    }
}
