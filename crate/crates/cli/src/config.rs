//! `--config <path>`: a flat `key = value` file whose keys are long flag
//! names. Its entries are spliced in right after the subcommand, ahead of
//! the real arguments, so flags given on the command line win.

use std::ffi::OsString;
use std::fs;

use anyhow::{bail, Context, Result};

/// Parses `key = value` lines. `#` starts a comment; `true` turns a key into
/// a bare flag and `false` drops it.
pub fn config_args(text: &str) -> Result<Vec<OsString>> {
    let mut out = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            bail!("config line {}: expected `key = value`, got `{raw}`", n + 1);
        };
        let key = key.trim().trim_start_matches("--");
        let value = value.trim();
        if key.is_empty() || key == "config" {
            bail!("config line {}: invalid key `{key}`", n + 1);
        }
        match value {
            "true" => out.push(format!("--{key}").into()),
            "false" => {}
            _ => {
                out.push(format!("--{key}").into());
                out.push(value.into());
            }
        }
    }
    Ok(out)
}

/// Removes `--config <path>` from `args` and splices the file's entries in
/// after the subcommand name.
pub fn expand(mut args: Vec<OsString>) -> Result<Vec<OsString>> {
    let mut path = None;
    let mut i = 1;
    while i < args.len() {
        let arg = args[i].to_string_lossy().into_owned();
        if arg == "--config" {
            if i + 1 >= args.len() {
                bail!("--config needs a path");
            }
            path = Some(args.remove(i + 1));
            args.remove(i);
        } else if let Some(p) = arg.strip_prefix("--config=") {
            path = Some(p.into());
            args.remove(i);
        } else {
            i += 1;
        }
    }
    let Some(path) = path else {
        return Ok(args);
    };
    let text = fs::read_to_string(&path)
        .with_context(|| format!("reading config {}", path.to_string_lossy()))?;
    let extra = config_args(&text)?;
    let at = args
        .iter()
        .skip(1)
        .position(|a| !a.to_string_lossy().starts_with('-'))
        .map_or(args.len(), |p| p + 2);
    args.splice(at..at, extra);
    Ok(args)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn strings(v: Vec<OsString>) -> Vec<String> {
        v.into_iter().map(|s| s.into_string().unwrap()).collect()
    }

    #[test]
    fn parses_pairs_and_flags() {
        let text = "# experiment\nalgo = naive,mweights\nepsilon = 0.1, 0.2 \nfresh-instances = true\nverbose = false\n";
        assert_eq!(
            strings(config_args(text).unwrap()),
            vec![
                "--algo",
                "naive,mweights",
                "--epsilon",
                "0.1, 0.2",
                "--fresh-instances"
            ]
        );
        assert!(config_args("no equals sign").is_err());
    }

    #[test]
    fn splices_after_the_subcommand() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.conf");
        fs::write(&path, "runs = 5\nseed = 9\n").unwrap();
        let args: Vec<OsString> = [
            "colearn",
            "run",
            "--config",
            path.to_str().unwrap(),
            "--seed",
            "1",
        ]
        .iter()
        .map(OsString::from)
        .collect();
        assert_eq!(
            strings(expand(args).unwrap()),
            vec!["colearn", "run", "--runs", "5", "--seed", "9", "--seed", "1"]
        );
    }
}
