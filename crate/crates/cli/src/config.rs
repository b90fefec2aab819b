//! Flat TOML manifests. Each key names a long flag (`d_a` and `d-a` both mean
//! `--d-a`); keys whose flag already appears on the command line are skipped.

use std::path::Path;

use crate::CliError;

/// The value of `--config`, if present.
pub fn config_path(argv: &[String]) -> Option<String> {
    argv.iter().enumerate().find_map(|(i, a)| {
        if a == "--config" {
            argv.get(i + 1).cloned()
        } else {
            a.strip_prefix("--config=").map(str::to_owned)
        }
    })
}

fn flag_given(argv: &[String], flag: &str) -> bool {
    argv.iter()
        .any(|a| a == flag || a.strip_prefix(flag).is_some_and(|rest| rest.starts_with('=')))
}

fn render(key: &str, v: &toml::Value) -> Result<Option<String>, CliError> {
    Ok(Some(match v {
        toml::Value::String(s) => s.clone(),
        toml::Value::Integer(i) => i.to_string(),
        toml::Value::Float(f) => f.to_string(),
        toml::Value::Boolean(true) => return Ok(None),
        toml::Value::Array(items) => items
            .iter()
            .map(|i| render(key, i).map(Option::unwrap_or_default))
            .collect::<Result<Vec<_>, _>>()?
            .join(","),
        _ => return Err(CliError::Usage(format!("config key `{key}`: unsupported value {v}"))),
    }))
}

/// `argv` with the manifest's missing flags appended.
pub fn merge(argv: &[String], path: &Path) -> Result<Vec<String>, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(path.to_owned(), e))?;
    let table: toml::Table = text
        .parse()
        .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    let mut out = argv.to_vec();
    for (key, value) in &table {
        if key == "config" {
            continue;
        }
        let flag = format!("--{}", key.replace('_', "-"));
        if flag_given(argv, &flag) || value == &toml::Value::Boolean(false) {
            continue;
        }
        out.push(flag);
        if let Some(v) = render(key, value)? {
            out.push(v);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn args(s: &str) -> Vec<String> {
        s.split_whitespace().map(str::to_owned).collect()
    }

    #[test]
    fn finds_path_in_both_spellings() {
        assert_eq!(config_path(&args("a --config x.toml")).as_deref(), Some("x.toml"));
        assert_eq!(config_path(&args("a --config=y.toml b")).as_deref(), Some("y.toml"));
        assert_eq!(config_path(&args("a b")), None);
    }

    #[test]
    fn command_line_wins() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.toml");
        std::fs::write(&path, "p = 9\nd = 3\nd_list = [50, 400]\nseed = 5\n").unwrap();
        let merged = merge(&args("moments exact --p 2 --seed=1"), &path).unwrap();
        assert_eq!(merged, args("moments exact --p 2 --seed=1 --d 3 --d-list 50,400"));
    }
}
