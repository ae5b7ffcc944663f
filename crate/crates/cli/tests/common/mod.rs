//! Running the binary and comparing against stored outputs.
#![allow(dead_code)]

use std::path::PathBuf;
use std::process::Command;

pub struct Run {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Run {
    /// Value of the first `KEY value` line with this key.
    pub fn value(&self, key: &str) -> Option<&str> {
        self.stdout.lines().find_map(|l| l.split_once(' ').filter(|(k, _)| *k == key).map(|(_, v)| v))
    }

    pub fn values(&self, key: &str) -> Vec<&str> {
        self.stdout.lines().filter_map(|l| l.split_once(' ').filter(|(k, _)| *k == key).map(|(_, v)| v)).collect()
    }
}

pub fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name).display().to_string()
}

pub fn run_with_env(args: &[&str], env: &[(&str, &str)]) -> Run {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_latshadow"));
    cmd.args(args).env_remove("LATSHADOW_TRUNCATION");
    for (k, v) in env {
        cmd.env(k, v);
    }
    let out = cmd.output().expect("spawn latshadow");
    Run {
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
        code: out.status.code().unwrap_or(-1),
    }
}

pub fn run(args: &[&str]) -> Run {
    run_with_env(args, &[])
}

fn golden_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(format!("{name}.txt"))
}

/// Compares `actual` with `tests/golden/<name>.txt`. With `LATSHADOW_BLESS=1`
/// the file is rewritten instead.
pub fn matches_golden(name: &str, actual: &str) -> Result<(), String> {
    let path = golden_path(name);
    if std::env::var_os("LATSHADOW_BLESS").is_some() {
        std::fs::write(&path, actual).map_err(|e| e.to_string())?;
        return Ok(());
    }
    let want = std::fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
    if want == actual {
        return Ok(());
    }
    let first = want.lines().zip(actual.lines()).position(|(a, b)| a != b);
    Err(match first {
        Some(i) => format!("{name}: line {} differs: want `{}`, got `{}`", i + 1, want.lines().nth(i).unwrap(), actual.lines().nth(i).unwrap()),
        None => format!("{name}: want {} lines, got {}", want.lines().count(), actual.lines().count()),
    })
}

pub fn assert_golden(name: &str, actual: &str) {
    if let Err(e) = matches_golden(name, actual) {
        panic!("{e}");
    }
}
