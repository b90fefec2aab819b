//! Command-line front end for the `randtensor` engines.
//!
//! [`run`] takes the arguments after the program name and returns the exit
//! code, the files written and the text report. The binary is a thin wrapper.
//!
//! Exit codes: 0 success, 1 a check failed or a computation failed, 2 bad
//! usage or an argument outside an operation's domain, 3 a resource guard was
//! hit.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::Parser;

pub mod args;
pub mod checks;
mod commands;
pub mod config;

pub use args::Cli;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommandResult {
    pub exit_code: i32,
    pub artifacts: Vec<PathBuf>,
    pub summary: String,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] randtensor::Error),
    #[error("{path}: {err}", path = .0.display(), err = .1)]
    Io(PathBuf, #[source] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Core(e) if e.is_resource_guard() => 3,
            CliError::Core(randtensor::Error::Domain(_)) => 2,
            CliError::Core(_) | CliError::Io(..) => 1,
        }
    }
}

/// What a command produced before it is turned into a [`CommandResult`].
#[derive(Debug, Default)]
pub(crate) struct Output {
    pub text: String,
    pub artifacts: Vec<PathBuf>,
    /// A check reported failure.
    pub failed: bool,
}

impl Output {
    pub fn line(&mut self, s: impl AsRef<str>) {
        self.text.push_str(s.as_ref());
        self.text.push('\n');
    }

    pub fn write_file(&mut self, path: &PathBuf, contents: &[u8]) -> Result<(), CliError> {
        std::fs::write(path, contents).map_err(|e| CliError::Io(path.clone(), e))?;
        let _ = writeln!(self.text, "wrote {}", path.display());
        self.artifacts.push(path.clone());
        Ok(())
    }
}

fn parse(argv: &[String]) -> Result<Cli, CommandResult> {
    let mut full = vec!["randtensor".to_owned()];
    full.extend(argv.iter().cloned());
    Cli::try_parse_from(full).map_err(|e| CommandResult {
        exit_code: if e.use_stderr() { 2 } else { 0 },
        artifacts: vec![],
        summary: e.render().to_string(),
    })
}

fn failure(e: CliError) -> CommandResult {
    CommandResult {
        exit_code: e.exit_code(),
        artifacts: vec![],
        summary: format!("error: {e}\n"),
    }
}

/// Runs one command. `argv` excludes the program name.
pub fn run<S: AsRef<str>>(argv: &[S]) -> CommandResult {
    let mut argv: Vec<String> = argv.iter().map(|s| s.as_ref().to_owned()).collect();
    if let Some(path) = config::config_path(&argv) {
        match config::merge(&argv, path.as_ref()) {
            Ok(merged) => argv = merged,
            Err(e) => return failure(e),
        }
    }
    let cli = match parse(&argv) {
        Ok(cli) => cli,
        Err(r) => return r,
    };
    let result = match cli.threads {
        Some(0) => Err(CliError::Usage("--threads must be at least 1".into())),
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| commands::execute(&cli)),
            Err(e) => Err(CliError::Usage(format!("cannot start {n} threads: {e}"))),
        },
        None => commands::execute(&cli),
    };
    match result {
        Ok(out) => CommandResult {
            exit_code: i32::from(out.failed),
            artifacts: out.artifacts,
            summary: out.text,
        },
        Err(e) => failure(e),
    }
}
