//! The `relgor` command line: file formats, the atlas cache, the JSON
//! report and the built-in regression suites.

pub mod args;
pub mod cache;
mod commands;
pub mod input;
pub mod report;
mod suites;

use std::ffi::OsString;
use std::sync::Arc;
use std::time::Instant;

use clap::error::ErrorKind;
use clap::Parser;
use relgor::contexts::{ContextBounds, ContextError};
use relgor::gorenstein::{ExhaustiveBounds, GorensteinError};
use relgor::homcalc::{Atlas, HomcalcError};
use relgor::quiver::Algebra;
use relgor::rep::RepError;
use relgor::subcat::SubcatError;
use thiserror::Error;

use args::{Cli, Command, Global};
use cache::{obtain_atlas, AtlasCache, CacheEvent};
use report::{recheck_report, Report, Status};

pub const EXIT_INPUT: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("computation failed: {0}")]
    Engine(String),
}

macro_rules! engine_error {
    ($($t:ty),*) => {$(
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::Engine(e.to_string())
            }
        }
    )*};
}
engine_error!(GorensteinError, ContextError, HomcalcError, SubcatError, RepError);

/// Exit code and the two output streams of one invocation.
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Outcome {
                    code: 0,
                    stdout: text,
                    stderr: String::new(),
                },
                _ => Outcome {
                    code: EXIT_INPUT,
                    stdout: String::new(),
                    stderr: text,
                },
            };
        }
    };
    let start = Instant::now();
    match execute(&cli) {
        Ok(mut report) => {
            if cli.global.recheck {
                // Recheck what a reader of the JSON would see.
                let parsed: Report = serde_json::from_str(&report.to_json()).expect("report round-trips");
                report.recheck = Some(recheck_report(&parsed));
            }
            report.timings.insert("total".into(), millis(start));
            let mut stderr = String::new();
            for line in &report.log {
                stderr.push_str(&format!("{line}\n"));
            }
            for w in &report.warnings {
                stderr.push_str(&format!("warning: {w}\n"));
            }
            if cli.global.table {
                stderr.push_str(&report.table());
            }
            Outcome {
                code: report.exit_code(),
                stdout: report.to_json() + "\n",
                stderr,
            }
        }
        Err(e) => Outcome {
            code: EXIT_INPUT,
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}

pub(crate) fn millis(since: Instant) -> f64 {
    (since.elapsed().as_secs_f64() * 1e6).round() / 1e3
}

pub fn execute(cli: &Cli) -> Result<Report, CliError> {
    let mut report = Report::new(cli.command.name());
    match &cli.command {
        Command::Recheck { report: path } => {
            let path = path.display().to_string();
            let src = input::Source::read(&path)?;
            let saved: Report = serde_json::from_str(&src.text)
                .map_err(|e| CliError::Input(format!("{path}:{}:{}: {e}", e.line(), e.column())))?;
            let summary = recheck_report(&saved);
            report.algebra_hash = saved.algebra_hash.clone();
            let hash = saved.algebra_hash.clone();
            let value = serde_json::to_value(&summary).expect("summary serializes");
            report.push(
                &hash,
                format!("all {} certificates of {path} re-verify", summary.checked),
                Status::of_bool(summary.failed.is_empty()),
                value,
                Vec::new(),
            );
        }
        Command::VerifyPaper { suite } => suites::run(*suite, &cli.global, &mut report)?,
        command => {
            let t = Instant::now();
            let session = Session::open(&cli.global, &mut report)?;
            report.timings.insert("atlas".into(), millis(t));
            let t = Instant::now();
            commands::run(command, &session, &mut report)?;
            report.timings.insert("command".into(), millis(t));
        }
    }
    Ok(report)
}

/// The algebra, its atlas and the global settings of one invocation.
pub(crate) struct Session<'g> {
    pub global: &'g Global,
    pub algebra: Arc<Algebra>,
    pub atlas: Atlas,
    pub hash: String,
}

impl<'g> Session<'g> {
    fn open(global: &'g Global, report: &mut Report) -> Result<Session<'g>, CliError> {
        let arg = global
            .algebra
            .as_deref()
            .ok_or_else(|| CliError::Input("no algebra given; use --algebra FILE (or builtin:A3)".into()))?;
        let loaded = input::load_algebra(arg, global.p)?;
        let cache = AtlasCache::from_flag(global.cache.as_deref());
        let (atlas, event) = obtain_atlas(&loaded.algebra, cache.as_ref(), &mut report.warnings)?;
        if let Some(c) = &cache {
            let path = c.path_for(&loaded.algebra);
            report.log.push(match event {
                CacheEvent::Hit => format!("cache hit: {}", path.display()),
                CacheEvent::Stored => format!("cache store: {}", path.display()),
                CacheEvent::Uncached => "cache unavailable".to_string(),
            });
        }
        if !atlas.is_complete() {
            report
                .warnings
                .push("the atlas is incomplete (the algebra may be of infinite representation type)".into());
        }
        let hash = report.algebra(&loaded.algebra);
        Ok(Session {
            global,
            algebra: loaded.algebra,
            atlas,
            hash,
        })
    }

    pub fn context_bounds(&self) -> ContextBounds {
        ContextBounds {
            mult: self.global.mult_bound,
            ..ContextBounds::default()
        }
    }

    pub fn exhaustive_bounds(&self) -> ExhaustiveBounds {
        ExhaustiveBounds {
            mult: self.global.mult_bound,
            depth: self.global.depth_bound,
        }
    }
}
