mod args;
mod commands;
mod output;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::Context;
use clap::Parser;
use pwalk_core::finite::ExactConfig;

use args::{Cli, Command, ReplayArgs};
use commands::Report;
use output::RunManifest;

/// Exit 2 for violated preconditions, 1 for runtime and I/O failures.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Runtime(anyhow::Error),
}

impl From<pwalk_core::Error> for CliError {
    fn from(e: pwalk_core::Error) -> Self {
        use pwalk_core::Error::*;
        match e {
            InvalidParameter { .. } | Capacity { .. } | WrongMemory { .. } | InvalidCoupling(_) | DegenerateFit(_) => {
                CliError::Usage(e.to_string())
            }
            NotConverged { .. } | Singular(_) => CliError::Runtime(e.into()),
        }
    }
}

impl From<anyhow::Error> for CliError {
    fn from(e: anyhow::Error) -> Self {
        CliError::Runtime(e)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Runtime(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn dispatch(command: Command) -> Result<(), CliError> {
    match command {
        Command::Replay(r) => replay(&r),
        command => execute(&command, &ExactConfig::from_env()).map(|_| ()),
    }
}

/// Runs, writes every artifact and the manifest, and returns the manifest.
fn execute(command: &Command, exact: &ExactConfig) -> Result<RunManifest, CliError> {
    let started = Instant::now();
    let report = commands::run(command, exact)?;
    let mut manifest = RunManifest::new(command, exact.max_window);
    let sidecar = manifest_path(command);
    if let Command::FigData(a) = command {
        fs::create_dir_all(&a.out).with_context(|| format!("creating {}", a.out.display()))?;
    }
    let Report {
        artifacts,
        provenance,
        notes,
        failure,
    } = report;
    for a in &artifacts {
        output::emit(a.path.as_deref(), &a.bytes, &mut manifest)?;
    }
    manifest.provenance = provenance;
    manifest.notes = notes;
    manifest.finish(started.elapsed());
    output::write_manifest(&manifest, sidecar.as_deref())?;
    match failure {
        Some(msg) => Err(CliError::Runtime(anyhow::anyhow!(msg))),
        None => Ok(manifest),
    }
}

fn manifest_path(command: &Command) -> Option<PathBuf> {
    match command {
        Command::FigData(a) => Some(a.out.join("manifest.json")),
        c => out_of(c).map(output::sidecar_path),
    }
}

fn out_of(command: &Command) -> Option<&Path> {
    match command {
        Command::Simulate(a) => a.output.out.as_deref(),
        Command::Exact(a) => a.output.out.as_deref(),
        Command::Hitting(a) => a.output.out.as_deref(),
        Command::Range(a) => a.output.out.as_deref(),
        Command::Couple(a) => a.output.out.as_deref(),
        Command::CookieCheck(a) => a.output.out.as_deref(),
        Command::Clt(a) => a.output.out.as_deref(),
        Command::Sweep(a) => a.output.out.as_deref(),
        Command::FigData(a) => Some(&a.out),
        Command::Replay(a) => a.out.as_deref(),
    }
}

fn redirect(command: &mut Command, out: Option<PathBuf>) -> Result<(), CliError> {
    let slot = match command {
        Command::Simulate(a) => &mut a.output.out,
        Command::Exact(a) => &mut a.output.out,
        Command::Hitting(a) => &mut a.output.out,
        Command::Range(a) => &mut a.output.out,
        Command::Couple(a) => &mut a.output.out,
        Command::CookieCheck(a) => &mut a.output.out,
        Command::Clt(a) => &mut a.output.out,
        Command::Sweep(a) => &mut a.output.out,
        Command::FigData(a) => {
            a.out = out.ok_or_else(|| CliError::Usage("replaying fig-data needs --out <dir>".into()))?;
            return Ok(());
        }
        Command::Replay(_) => return Err(CliError::Usage("a manifest cannot record a replay".into())),
    };
    *slot = out;
    Ok(())
}

fn replay(r: &ReplayArgs) -> Result<(), CliError> {
    let recorded = output::read_manifest(&r.manifest)?;
    let mut command = recorded.command.clone();
    redirect(&mut command, r.out.clone())?;
    let exact = ExactConfig {
        max_window: recorded.max_window,
        ..ExactConfig::default()
    };
    let rerun = execute(&command, &exact)?;
    if r.verify {
        let expected: Vec<&str> = recorded.outputs.iter().map(|o| o.sha256.as_str()).collect();
        let got: Vec<&str> = rerun.outputs.iter().map(|o| o.sha256.as_str()).collect();
        if expected != got {
            return Err(CliError::Runtime(anyhow::anyhow!(
                "replay output differs from the manifest: expected {expected:?}, got {got:?}"
            )));
        }
        eprintln!("replay verified: {} output(s) byte-identical", got.len());
    }
    Ok(())
}
