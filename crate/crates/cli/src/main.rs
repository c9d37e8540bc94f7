//! `resonant`: command-line front end for the resonance solvers.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod args;
mod commands;
mod config;
mod failure;
mod output;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use commands::Ctx;
use config::RunConfig;
use output::{Manifest, Output};

fn prepare(cli: &Cli) -> anyhow::Result<(Command, RunConfig)> {
    if let Command::Replay(r) = &cli.command {
        let manifest = Manifest::load(&r.manifest)?;
        let cmd = Command::from_name(&manifest.command)
            .ok_or_else(|| failure::config_error(format!("manifest names unknown command {:?}", manifest.command)))?;
        return Ok((cmd, manifest.config));
    }
    let mut cfg = match &cli.global.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(seed) = cli.global.seed {
        cfg.seed = seed;
    }
    cli.command.apply(&mut cfg)?;
    let cmd = Command::from_name(&cli.command.name()).expect("every parsed command has a name");
    Ok((cmd, cfg))
}

fn execute(cli: &Cli) -> anyhow::Result<()> {
    if cli.global.threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cli.global.threads)
            .build_global()
            .map_err(|e| anyhow::anyhow!("thread pool: {e}"))?;
    }
    let (cmd, cfg) = prepare(cli)?;
    let name = cmd.name();
    let dir = Output::resolve(cli.global.out.as_deref(), &name.replace(' ', "-"));
    let mut out = Output::create(dir, cli.global.json)?;
    let result = cfg.units.resolve().and_then(|units| {
        let mut ctx = Ctx {
            cfg: &cfg,
            units,
            out: &mut out,
        };
        commands::dispatch(&cmd, &mut ctx)
    });
    out.finish(&name, &cfg, result.as_ref().err())?;
    result
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(()) => ExitCode::from(failure::EXIT_OK as u8),
        Err(e) => {
            eprintln!("resonant: {e:#}");
            ExitCode::from(failure::exit_code(&e) as u8)
        }
    }
}
