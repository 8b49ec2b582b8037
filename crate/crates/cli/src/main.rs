mod args;
mod artifacts;
mod commands;
mod config;

use std::process::ExitCode;

use anyhow::Result;
use clap::Parser;

use args::{Args, Mode};

fn run(args: Args) -> Result<()> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(args.jobs)
        .build_global()?;
    let cfg = config::resolve(args.config.as_deref(), &args.tunables)?;
    match args.mode {
        Mode::Detect => commands::run_detect(cfg, &args.input, &args.out_dir, args.trace),
        Mode::Eval => {
            let table = commands::run_eval(cfg, args.labels.as_deref(), &args.out_dir)?;
            print!("{table}");
            Ok(())
        }
        Mode::Synth => {
            if args.input.len() > 1 {
                anyhow::bail!("synth mode takes at most one corpus spec");
            }
            let req = commands::SynthRequest {
                spec_file: args.input.first().map(|p| p.as_path()),
                count: args.count,
                seed: args.seed,
                sample_rate: args.sample_rate,
            };
            commands::run_synth(&cfg, &req, &args.out_dir)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    match run(Args::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            log::error!("{e:#}");
            ExitCode::FAILURE
        }
    }
}
