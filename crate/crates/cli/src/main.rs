//! `prompttea` — trace-driven cache scheduling for diffusion-style
//! denoising runs: fit output-difference models, score prompt complexity
//! into per-prompt thresholds, build guidance codebooks, and simulate or
//! compare caching policies over recorded traces.

mod commands;
mod presets;

use clap::Parser;

use crate::commands::Command;

#[derive(Debug, Parser)]
#[command(name = "prompttea", version, about, arg_required_else_help = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

fn main() -> anyhow::Result<()> {
    commands::run(Cli::parse().command)
}
