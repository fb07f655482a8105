// `!(x > 0)` style guards are deliberate: NaN must fail them.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod args;
mod commands;
mod error;
mod output;

use args::{Cli, Command, FileConfig};
use clap::Parser;
use commands::Context;
use error::{CliError, CliResult};

fn run(cli: Cli) -> CliResult<()> {
    let file = FileConfig::load(cli.common.config.as_deref())?;
    let workers = cli.common.workers.or(file.workers);
    if workers == Some(0) {
        return Err(CliError::usage("--workers must be at least 1"));
    }
    let ctx = Context {
        out: cli.common.out.clone().or_else(|| file.out.clone()),
        format: cli.common.format.or(file.format).unwrap_or_default(),
        seed: cli.common.seed.or(file.seed).unwrap_or(0),
        file,
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.unwrap_or(0))
        .build()
        .map_err(|e| CliError::usage(format!("cannot start worker pool: {e}")))?;
    pool.install(|| match &cli.command {
        Command::Diagnostics(a) => commands::diagnostics(&ctx, a),
        Command::Incidence(a) => commands::incidence(&ctx, a),
        Command::Transfer(a) => commands::transfer(&ctx, a),
        Command::Simulate(a) => commands::simulate_cmd(&ctx, a),
        Command::Bounds(a) => commands::bounds(&ctx, a),
    })
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    if let Err(e) = run(cli) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
