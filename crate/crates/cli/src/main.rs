mod args;
mod commands;
mod config;
mod error;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use args::{Cli, Command};
use commands::Globals;
use config::RunConfig;
use error::{CliError, CliResult};

fn run(cli: Cli) -> CliResult<()> {
    let file = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(cmd) = &file.command {
        if cmd != cli.command.name() {
            return Err(CliError::Usage(format!(
                "config was written for '{cmd}', not '{}'",
                cli.command.name()
            )));
        }
    }
    let globals = Globals::new(cli.seed, cli.threads, file);
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = globals.threads {
        if n == 0 {
            return Err(CliError::Usage("--threads must be >= 1".into()));
        }
        pool = pool.num_threads(n);
    }
    let pool = pool
        .build()
        .map_err(|e| CliError::Core(wipeplan::Error::Invariant(format!("thread pool: {e}"))))?;
    pool.install(|| match cli.command {
        Command::GenObject(a) => commands::gen_object(&globals, a),
        Command::GenDataset(a) => commands::gen_dataset(&globals, a),
        Command::Plan(a) => commands::plan_cmd(&globals, a),
        Command::Evaluate(a) => commands::evaluate_cmd(&globals, a),
        Command::Benchmark(a) => commands::benchmark_cmd(&globals, a),
        Command::F1(a) => commands::f1_cmd(&globals, a),
    })
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
