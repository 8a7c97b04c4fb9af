mod args;
mod commands;
mod error;
mod manifest;

use std::time::Instant;

use clap::Parser;

use crate::args::Cli;

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let name = commands::name(&cli.command);
    let start = Instant::now();
    let code = match commands::run(&cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("lifshitz {name}: error: {e}");
            e.exit_code()
        }
    };
    eprintln!(
        "lifshitz {name}: wall time {:.3} s",
        start.elapsed().as_secs_f64()
    );
    std::process::exit(code);
}
