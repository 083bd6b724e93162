use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;
use mild_core::cli::{run, thread_pool, Cli, Format};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let started = Instant::now();
    let outcome = thread_pool().and_then(|pool| pool.install(|| run(&cli)));
    let outcome = match outcome {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let json = outcome.json_text();
    if let Some(path) = &cli.json {
        if let Err(e) = std::fs::write(path, &json) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return ExitCode::from(1);
        }
    }
    match cli.format {
        Format::Json => print!("{json}"),
        Format::Text => {
            print!("{}", outcome.text());
            println!("elapsed: {:.3}s", started.elapsed().as_secs_f64());
        }
    }
    ExitCode::from(outcome.exit_code as u8)
}
