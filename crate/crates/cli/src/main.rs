mod args;
mod commands;
mod error;
mod output;
mod render;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use args::Cli;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    if let Some(w) = cli.global.workers {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(w).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let artifact = match commands::run(&cli.command) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    if let Some(path) = &cli.global.out {
        if let Err(e) = artifact.write(path) {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    }
    let mut stdout = std::io::stdout().lock();
    let printed = if cli.global.json {
        stdout.write_all(artifact.json().as_bytes())
    } else if cli.global.out.is_none() && artifact.svg.is_some() {
        stdout.write_all(artifact.svg.as_deref().unwrap_or_default().as_bytes())
    } else {
        artifact.summary.iter().try_for_each(|l| writeln!(stdout, "{l}"))
    };
    if printed.is_err() {
        return ExitCode::from(1);
    }
    if artifact.failed {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}
