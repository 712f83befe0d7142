use std::process::ExitCode;

use anyhow::Context;
use clap::Parser;
use siegel_cli::args::Cli;
use siegel_cli::{run, Failure, Outcome};

fn write_files(outcome: &Outcome) -> anyhow::Result<()> {
    for (path, content) in &outcome.files {
        if let Some(dir) = path.parent() {
            std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        }
        std::fs::write(path, content).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // Usage errors are malformed input; exit code 2 means "not a self-map".
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(&cli).and_then(|o| write_files(&o).map(|()| o)) {
        Ok(outcome) => {
            print!("{}", outcome.stdout);
            ExitCode::from(outcome.code as u8)
        }
        Err(e) => {
            let code = e.downcast_ref::<Failure>().map_or(1, |f| f.code);
            eprintln!("error: {e:#}");
            ExitCode::from(code as u8)
        }
    }
}
