use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use semiabel::report::{parse_config_with_task, render_json, render_text, run_job, OutputFormat, Task};
use semiabel::Error;

#[derive(Parser)]
#[command(name = "semiabel", version, about = "Elliptic and semi-abelian periods, Weil pairing and 1-motive dimensions")]
struct Cli {
    /// periods, eval, expg, logg, pairing, classify, bounds or verify
    task: String,
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    json: bool,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    tol: Option<f64>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let job = cli.task.parse::<Task>().and_then(|task| {
        let text = std::fs::read_to_string(&cli.config).map_err(|e| Error::schema("", format!("{}: {e}", cli.config.display())))?;
        let mut cfg = parse_config_with_task(&text, Some(task))?;
        if let Some(seed) = cli.seed {
            cfg.seed = seed;
        }
        if let Some(tol) = cli.tol {
            if !(tol > 0.0 && tol.is_finite()) {
                return Err(Error::schema("--tol", "tolerance must be positive"));
            }
            cfg.tol = tol;
        }
        if cli.json {
            cfg.format = OutputFormat::Json;
        }
        Ok(cfg)
    });
    let cfg = match job {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    match run_job(&cfg) {
        Ok(out) => {
            let text = match cfg.format {
                OutputFormat::Json => render_json(&out.document),
                OutputFormat::Text => render_text(&out.document),
            };
            print!("{text}");
            ExitCode::from(if out.passed { 0 } else { 2 })
        }
        Err(e @ Error::InternalInconsistency(_)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
