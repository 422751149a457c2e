use clap::Parser;
use flexbie_cli::{run, CliError, RunConfig, Scenario};
use std::path::PathBuf;
use std::process::ExitCode;

/// Flexural wave scattering by boundary integral equations.
#[derive(Parser, Debug)]
#[command(name = "flexbie", version)]
struct Args {
    scenario: Scenario,
    /// JSON run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Output directory (default: config output.dir, then ".").
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads (default: FLEXBIE_THREADS, then all cores).
    #[arg(long)]
    threads: Option<usize>,
}

fn threads(arg: Option<usize>) -> Result<Option<usize>, CliError> {
    if arg.is_some() {
        return Ok(arg);
    }
    match std::env::var("FLEXBIE_THREADS") {
        Ok(v) => v.trim().parse().map(Some).map_err(|_| CliError::Config(format!("FLEXBIE_THREADS={v} is not a thread count"))),
        Err(_) => Ok(None),
    }
}

fn main_inner(args: Args) -> Result<(), CliError> {
    let config = RunConfig::load(&args.config)?;
    if let Some(n) = threads(args.threads)? {
        if n == 0 {
            return Err(CliError::Config("thread count must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| CliError::Config(e.to_string()))?;
    }
    let out = args.out.or_else(|| config.output.dir.clone().map(PathBuf::from)).unwrap_or_else(|| PathBuf::from("."));
    let outcome = run(args.scenario, &config, &out)?;
    for w in &outcome.warnings {
        eprintln!("warning: {w}");
    }
    for f in &outcome.files {
        println!("{}", f.display());
    }
    if outcome.failed_checks > 0 {
        return Err(CliError::Checks(outcome.failed_checks));
    }
    Ok(())
}

fn main() -> ExitCode {
    match main_inner(Args::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("flexbie: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
