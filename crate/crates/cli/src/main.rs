use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;
use selfless_cli::{run_command, Cli, CliError, Format, RunConfig};
use serde_json::json;

fn fail(e: &CliError) -> ExitCode {
    eprintln!("{}", e.to_json());
    ExitCode::from(e.exit_code() as u8)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match RunConfig::from_args(&cli.global) {
        Ok(c) => c,
        Err(e) => return fail(&e),
    };
    let start = Instant::now();
    let outcome = match run_command(&cli.command, &cfg) {
        Ok(o) => o,
        Err(e) => return fail(&e),
    };
    let diagnostics = cli.global.timing.then(|| {
        json!({
            "elapsed_ms": start.elapsed().as_millis().to_string(),
            "threads": cfg.threads,
            "cache": outcome.cache.map(|c| json!({
                "hits": c.hits,
                "misses": c.misses,
                "corrupt": c.corrupt,
                "stores": c.stores,
                "store_failures": c.store_failures,
            })),
        })
    });
    let text = match cli.global.format {
        Format::Json => outcome.report.to_json(diagnostics),
        Format::Csv => match outcome.report.to_csv() {
            Ok(t) => t,
            Err(e) => return fail(&e),
        },
    };
    let written = match &cli.global.output {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::io(path.display().to_string(), e)),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::io("stdout", e)),
    };
    if let Err(e) = written {
        return fail(&e);
    }
    match outcome.report.truncation {
        Some(t) => fail(&CliError::Core(t)),
        None => ExitCode::SUCCESS,
    }
}
