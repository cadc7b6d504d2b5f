use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use dirac_core::cli::{emit_report, run_checkfile, run_example_suite, Format, RunReport};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum OutFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Suite {
    #[value(name = "paper-examples")]
    Examples,
}

/// Check Dirac, Poisson, algebroid and groupoid identities exactly.
#[derive(Debug, Parser)]
#[command(name = "verify", version)]
struct Args {
    /// Check file to run.
    file: Option<PathBuf>,
    /// Output format.
    #[arg(long, value_enum, default_value = "text")]
    format: OutFormat,
    /// Run a built-in suite (after the file, if one is given).
    #[arg(long, value_enum)]
    suite: Option<Suite>,
    /// Print per-check timings (text format only).
    #[arg(long)]
    timings: bool,
}

fn main() -> ExitCode {
    let args = Args::parse();
    if args.file.is_none() && args.suite.is_none() {
        eprintln!("verify: nothing to do; pass a check file or --suite paper-examples");
        return ExitCode::from(2);
    }
    let mut report = RunReport::default();
    if let Some(path) = &args.file {
        match run_checkfile(path) {
            Ok(r) => report.extend(r),
            Err(e) => {
                eprintln!("verify: {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
    }
    if let Some(Suite::Examples) = args.suite {
        report.extend(run_example_suite());
    }
    let format = match args.format {
        OutFormat::Text => Format::Text,
        OutFormat::Json => Format::Json,
    };
    let out = emit_report(&report, format, args.timings);
    let mut stdout = std::io::stdout().lock();
    if stdout.write_all(out.as_bytes()).and_then(|()| stdout.flush()).is_err() {
        return ExitCode::from(2);
    }
    ExitCode::from(report.exit_code() as u8)
}
