use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, Result};
use clap::{Args, Parser};
use cocompact_cli::{parse_spec, run, Command, Format, Overrides, Report};

/// Cartan projections, word-ball certification and compact-quotient
/// obstructions. Exit status 0 means the analysis completed, whatever the
/// verdict.
#[derive(Parser)]
#[command(name = "cocompact", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Options,
}

#[derive(Args)]
struct Options {
    /// JSON analysis spec (or a case catalog for `obstruction`).
    #[arg(long, global = true)]
    spec: Option<PathBuf>,
    /// Word-ball radius; overrides the spec file.
    #[arg(long, global = true)]
    radius: Option<u32>,
    /// Output directory. Without it the JSON report goes to stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value = "both")]
    format: Format,
    /// Generator validation tolerance; overrides the spec file.
    #[arg(long, global = true)]
    tolerance: Option<f64>,
    /// Seed for sampled points; overrides the spec file.
    #[arg(long, global = true)]
    seed: Option<u64>,
}

fn execute(cli: Cli) -> Result<()> {
    let path = cli.opts.spec.ok_or_else(|| anyhow!("--spec is required"))?;
    let overrides = Overrides { radius: cli.opts.radius, tolerance: cli.opts.tolerance, seed: cli.opts.seed };
    let cfg = parse_spec(&path, &overrides)?;
    let report = run(cli.command, &cfg)?;
    match cli.opts.out {
        Some(dir) => {
            for name in report.write_to(&dir, cli.opts.format)? {
                eprintln!("wrote {}", dir.join(name).display());
            }
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            match cli.opts.format {
                Format::Csv => {
                    for t in &report.tables {
                        Report::write_csv(t, &mut lock)?;
                    }
                }
                _ => lock.write_all(report.json_text().as_bytes())?,
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
