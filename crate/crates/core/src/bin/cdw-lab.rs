use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use cdw_lab::config::{build_config, parse_entries, parse_override, Entry};
use cdw_lab::run::{error_line, exit_status, run};
use cdw_lab::{CdwError, Result};

/// Run one charge-density-wave experiment and write its CSV table.
#[derive(Debug, Parser)]
#[command(name = "cdw-lab", version)]
struct Cli {
    /// Config file of `key = value` lines.
    config: PathBuf,

    /// Output CSV path; overrides `output` in the config.
    #[arg(long)]
    output: Option<PathBuf>,

    /// Seed for randomized minimizer restarts.
    #[arg(long)]
    seed: Option<u64>,

    /// Override a config entry, e.g. `--set delta_prime=0`.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
}

fn load(cli: &Cli) -> Result<cdw_lab::config::RunConfig> {
    let text = std::fs::read_to_string(&cli.config)
        .map_err(|e| CdwError::config(0, format!("cannot read {}: {e}", cli.config.display())))?;
    let mut entries = parse_entries(&text)?;
    for s in &cli.set {
        entries.push(parse_override(s)?);
    }
    if let Some(seed) = cli.seed {
        entries.push(Entry {
            line: 0,
            key: "seed".into(),
            value: seed.to_string(),
        });
    }
    let mut cfg = build_config(entries)?;
    if let Some(out) = &cli.output {
        cfg.output = out.clone();
    }
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = load(&cli).and_then(|cfg| run(&cfg));
    match result {
        Ok(summary) => {
            if let Some(note) = summary.note {
                eprintln!("note: {note}");
            }
            eprintln!(
                "{}: wrote {} rows to {}",
                summary.experiment.name(),
                summary.rows,
                summary.path.display()
            );
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("{}", error_line(&e));
            ExitCode::from(exit_status(&e) as u8)
        }
    }
}
