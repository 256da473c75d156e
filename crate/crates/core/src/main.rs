use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use singtool::commands::Command;
use singtool::config::RunConfig;
use singtool::{Error, Result};

#[derive(Parser)]
#[command(
    name = "singtool",
    version,
    about = "Verification harness for Riesz and Beurling transforms on periodic grids",
    after_help = "Any configuration key can be overridden as `--key value` or `--key=value`; \
                  dashes and underscores are interchangeable. SINGTOOL_OUT overrides the output directory."
)]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(clap::Args)]
struct Common {
    /// Flat `key = value` configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Also write SVG plots.
    #[arg(long)]
    plots: bool,
    /// `--key value` overrides.
    #[arg(trailing_var_arg = true, allow_hyphen_values = true, num_args = 0..)]
    overrides: Vec<String>,
}

#[derive(Subcommand)]
enum Sub {
    /// Beurling transform of the unit disc against its closed form.
    VerifyBeurlingIdentity(Common),
    /// Maximal Beurling truncations against the maximal function of Bf.
    VerifyCotlar(Common),
    /// Maximal Riesz truncations against the Riesz transform in L^p and pointwise.
    #[command(name = "verify-theorem1")]
    MaximalRiesz(Common),
    /// Dipole sweep: weak-L1 growth of the maximal Riesz transform.
    RunCounterexample(Common),
    /// The auxiliary field h and the sphere potential p.
    VerifyPotentials(Common),
    /// Every check in turn.
    All(Common),
}

fn build_config(common: &Common) -> Result<RunConfig> {
    let mut cfg = match &common.config {
        Some(path) => RunConfig::from_file(path)?,
        None => RunConfig::default(),
    };
    let mut args = common.overrides.iter();
    while let Some(arg) = args.next() {
        if arg == "--plots" {
            cfg.plots = true;
            continue;
        }
        let Some(stripped) = arg.strip_prefix("--") else {
            return Err(Error::Config(format!("unexpected argument `{arg}`")));
        };
        let (key, value) = match stripped.split_once('=') {
            Some((k, v)) => (k.to_string(), v.to_string()),
            None => {
                let value = args
                    .next()
                    .ok_or_else(|| Error::Config(format!("missing value for --{stripped}")))?;
                (stripped.to_string(), value.clone())
            }
        };
        if key == "config" {
            return Err(Error::Config("--config must precede the overrides".into()));
        }
        cfg.set(&key, &value)?;
    }
    if common.plots {
        cfg.plots = true;
    }
    cfg.finish()
}

fn run(sub: Sub) -> Result<bool> {
    let (commands, common): (Vec<Command>, Common) = match sub {
        Sub::VerifyBeurlingIdentity(c) => (vec![Command::BeurlingIdentity], c),
        Sub::VerifyCotlar(c) => (vec![Command::Cotlar], c),
        Sub::MaximalRiesz(c) => (vec![Command::MaximalRiesz], c),
        Sub::RunCounterexample(c) => (vec![Command::Counterexample], c),
        Sub::VerifyPotentials(c) => (vec![Command::Potentials], c),
        Sub::All(c) => (Command::ALL.to_vec(), c),
    };
    let cfg = build_config(&common)?;
    let mut passed = true;
    for command in commands {
        println!("== {}", command.name());
        let report = command.run(&cfg)?;
        for check in &report.checks {
            println!("{}", check.line());
        }
        for note in &report.notes {
            println!("note: {note}");
        }
        for path in report.write(&cfg.output_dir, cfg.plots)? {
            println!("wrote {}", path.display());
        }
        passed &= report.passed();
    }
    Ok(passed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_configuration() { 2 } else { 1 })
        }
    }
}
