use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use qhe_core::engine::GeneratorVariant;
use qhe_core::io::{error_json, error_status, load_config, run, Command};

#[derive(Parser)]
#[command(name = "qhe", version, about = "Four-level quantum heat engine: steady states, dynamics and ergotropy")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,

    /// JSON run configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Override a config value by dotted path, e.g. `params.p_h=0.4`. Repeatable; wins over the file.
    #[arg(long = "set", value_name = "KEY=VALUE", global = true)]
    set: Vec<String>,

    /// Output directory for CSV, SVG and manifest files.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[arg(long, value_enum, global = true)]
    variant: Option<Variant>,
}

#[derive(Subcommand, Clone, Copy)]
enum Cmd {
    /// Steady state with ergotropy, flux, work and power (JSON on stdout).
    Steady,
    /// Integrate from the configured initial state and write the trajectory CSV.
    Evolve,
    /// Scan one parameter; writes the sweep CSV and the crossovers JSON.
    Sweep,
    /// Produce the canonical figure panels.
    Figures,
    /// Run the invariant and oracle suites.
    Verify,
}

#[derive(ValueEnum, Clone, Copy)]
#[value(rename_all = "snake_case")]
enum Variant {
    TraceConserving,
    Verbatim,
}

impl From<Variant> for GeneratorVariant {
    fn from(v: Variant) -> Self {
        match v {
            Variant::TraceConserving => GeneratorVariant::TraceConserving,
            Variant::Verbatim => GeneratorVariant::Verbatim,
        }
    }
}

impl From<Cmd> for Command {
    fn from(c: Cmd) -> Self {
        match c {
            Cmd::Steady => Command::Steady,
            Cmd::Evolve => Command::Evolve,
            Cmd::Sweep => Command::Sweep,
            Cmd::Figures => Command::Figures,
            Cmd::Verify => Command::Verify,
        }
    }
}

fn print_json(v: &serde_json::Value) {
    // A closed pipe on stdout is not worth a panic.
    let _ = writeln!(std::io::stdout(), "{}", serde_json::to_string_pretty(v).expect("JSON values always serialize"));
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = load_config(cli.config.as_deref(), &cli.set, cli.variant.map(Into::into))
        .and_then(|cfg| run(cli.command.into(), cfg, cli.out.as_deref()));
    match result {
        Ok(outcome) => {
            for w in &outcome.warnings {
                eprintln!("{w}");
            }
            print_json(&outcome.stdout);
            ExitCode::from(outcome.status.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            print_json(&error_json(&e));
            ExitCode::from(error_status(&e).exit_code() as u8)
        }
    }
}
