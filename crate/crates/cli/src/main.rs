//! `persona`: validate bundles, draw samples, render WAV files, print reports
//! and run the control service.
//!
//! Exit codes: 0 success, 1 validation failure, 2 usage error, 3 I/O error.

mod commands;

use std::net::SocketAddr;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "persona", version, about = "Vocal persona bundles from the command line")]
struct Cli {
    /// Bundle file (.persona).
    #[arg(long, global = true, env = "PERSONA_BUNDLE")]
    bundle: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Steering {
    /// Persona id.
    #[arg(long)]
    persona: String,

    /// Macro setting, repeatable.
    #[arg(long = "macro", value_name = "NAME=X", value_parser = parse_macro)]
    macros: Vec<(String, f64)>,

    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Load and check a bundle; violations are printed one per line.
    Validate,
    /// Draw feature values as CSV, one row per seed starting at --seed.
    Sample {
        #[command(flatten)]
        steering: Steering,
        #[arg(short = 'n', long = "count", default_value_t = 1)]
        n: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Render text to a WAV file and print the realized features.
    Synth {
        #[command(flatten)]
        steering: Steering,
        #[arg(long)]
        text: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Pairwise overlap matrix and macro sweeps as CSV.
    Report {
        /// Persona the sweeps start from; the bundle's first persona by default.
        #[arg(long)]
        persona: Option<String>,
        /// Directory for overlap.csv and sweep.csv instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the HTTP control service.
    Serve {
        #[arg(long, default_value = "127.0.0.1:8080")]
        addr: SocketAddr,
    },
    /// Write the built-in starter bundle.
    Starter {
        #[arg(long)]
        out: PathBuf,
    },
}

fn parse_macro(s: &str) -> Result<(String, f64), String> {
    let (name, x) = s.split_once('=').ok_or_else(|| format!("expected NAME=X, got {s:?}"))?;
    if name.is_empty() {
        return Err(format!("missing macro name in {s:?}"));
    }
    let x: f64 = x.trim().parse().map_err(|_| format!("{x:?} is not a number"))?;
    Ok((name.trim().to_string(), x))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Validate => commands::validate(cli.bundle.as_deref()),
        Command::Sample { steering, n, out } => commands::sample(
            cli.bundle.as_deref(),
            &steering.persona,
            &steering.macros,
            steering.seed,
            n,
            out.as_deref(),
        ),
        Command::Synth { steering, text, out } => commands::synth(
            cli.bundle.as_deref(),
            &steering.persona,
            &steering.macros,
            steering.seed,
            &text,
            &out,
        ),
        Command::Report { persona, out } => commands::report(cli.bundle.as_deref(), persona.as_deref(), out.as_deref()),
        Command::Serve { addr } => commands::serve(cli.bundle.as_deref(), addr),
        Command::Starter { out } => commands::starter(&out),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
