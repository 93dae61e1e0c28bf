use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use num_rational::Rational64;
use ultralip::generate::Profile;
use ultralip::sampling::Window;
use ultralip::FieldDescriptor;
use ultralip_cli::{execute, generate, parse_generate_spec, parse_rational, parse_window, render, Command, GenerateSpec, Options};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Cmd {
    ExtendFinite,
    ExtendCell,
    ExtendGraphs,
    Glue,
    Skeleton,
    Verify,
    Generate,
}

impl From<Cmd> for Command {
    fn from(c: Cmd) -> Self {
        match c {
            Cmd::ExtendFinite => Command::ExtendFinite,
            Cmd::ExtendCell => Command::ExtendCell,
            Cmd::ExtendGraphs => Command::ExtendGraphs,
            Cmd::Glue => Command::Glue,
            Cmd::Skeleton => Command::Skeleton,
            Cmd::Verify => Command::Verify,
            Cmd::Generate => Command::Generate,
        }
    }
}

/// Exact ultrametric Lipschitz extension: build, verify, generate.
#[derive(Parser, Debug)]
#[command(name = "ultralip", version)]
struct Cli {
    command: Cmd,
    /// instance JSON (for `generate`: optional {"profile", "size", "field"})
    #[arg(long)]
    input: Option<PathBuf>,
    /// report or instance destination; stdout when absent
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// pseudo-random sample points per radius scale
    #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u64).range(1..))]
    samples: u64,
    /// exponent window `lo,hi`
    #[arg(long, default_value = "-4,4", value_parser = parse_window, allow_hyphen_values = true)]
    window: Window,
    /// run reduce → extend → restore with |ε| = Θ(−q)
    #[arg(long, value_parser = parse_rational, allow_hyphen_values = true)]
    epsilon: Option<Rational64>,
    /// generate: finite-line | finite-plane | finite-nd | cells-line | graphs
    #[arg(long)]
    profile: Option<String>,
    /// generate: number of points or cells
    #[arg(long)]
    size: Option<usize>,
    /// generate: t-adic | puiseux | p-adic:P
    #[arg(long)]
    field: Option<String>,
}

fn field_flag(s: &str) -> Result<FieldDescriptor, String> {
    match s {
        "t-adic" => Ok(FieldDescriptor::TAdic),
        "puiseux" => Ok(FieldDescriptor::Puiseux),
        _ => match s.strip_prefix("p-adic:").and_then(|p| p.parse().ok()) {
            Some(p) => FieldDescriptor::p_adic(p).map_err(|e| e.to_string()),
            None => Err(format!("unknown field `{s}`")),
        },
    }
}

fn run(cli: Cli) -> Result<bool, String> {
    let opts = Options {
        seed: cli.seed,
        samples: cli.samples as usize,
        window: cli.window,
        epsilon: cli.epsilon,
    };
    let input = match &cli.input {
        Some(p) => Some(std::fs::read(p).map_err(|e| format!("reading {}: {e}", p.display()))?),
        None => None,
    };
    let (text, passed) = match Command::from(cli.command) {
        Command::Generate => {
            let mut spec = GenerateSpec {
                profile: Profile::FiniteLine,
                size: 6,
                field: FieldDescriptor::TAdic,
            };
            if let Some(bytes) = &input {
                spec = parse_generate_spec(bytes, spec).map_err(|e| e.to_string())?;
            }
            if let Some(p) = &cli.profile {
                spec.profile = p.parse().map_err(|e: ultralip::Error| e.to_string())?;
            }
            if let Some(s) = cli.size {
                spec.size = s;
            }
            if let Some(f) = &cli.field {
                spec.field = field_flag(f)?;
            }
            (generate(&spec, &opts).map_err(|e| e.to_string())?, true)
        }
        cmd => {
            let bytes = input.ok_or("--input is required")?;
            let report = execute(cmd, &bytes, &opts).map_err(|e| e.to_string())?;
            (render(&report), report.passed)
        }
    };
    match &cli.output {
        Some(p) => std::fs::write(p, text).map_err(|e| format!("writing {}: {e}", p.display()))?,
        None => print!("{text}"),
    }
    Ok(passed)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("ultralip: verification failed");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("ultralip: {e}");
            ExitCode::from(2)
        }
    }
}
