//! Command-line driver for the k-coloring Grover pipeline.

pub mod commands;
pub mod cost;
pub mod error;
pub mod report;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use gkc_core::decompose::Basis;
use gkc_core::OracleMode;

use crate::commands::{InstanceSpec, Outcome, RunOptions};
use crate::error::{CliError, EXIT_INPUT, EXIT_INTERNAL, EXIT_OK};

#[derive(Debug, Parser)]
#[command(name = "gkc", version, about = "Grover search circuits for graph k-coloring")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct InstanceArgs {
    /// Graph file: adjacency matrix (.adj) or edge list (.edg).
    pub graph: PathBuf,
    /// Number of colors.
    #[arg(long)]
    pub k: usize,
    /// Invalid-color handling.
    #[arg(long, default_value = "strict")]
    pub mode: OracleMode,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Directory for QASM, report and histogram files.
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
    /// Print the JSON report instead of the text summary.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build the oracle and report its layout and gate counts.
    Synth {
        #[command(flatten)]
        instance: InstanceArgs,
        /// Target basis for the emitted QASM: native or cx,u3.
        #[arg(long, default_value = "native")]
        basis: Basis,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Assemble the full Grover circuit.
    Grover {
        #[command(flatten)]
        instance: InstanceArgs,
        #[arg(long)]
        iterations: Option<usize>,
        #[arg(long, default_value = "native")]
        basis: Basis,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Lower the Grover circuit to one- and two-qubit gates.
    Lower {
        #[command(flatten)]
        instance: InstanceArgs,
        #[arg(long)]
        iterations: Option<usize>,
        #[arg(long, default_value = "native")]
        basis: Basis,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Lower and route the Grover circuit onto a coupling graph.
    Route {
        #[command(flatten)]
        instance: InstanceArgs,
        #[arg(long)]
        iterations: Option<usize>,
        #[arg(long, default_value = "native")]
        basis: Basis,
        /// Coupling graph file (.cpl).
        #[arg(long)]
        topology: PathBuf,
        /// Seed for routing tie-breaks.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Simulate the Grover circuit and print the output distribution.
    Simulate {
        #[command(flatten)]
        instance: InstanceArgs,
        #[arg(long)]
        iterations: Option<usize>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Full pipeline: build, lower, optionally route, simulate and compare
    /// against brute-force enumeration.
    Run {
        #[command(flatten)]
        instance: InstanceArgs,
        #[arg(long)]
        iterations: Option<usize>,
        #[arg(long)]
        topology: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "native")]
        basis: Basis,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Qubit and gate cost table over complete graphs, as CSV.
    Cost {
        /// Inclusive vertex range, e.g. 2-10.
        #[arg(long, default_value = "2-10")]
        vertices_range: String,
        /// Comma-separated color counts.
        #[arg(long, default_value = "2,3,4,8")]
        k: String,
        #[command(flatten)]
        output: OutputArgs,
    },
}

impl InstanceArgs {
    fn spec(&self) -> InstanceSpec {
        InstanceSpec { graph: self.graph.clone(), k: self.k, mode: self.mode }
    }
}

pub fn execute(command: &Command) -> Result<(Outcome, &OutputArgs), CliError> {
    Ok(match command {
        Command::Synth { instance, basis, output } => (commands::synth(&instance.spec(), *basis)?, output),
        Command::Grover { instance, iterations, basis, output } => {
            (commands::grover(&instance.spec(), *iterations, *basis)?, output)
        }
        Command::Lower { instance, iterations, basis, output } => {
            (commands::lower(&instance.spec(), *iterations, *basis)?, output)
        }
        Command::Route { instance, iterations, basis, topology, seed, output } => {
            (commands::route(&instance.spec(), *iterations, *basis, topology, *seed)?, output)
        }
        Command::Simulate { instance, iterations, output } => {
            (commands::simulate(&instance.spec(), *iterations)?, output)
        }
        Command::Run { instance, iterations, topology, seed, basis, output } => {
            let opts =
                RunOptions { iterations: *iterations, topology: topology.as_deref(), seed: *seed, basis: *basis };
            (commands::run(&instance.spec(), &opts)?, output)
        }
        Command::Cost { vertices_range, k, output } => (commands::cost(vertices_range, k)?, output),
    })
}

fn command_name(command: &Command) -> &'static str {
    match command {
        Command::Synth { .. } => "synth",
        Command::Grover { .. } => "grover",
        Command::Lower { .. } => "lower",
        Command::Route { .. } => "route",
        Command::Simulate { .. } => "simulate",
        Command::Run { .. } => "run",
        Command::Cost { .. } => "cost",
    }
}

/// Writes artifacts and the report into `dir`, returning the paths written.
fn write_outputs(dir: &std::path::Path, name: &str, outcome: &mut Outcome) -> Result<(), CliError> {
    let io = |e: std::io::Error| CliError::Input(format!("cannot write to {}: {e}", dir.display()));
    std::fs::create_dir_all(dir).map_err(io)?;
    let mut files = Vec::new();
    for (file, contents) in &outcome.artifacts {
        let path = dir.join(file);
        std::fs::write(&path, contents).map_err(io)?;
        files.push(path.display().to_string());
    }
    if let Some(serde_json::Value::Object(map)) = &mut outcome.report {
        let path = dir.join(format!("{name}.json"));
        files.push(path.display().to_string());
        map.insert("files".into(), files.into());
        let json = serde_json::to_string_pretty(&outcome.report).expect("report serializes");
        std::fs::write(&path, json + "\n").map_err(io)?;
    }
    Ok(())
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn main_with_args<I, T>(args: I, stdout: &mut impl Write, stderr: &mut impl Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = if e.use_stderr() { write!(stderr, "{e}") } else { write!(stdout, "{e}") };
            return code;
        }
    };
    let result = execute(&cli.command).and_then(|(mut outcome, output)| {
        if let Some(dir) = &output.out_dir {
            write_outputs(dir, command_name(&cli.command), &mut outcome)?;
        } else if let Some(serde_json::Value::Object(map)) = &mut outcome.report {
            map.insert("files".into(), serde_json::Value::Array(vec![]));
        }
        let printed = match (&outcome.report, output.json) {
            (Some(report), true) => serde_json::to_string_pretty(report).expect("report serializes") + "\n",
            _ => outcome.text.clone(),
        };
        stdout.write_all(printed.as_bytes()).map_err(|e| CliError::Internal(e.to_string()))
    });
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            match e.exit_code() {
                0 => EXIT_INTERNAL,
                c => c,
            }
        }
    }
}
