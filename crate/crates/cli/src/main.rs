use std::io::{IsTerminal, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use coarsecat::coarse_homotopy::DEFAULT_SEARCH_CAP;
use coarsecat::commands::{run, Options, COMMANDS, DEFAULT_TEST_CAP};
use coarsecat::document::DEFAULT_MAX_CARRIER;
use coarsecat::limits::Side;

/// Computations on finite generalized bornological coarse spaces.
///
/// Reads a JSON document from --input or standard input and prints a JSON
/// report. Exit status: 0 computed/true, 1 computed/false, 2 error.
#[derive(Parser, Debug)]
#[command(name = "coarsecat", version, after_help = commands_help())]
struct Cli {
    /// Operation to run.
    command: String,
    /// Document file; standard input is used when omitted and not a terminal.
    #[arg(long, short)]
    input: Option<PathBuf>,
    /// Space argument (repeatable).
    #[arg(long = "space")]
    spaces: Vec<String>,
    /// Map argument (repeatable).
    #[arg(long = "map")]
    maps: Vec<String>,
    /// Diagram to operate on.
    #[arg(long)]
    diagram: Option<String>,
    /// Point set, as `a,b,c` or a JSON array (repeatable).
    #[arg(long = "set")]
    sets: Vec<String>,
    #[arg(long, default_value = "limit", value_parser = ["limit", "colimit"])]
    side: String,
    /// Bundled symbolic diagram.
    #[arg(long, value_parser = ["exa_N", "ex_PO"])]
    fixture: Option<String>,
    /// Largest oracle test object.
    #[arg(long, default_value_t = DEFAULT_TEST_CAP)]
    test_cap: usize,
    /// Largest carrier for exhaustive searches.
    #[arg(long, default_value_t = DEFAULT_SEARCH_CAP)]
    search_cap: usize,
    /// Number of mutated candidates the oracle must reject.
    #[arg(long, default_value_t = 0)]
    mutants: usize,
    /// Seed for sampling mutants.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn commands_help() -> String {
    format!(
        "Commands: {}\n\nEnvironment: COARSECAT_MAX_CARRIER overrides the {DEFAULT_MAX_CARRIER}-point carrier cap.",
        COMMANDS.join(", ")
    )
}

fn fail(message: &str) -> ExitCode {
    eprintln!("coarsecat: {message}");
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let max_carrier = match std::env::var("COARSECAT_MAX_CARRIER") {
        Ok(v) => match v.parse() {
            Ok(n) => n,
            Err(_) => return fail(&format!("COARSECAT_MAX_CARRIER must be a number, got `{v}`")),
        },
        Err(_) => DEFAULT_MAX_CARRIER,
    };
    let input = match &cli.input {
        Some(path) => match std::fs::read_to_string(path) {
            Ok(text) => Some(text),
            Err(e) => return fail(&format!("cannot read {}: {e}", path.display())),
        },
        None if !std::io::stdin().is_terminal() => {
            let mut text = String::new();
            if let Err(e) = std::io::stdin().read_to_string(&mut text) {
                return fail(&format!("cannot read standard input: {e}"));
            }
            Some(text).filter(|t| !t.trim().is_empty())
        }
        None => None,
    };
    let opts = Options {
        spaces: cli.spaces,
        maps: cli.maps,
        diagram: cli.diagram,
        sets: cli.sets,
        side: cli.side.parse::<Side>().expect("validated by clap"),
        fixture: cli.fixture,
        test_cap: cli.test_cap,
        search_cap: cli.search_cap,
        mutants: cli.mutants,
        seed: cli.seed,
        max_carrier,
    };
    let report = run(&cli.command, input.as_deref(), &opts);
    let mut out = std::io::stdout().lock();
    if let Err(e) = writeln!(out, "{}", report.to_pretty()) {
        if e.kind() != std::io::ErrorKind::BrokenPipe {
            return fail(&format!("cannot write report: {e}"));
        }
    }
    ExitCode::from(report.exit as u8)
}
