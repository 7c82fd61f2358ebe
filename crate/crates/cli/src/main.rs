//! `motint` command-line interface. Every subcommand reads one JSON
//! document (stdin or `--input`) and writes one JSON document.
//!
//! Exit codes: 0 success, 1 domain error, 2 malformed input or I/O error.

mod commands;
mod schema;

use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use commands::{error_kind, CResult, CliError};

#[derive(Parser)]
#[command(name = "motint", version, about = "Exact invariants of semilinear sets and Igusa integrals")]
struct Cli {
    /// Input document (defaults to stdin).
    #[arg(long, global = true)]
    input: Option<PathBuf>,
    /// Output file (defaults to stdout).
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Both Euler characteristics of a set.
    Euler,
    /// Lebesgue volume of a bounded set.
    Volume,
    /// Piecewise-polynomial fibre volume over one coordinate.
    VolumeParam {
        #[arg(long)]
        param: usize,
    },
    /// Number of points of the set in (1/r)Z^n.
    Count {
        #[arg(long, default_value_t = 1)]
        r: u64,
    },
    /// Decide whether two singleton classes coincide.
    SingletonEq {
        /// Comma-separated rationals.
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
    },
    /// Check a piecewise integral affine bijection between two sets.
    VerifyMorphism,
    /// Closed form of the lattice sum of a polyhedral datum.
    Ev {
        #[arg(long, default_value_t = 1)]
        r: u64,
        /// Print the truncated series (by enumeration) instead.
        #[arg(long)]
        series: Option<i64>,
    },
    /// Series expansion of a rational function document.
    Expand {
        #[arg(long)]
        order: i64,
    },
    /// Retraction of a motivic class to a polynomial in q.
    Retract {
        #[arg(long, default_value = "E")]
        mode: String,
        #[arg(long)]
        n: usize,
    },
    /// Point count of a bounded motivic class over a local field.
    Specialize {
        #[arg(long)]
        q: u64,
        #[arg(long, default_value_t = 1)]
        r: u64,
    },
    /// Print the class [1]_1 - [RV^{>0}]_1 - [1]_0.
    IspDifference,
    #[command(subcommand)]
    Igusa(IgusaCommand),
    /// Run seeded internal consistency checks.
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Subcommand)]
enum IgusaCommand {
    /// Rational function of an Igusa datum.
    Eval {
        /// Datum file (alternative to --input).
        #[arg(long)]
        data: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        r: u64,
    },
    /// Datum for a monomial with the given exponents.
    Monomial {
        /// Comma-separated exponents, e.g. "2,1".
        #[arg(long)]
        exps: String,
    },
    /// Datum for a product of linear forms, e.g. "1,0;1,1".
    LinearForms {
        #[arg(long, allow_hyphen_values = true)]
        forms: String,
    },
    /// Count-based p-adic series of a polynomial.
    Oracle {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 6)]
        max_m: usize,
    },
    /// Compare a datum (with its "poly") against the oracle.
    Verify {
        #[arg(long)]
        data: Option<PathBuf>,
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 6)]
        max_m: usize,
    },
}

fn read_doc(path: Option<&PathBuf>) -> CResult<Value> {
    let text = match path {
        Some(p) => fs::read_to_string(p).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?,
        None => {
            let mut s = String::new();
            io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| CliError::Io(format!("stdin: {e}")))?;
            s
        }
    };
    Ok(schema::parse_document(&text)?)
}

fn run(cli: &Cli) -> CResult<Value> {
    let input = cli.input.as_ref();
    match &cli.command {
        Command::Euler => commands::euler(&read_doc(input)?),
        Command::Volume => commands::volume_cmd(&read_doc(input)?),
        Command::VolumeParam { param } => commands::volume_param_cmd(&read_doc(input)?, *param),
        Command::Count { r } => commands::count(&read_doc(input)?, *r),
        Command::SingletonEq { a, b } => commands::singleton_eq(a, b),
        Command::VerifyMorphism => commands::verify_morphism_cmd(&read_doc(input)?),
        Command::Ev { r, series: None } => commands::ev_cmd(&read_doc(input)?, *r),
        Command::Ev { r, series: Some(k) } => commands::ev_series_cmd(&read_doc(input)?, *r, *k),
        Command::Expand { order } => commands::expand(&read_doc(input)?, *order),
        Command::Retract { mode, n } => commands::retract(&read_doc(input)?, mode, *n),
        Command::Specialize { q, r } => commands::specialize(&read_doc(input)?, *q, *r),
        Command::IspDifference => commands::isp_difference_cmd(),
        Command::Igusa(sub) => match sub {
            IgusaCommand::Eval { data, r } => commands::igusa_eval(&read_doc(data.as_ref().or(input))?, *r),
            IgusaCommand::Monomial { exps } => commands::igusa_monomial(exps),
            IgusaCommand::LinearForms { forms } => commands::igusa_linear_forms(forms),
            IgusaCommand::Oracle { p, max_m } => commands::igusa_oracle(&read_doc(input)?, *p, *max_m),
            IgusaCommand::Verify { data, p, max_m } => {
                commands::igusa_verify(&read_doc(data.as_ref().or(input))?, *p, *max_m)
            }
        },
        Command::Selftest { seed } => commands::selftest(*seed),
    }
}

fn write_doc(path: Option<&PathBuf>, v: &Value) -> io::Result<()> {
    let mut text = serde_json::to_string_pretty(v).expect("values serialise");
    text.push('\n');
    match path {
        Some(p) => fs::write(p, text),
        None => io::stdout().write_all(text.as_bytes()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (doc, code) = match run(&cli) {
        Ok(v) => (v, 0),
        Err(CliError::Domain(e)) => (json!({ "error": { "kind": error_kind(&e), "message": e.to_string() } }), 1),
        Err(CliError::Schema(e)) => (e.to_json(), 2),
        Err(CliError::Io(m)) => (json!({ "error": { "kind": "io", "message": m } }), 2),
    };
    if code == 0 {
        if let Err(e) = write_doc(cli.output.as_ref(), &doc) {
            eprintln!("motint: {e}");
            return ExitCode::from(2);
        }
    } else {
        eprintln!("motint: {}", doc["error"]["message"].as_str().unwrap_or("error"));
        let _ = write_doc(None, &doc);
    }
    ExitCode::from(code)
}
