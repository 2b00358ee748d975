use std::io::Read;
use std::process::ExitCode;

use clap::Parser;
use polmult::runner;
use polmult::scalar::Field;
use polmult::session;

/// Batch runner for multiplicity, polar-locus, and map-germ computations on
/// exact polynomial data.
///
/// Reads a line-oriented session file (or stdin), executes its tasks in
/// order, and prints one deterministic report line per task. Exit codes:
/// 0 all tasks ok and all identity checks held, 1 some task errored,
/// 2 an identity check failed, 3 the session did not parse.
#[derive(Parser)]
#[command(name = "polmult", version)]
struct Cli {
    /// Session file; omitted or '-' reads stdin
    session: Option<String>,

    /// Seed for the generic-scalar streams (overrides the session option)
    #[arg(long)]
    seed: Option<u64>,

    /// Sample bound for the length tables (overrides the session option)
    #[arg(long)]
    nmax: Option<usize>,

    /// Coefficient field, QQ or FP:<p>; overrides any field named in the
    /// session
    #[arg(long)]
    field: Option<String>,

    /// Emit one canonical JSON object per task instead of text lines
    #[arg(long)]
    json: bool,

    /// Cell budget for length computations (safety valve against runaway
    /// staircases)
    #[arg(long = "max-colength")]
    max_colength: Option<u64>,
}

fn read_session(arg: &Option<String>) -> Result<String, String> {
    match arg.as_deref() {
        None | Some("-") => {
            let mut text = String::new();
            std::io::stdin()
                .read_to_string(&mut text)
                .map_err(|e| format!("could not read stdin: {e}"))?;
            Ok(text)
        }
        Some(path) => {
            std::fs::read_to_string(path).map_err(|e| format!("could not read {path}: {e}"))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let field: Option<Field> = match cli.field.as_deref().map(session::parse_field) {
        None => None,
        Some(Ok(f)) => Some(f),
        Some(Err(e)) => {
            eprintln!("error: {e}");
            return ExitCode::from(3);
        }
    };
    let text = match read_session(&cli.session) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(3);
        }
    };
    let sess = match session::parse_session(&text, field) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("parse error: {e}");
            return ExitCode::from(3);
        }
    };
    let cfg = runner::resolve_config(&sess.options, cli.seed, cli.nmax, cli.json, cli.max_colength);
    let (lines, code) = runner::run_session(&sess, &cfg);
    for line in lines {
        println!("{line}");
    }
    ExitCode::from(code as u8)
}
