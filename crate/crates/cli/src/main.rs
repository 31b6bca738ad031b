//! `brmult`: run tasks from an instance file and print JSON (or CSV) reports.
//!
//! Exit codes: 0 success, 1 verification failure (some `equal: false`),
//! 2 input error, 3 certificate indeterminacy (raise --s-max/--n-max/--window).

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use brmult_cli::instance::parse_field_spec;
use brmult_cli::runner::{run_text, RunConfig};

#[derive(Parser)]
#[command(
    name = "brmult",
    version,
    about = "Exact Buchsbaum-Rim multiplicities, joint reductions, and Koszul Euler characteristics",
    after_help = "COMMAND is a task keyword (the matching tasks in FILE run in order) or `run` \
                  (every task in FILE).  Task keywords: brtable, closure, colength, contracted, \
                  degree-check, freeness, jrn, koszul-chi, mixed-br, mixed-mult, mu-table, \
                  verify-brpolya, verify-determinantal, verify-equivalence, verify-jrn0, \
                  verify-local, verify-minors, verify-prodlength, verify-step1."
)]
struct Cli {
    /// Task command to run, or `run` for every task in the file.
    command: String,
    /// Instance file.
    file: PathBuf,
    /// Seed for random joint-reduction candidates and trial draws.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Coefficient field, `fp:<prime>` or `q`; overrides the file's field line.
    #[arg(long)]
    field: Option<String>,
    /// Cap for certificate searches m^s ⊆ ….
    #[arg(long = "s-max")]
    s_max: Option<usize>,
    /// Cap for joint-reduction equation sweeps.
    #[arg(long = "n-max")]
    n_max: Option<usize>,
    /// Per-axis table window, e.g. `--window 3,3`.
    #[arg(long, value_delimiter = ',')]
    window: Option<Vec<usize>>,
    /// Random trials for the mixed-multiplicity cross-check.
    #[arg(long, default_value_t = 8)]
    trials: usize,
    /// Worker threads for multi-task runs (tasks stay in file order).
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Emit CSV instead of JSON (brtable tasks only).
    #[arg(long, conflicts_with = "json")]
    csv: bool,
    /// Emit JSON reports (the default).
    #[arg(long)]
    json: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let field = match cli.field.as_deref().map(parse_field_spec).transpose() {
        Ok(f) => f,
        Err(m) => {
            eprintln!("error: {m}");
            return ExitCode::from(2);
        }
    };
    let text = match std::fs::read_to_string(&cli.file) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", cli.file.display());
            return ExitCode::from(2);
        }
    };
    let cfg = RunConfig {
        seed: cli.seed,
        field,
        s_max: cli.s_max,
        n_max: cli.n_max,
        window: cli.window,
        trials: cli.trials,
        jobs: cli.jobs.max(1),
        csv: cli.csv,
    };
    match run_text(&text, &cli.command, &cfg) {
        Ok(outcome) => {
            // A closed pipe downstream (e.g. `| head`) ends the run quietly.
            let stdout = std::io::stdout();
            let mut out = stdout.lock();
            for r in &outcome.reports {
                if writeln!(out, "{}", r.text.trim_end_matches('\n')).is_err() {
                    break;
                }
            }
            ExitCode::from(outcome.exit_code as u8)
        }
        Err(message) => {
            eprintln!("error: {}: {message}", cli.file.display());
            ExitCode::from(2)
        }
    }
}
