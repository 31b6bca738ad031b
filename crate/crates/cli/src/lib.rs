//! Library half of the `brmult` command-line tool: the instance-file parser
//! and the task runner.  The binary in `main.rs` is a thin shell over
//! [`runner::run_text`], which keeps every behavior testable in-process.

pub mod instance;
pub mod runner;

/// Task commands the instance format accepts, one per dispatchable
/// computation.  `run` is a subcommand of the binary (run every task in the
/// file), not a task keyword.
pub const COMMANDS: &[&str] = &[
    "brtable",
    "closure",
    "colength",
    "contracted",
    "degree-check",
    "freeness",
    "jrn",
    "koszul-chi",
    "mixed-br",
    "mixed-mult",
    "mu-table",
    "verify-brpolya",
    "verify-determinantal",
    "verify-equivalence",
    "verify-jrn0",
    "verify-local",
    "verify-minors",
    "verify-prodlength",
    "verify-step1",
];
