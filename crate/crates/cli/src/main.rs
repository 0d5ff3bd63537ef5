//! `desksnark`: compile small programs to R1CS/QAP, prove and verify them,
//! and drive the toy payment ledger.
//!
//! Exit codes: 0 success or accept, 1 reject, 2 usage or I/O error.

mod files;
mod ledger_cmd;
mod pipeline;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Parser, Subcommand};
use serde_json::Value;

#[derive(Parser)]
#[command(name = "desksnark", version, about = "Toy zk-SNARK pipeline and payment ledger")]
struct Cli {
    /// Print the tables of the built-in cubic example and exit.
    #[arg(long)]
    show_paper_example: bool,

    /// Print a single line of JSON on stdout instead of text.
    #[arg(long, global = true)]
    json: bool,

    /// Ledger file used by the ledger commands.
    #[arg(long, global = true, default_value = "ledger.json")]
    ledger: PathBuf,

    #[command(subcommand)]
    cmd: Option<Cmd>,
}

#[derive(Subcommand)]
enum Cmd {
    #[command(flatten)]
    Pipeline(pipeline::PipelineCmd),
    #[command(flatten)]
    Ledger(ledger_cmd::LedgerCmd),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Accept,
    Reject,
}

/// Writes results to stdout: the text form, or one JSON line with `--json`.
pub struct Out {
    pub json: bool,
}

impl Out {
    pub fn emit(&self, text: impl AsRef<str>, value: Value) {
        if self.json {
            put(&value.to_string());
        } else {
            put(text.as_ref());
        }
    }

    /// Progress lines; suppressed under `--json`.
    pub fn note(&self, text: impl AsRef<str>) {
        if !self.json {
            put(text.as_ref());
        }
    }
}

/// A closed pipe (`| head`) is not worth a panic.
fn put(line: &str) {
    let mut stdout = std::io::stdout().lock();
    let _ = writeln!(stdout, "{line}").and_then(|_| stdout.flush());
}

fn run(cli: Cli) -> Result<Outcome> {
    let out = Out { json: cli.json };
    if cli.show_paper_example {
        return pipeline::show_example(&out);
    }
    match cli.cmd {
        Some(Cmd::Pipeline(c)) => pipeline::run(c, &out),
        Some(Cmd::Ledger(c)) => ledger_cmd::run(c, &cli.ledger, &out),
        None => anyhow::bail!("no command given; see --help"),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(Outcome::Accept) => ExitCode::SUCCESS,
        Ok(Outcome::Reject) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
