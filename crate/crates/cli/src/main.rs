//! `spn`: command-line front end for the spn-core analyses.
//!
//! JSON goes to stdout, a one-line summary to stderr. Exit codes: 0 ok,
//! 2 invalid input, 3 size cap exceeded, 4 verification mismatch.

mod commands;
mod spec_args;

use std::process::ExitCode;

use clap::Parser;

#[derive(Parser, Debug)]
#[command(
    name = "spn",
    version,
    about = "Analyses of Rijndael-like SP-networks over GF(p^r)"
)]
struct Cli {
    #[command(subcommand)]
    cmd: commands::Command,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli.cmd) {
        Ok(out) => {
            let text = serde_json::to_string_pretty(&out.doc).expect("JSON values serialize");
            println!("{text}");
            eprintln!("{}", out.summary);
            if out.mismatch {
                eprintln!("verification mismatch");
                ExitCode::from(4)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_too_large() { 3 } else { 2 })
        }
    }
}
