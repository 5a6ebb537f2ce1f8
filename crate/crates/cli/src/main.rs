use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use cohoma::dsl::{exit_code, render_json, render_text, run, Session};
use cohoma::qk::reduce;

#[derive(Parser)]
#[command(name = "cohoma", version, about = "Exact checks for bigraded algebras and QK-structures")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a .cohoma script.
    Run {
        file: PathBuf,
        /// Emit the versioned JSON report instead of text.
        #[arg(long)]
        json: bool,
        /// Omit timings so output is byte-identical across runs.
        #[arg(long)]
        deterministic: bool,
    },
    /// Normal form of a word in Q, K, L.
    Nf {
        word: String,
        /// Impose K^(n+1) = 0.
        #[arg(long, value_name = "N")]
        truncate: Option<usize>,
    },
    /// Inspect a preset such as `weil(su2)` or `gauge(su2,4,2)`.
    Preset {
        name: String,
        #[arg(long)]
        list_generators: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.cmd {
        Cmd::Run { file, json, deterministic } => {
            let src = match std::fs::read_to_string(&file) {
                Ok(s) => s,
                Err(e) => {
                    eprintln!("error: cannot read {}: {e}", file.display());
                    return ExitCode::from(2);
                }
            };
            match run(&src, deterministic) {
                Ok(reports) => {
                    if json {
                        println!("{}", render_json(&reports));
                    } else {
                        print!("{}", render_text(&reports));
                    }
                    exit_code(&reports)
                }
                Err(e) => {
                    eprintln!("{}: {e}", file.display());
                    2
                }
            }
        }
        Cmd::Nf { word, truncate } => match reduce(&word, truncate) {
            Ok(nf) => {
                println!("{}", nf.render());
                0
            }
            Err(e) => {
                eprintln!("error: {e}");
                2
            }
        },
        Cmd::Preset { name, list_generators } => match Session::with_preset(&name) {
            Ok(s) => {
                let alg = s.algebra();
                if list_generators {
                    for g in alg.generators() {
                        println!("{}  deg {}", g.label(), g.degree);
                    }
                } else {
                    println!("{} generators", alg.len());
                    for d in s.derivation_names() {
                        println!("der {d}");
                    }
                }
                0
            }
            Err(e) => {
                eprintln!("error: {e}");
                2
            }
        },
    };
    ExitCode::from(code as u8)
}
