//! `formap`: enumerate maps, check loop equations and compare free energies
//! computed by independent routes.

mod commands;
mod error;
mod model;
mod report;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use commands::{Route, Run, WickMethod};
use error::CliError;
use model::ModelFile;

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Output {
    Json,
    Text,
}

#[derive(Parser, Debug)]
#[command(name = "formap", version, about = "Formal matrix integrals and map enumeration")]
struct Cli {
    /// Report format.
    #[arg(long, value_enum, global = true, default_value = "text")]
    out: Output,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Tabulate F_{l,g} by Wick contraction.
    Enumerate {
        model: PathBuf,
        #[arg(long)]
        max_l: Option<usize>,
        #[arg(long, value_enum, default_value = "auto")]
        method: WickMethod,
        /// List connected map classes with their weights and automorphism counts.
        #[arg(long)]
        census: bool,
        #[arg(long)]
        budget_pairings: Option<u64>,
    },
    /// Verify loop equations for every color and word.
    CheckLoops {
        model: PathBuf,
        #[arg(long, default_value_t = 4)]
        order: i64,
        /// Longest word checked when no explicit words are given.
        #[arg(long, default_value_t = 2)]
        word_len: usize,
        /// Explicit words as comma-separated colors, e.g. `1,2,1`; `-` is the empty word.
        #[arg(long = "word")]
        words: Vec<String>,
        #[arg(long)]
        budget_pairings: Option<u64>,
    },
    /// F^(g) from a single route.
    FreeEnergy {
        model: PathBuf,
        #[arg(long, value_enum)]
        route: Route,
        #[arg(long, value_delimiter = ',', default_value = "0,1")]
        genus: Vec<u32>,
        #[arg(long)]
        order: Option<i64>,
        #[arg(long)]
        max_l: Option<usize>,
        #[arg(long)]
        budget_pairings: Option<u64>,
    },
    /// Compare every available route genus by genus.
    Crosscheck {
        model: PathBuf,
        #[arg(long)]
        max_l: Option<usize>,
        #[arg(long)]
        order: Option<i64>,
        #[arg(long)]
        budget_pairings: Option<u64>,
    },
}

fn parse_word(s: &str, p: usize) -> Result<Vec<u8>, CliError> {
    if s == "-" || s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|c| match c.trim().parse::<u8>() {
            Ok(k) if k >= 1 && (k as usize) <= p => Ok(k),
            _ => Err(CliError::Usage(format!("bad color `{c}` in word `{s}`"))),
        })
        .collect()
}

fn init_threads() -> Result<(), CliError> {
    if let Ok(v) = std::env::var("FORMAP_THREADS") {
        let n: usize = v.parse().map_err(|_| CliError::Usage(format!("FORMAP_THREADS must be a number, got `{v}`")))?;
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    Ok(())
}

fn execute(command: Command) -> Result<report::Report, CliError> {
    init_threads()?;
    match command {
        Command::Enumerate { model, max_l, method, census, budget_pairings } => {
            let run = Run::new(ModelFile::load(&model)?, budget_pairings);
            commands::enumerate(&run, max_l, method, census)
        }
        Command::CheckLoops { model, order, word_len, words, budget_pairings } => {
            let run = Run::new(ModelFile::load(&model)?, budget_pairings);
            let p = run.model.gaussian.p();
            let words = if words.is_empty() {
                None
            } else {
                Some(words.iter().map(|w| parse_word(w, p)).collect::<Result<Vec<_>, _>>()?)
            };
            commands::check_loops(&run, words, word_len, order)
        }
        Command::FreeEnergy { model, route, genus, order, max_l, budget_pairings } => {
            let run = Run::new(ModelFile::load(&model)?, budget_pairings);
            commands::free_energy(&run, route, &genus, order, max_l)
        }
        Command::Crosscheck { model, max_l, order, budget_pairings } => {
            let run = Run::new(ModelFile::load(&model)?, budget_pairings);
            commands::crosscheck(&run, max_l, order)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    match execute(cli.command) {
        Ok(mut r) => {
            r.elapsed_ms = start.elapsed().as_millis() as u64;
            let text = match cli.out {
                Output::Json => r.to_json() + "\n",
                Output::Text => r.to_text(),
            };
            let _ = std::io::stdout().write_all(text.as_bytes());
            ExitCode::from(if r.passed { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("formap: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
