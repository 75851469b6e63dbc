//! Command-line laboratory over `ttcur-core`: JSON documents, the example
//! library, PF caching and reproducible report files.

pub mod cache;
pub mod commands;
pub mod examples;
pub mod formats;
pub mod output;

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::cache::CachedSolver;
use crate::commands::{Failure, Outcome, Report, RunConfig, Tree};

#[derive(Debug, Parser)]
#[command(
    name = "ttcur",
    version,
    about = "Train-track maps, currents and north-south dynamics experiments"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Use this power of the map instead of the normalizing power
    #[arg(long, global = true)]
    pub power: Option<usize>,
    /// Path length R of weight systems and frequency tables (at most 8)
    #[arg(long, global = true, default_value_t = 3)]
    pub depth: usize,
    /// Iteration steps (at most 200)
    #[arg(long, global = true, default_value_t = 40)]
    pub steps: usize,
    /// Convergence radius around the stable and unstable currents
    #[arg(long, global = true, default_value_t = 1e-2)]
    pub eps: f64,
    /// Directory for output files instead of standard output
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Cap on explicit word lengths
    #[arg(long, global = true, default_value_t = 1_000_000)]
    pub max_word_len: usize,
}

impl GlobalArgs {
    pub fn config(&self) -> RunConfig {
        RunConfig {
            power: self.power,
            depth: self.depth,
            steps: self.steps,
            eps: self.eps,
            out: self.out.clone(),
            max_word_len: self.max_word_len,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validity, spectral data, illegal turns, INPs and a hyperbolicity scan
    Analyze {
        /// Document path or example name
        file: String,
        /// Longest class enumerated by the hyperbolicity scan
        #[arg(long, default_value_t = 8)]
        scan_len: usize,
    },
    /// Limit frequencies of paths of length at most --depth
    Frequencies {
        /// Document path or example name
        file: String,
    },
    /// Iterates of a conjugacy class
    Iterate {
        /// Document path or example name
        file: String,
        #[arg(long)]
        /// Word in the basis, comma separated with `^-1` for inverses
        word: String,
    },
    /// Goodness along the iterates of a class
    Goodness {
        /// Document path or example name
        file: String,
        #[arg(long)]
        /// Word in the basis, comma separated with `^-1` for inverses
        word: String,
    },
    /// Illegal-turn counts along the iterates of a class
    Ilt {
        /// Document path or example name
        file: String,
        #[arg(long)]
        /// Word in the basis, comma separated with `^-1` for inverses
        word: String,
    },
    /// Indivisible Nielsen paths of the working power
    Inp {
        /// Document path or example name
        file: String,
    },
    /// Trajectories of seeds under the map and its inverse representative
    Northsouth {
        /// Document path or example name
        file: String,
        /// Seed word in the basis; repeatable
        #[arg(long)]
        seed: Vec<String>,
        /// File with one seed word per line
        #[arg(long)]
        seeds: Option<PathBuf>,
    },
    /// Translation length of a class in a metric tree
    Length {
        /// Document path or example name
        file: String,
        #[arg(long, value_enum, default_value = "tt")]
        tree: Tree,
        #[arg(long)]
        /// Word in the basis, comma separated with `^-1` for inverses
        word: String,
    },
    /// Lists the shipped examples, prints one, or recomputes their status
    Examples {
        name: Option<String>,
        #[arg(long)]
        certify: bool,
        #[arg(long, default_value_t = 8)]
        scan_len: usize,
    },
}

/// Runs a parsed command line.
pub fn execute(cli: &Cli) -> Outcome<Report> {
    let cfg = cli.global.config();
    cfg.validate()?;
    let solver = CachedSolver::from_env();
    match &cli.command {
        Command::Analyze { file, scan_len } => {
            commands::analyze(&commands::load_input(file)?, &cfg, *scan_len, &solver)
        }
        Command::Frequencies { file } => commands::frequencies(&commands::load_input(file)?, &cfg),
        Command::Iterate { file, word } => {
            commands::iterate(&commands::load_input(file)?, &cfg, word)
        }
        Command::Goodness { file, word } => {
            commands::goodness(&commands::load_input(file)?, &cfg, word)
        }
        Command::Ilt { file, word } => commands::ilt(&commands::load_input(file)?, &cfg, word),
        Command::Inp { file } => commands::inp(&commands::load_input(file)?, &cfg),
        Command::Northsouth { file, seed, seeds } => {
            let aut = commands::load_input(file)?;
            let mut list = seed.clone();
            if let Some(p) = seeds {
                list.extend(commands::read_seeds(&std::fs::read_to_string(p)?));
            }
            if list.is_empty() {
                list = commands::default_seeds(&aut);
            }
            commands::northsouth(&aut, &cfg, &list)
        }
        Command::Length { file, tree, word } => {
            commands::length(&commands::load_input(file)?, *tree, word, &solver)
        }
        Command::Examples {
            name,
            certify,
            scan_len,
        } => match (name, certify) {
            (_, true) => commands::certify_examples(*scan_len),
            (Some(n), false) => commands::show_example(n),
            (None, false) => Ok(commands::list_examples()),
        },
    }
}

/// Writes the report files into `out` atomically, or prints them. Returns
/// the exit status.
pub fn emit(report: &Report, out: Option<&PathBuf>) -> Outcome<u8> {
    match out {
        Some(dir) => {
            std::fs::create_dir_all(dir)?;
            for (name, content) in &report.files {
                output::write_atomic(&dir.join(name), content.as_bytes())?;
            }
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            for (i, (_, content)) in report.files.iter().enumerate() {
                // a second file (the northsouth summary) goes to stderr
                if i == 0 {
                    stdout.write_all(content.as_bytes())?;
                } else {
                    eprint!("{content}");
                }
            }
            stdout.flush()?;
        }
    }
    if let Some(m) = &report.message {
        eprintln!("ttcur: {m}");
    }
    Ok(report.code)
}

/// Parses arguments, runs, and maps every outcome to an exit status.
pub fn main_with_args<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                commands::EXIT_VALIDATION
            } else {
                commands::EXIT_OK
            };
        }
    };
    let result = execute(&cli).and_then(|r| emit(&r, cli.global.out.as_ref()));
    match result {
        Ok(code) => code,
        Err(Failure { code, message }) => {
            eprintln!("ttcur: {message}");
            code
        }
    }
}
