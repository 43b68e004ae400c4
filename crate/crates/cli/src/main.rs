use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use spdesc::closure::member_topdown;
use spdesc::ideal::Ideal;
use spdesc::{
    enumerate_sp, parse_obstruction_list, parse_term, synthesize_with, verify_equivalence, SpTerm,
    StructuralDescription, SynthConfig,
};

/// Structural descriptions of forbidden-suborder classes of series-parallel
/// orders.
#[derive(Parser)]
#[command(name = "spdesc", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Synthesize a description for the ideal forbidding the listed terms.
    Describe {
        /// One term per line; `#` starts a comment.
        obstructions: PathBuf,
        /// Write the JSON description here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write a Graphviz rendering.
        #[arg(long)]
        dot: Option<PathBuf>,
        /// Drop bits dominated by another bit of the same entry.
        #[arg(long)]
        prune: bool,
        /// Largest number of components in one forbidden antichain sum.
        #[arg(long, default_value_t = SynthConfig::default().max_block)]
        max_block: usize,
    },
    /// Check a description against direct enumeration of the ideal.
    Verify {
        obstructions: PathBuf,
        #[arg(long)]
        max_size: usize,
        /// Verify this saved description instead of synthesizing one.
        #[arg(long)]
        doc: Option<PathBuf>,
        /// Print the report as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Decide whether a term belongs to the ideal.
    Member {
        obstructions: PathBuf,
        term: String,
        /// Decide through the synthesized description instead of the
        /// obstructions.
        #[arg(long)]
        via_description: bool,
    },
    /// List canonical terms up to a size, one per line.
    Enumerate {
        #[arg(long)]
        max_size: usize,
        /// Only list members of the ideal forbidding these terms.
        #[arg(long)]
        forbid: Option<PathBuf>,
    },
    /// Print the entries of a saved description with their ranks.
    Show { doc: PathBuf },
}

/// Exit with status 2 and a message.
struct InputError(String);

impl<E: std::fmt::Display> From<E> for InputError {
    fn from(e: E) -> Self {
        InputError(e.to_string())
    }
}

fn read(path: &Path) -> Result<String, InputError> {
    fs::read_to_string(path).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), InputError> {
    fs::write(path, text).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

fn obstructions(path: &Path) -> Result<Vec<SpTerm>, InputError> {
    let text = read(path)?;
    parse_obstruction_list(&text).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

fn with_newline(mut s: String) -> String {
    if !s.ends_with('\n') {
        s.push('\n');
    }
    s
}

fn run(cli: Cli) -> Result<bool, InputError> {
    match cli.command {
        Command::Describe {
            obstructions: file,
            out,
            dot,
            prune,
            max_block,
        } => {
            let config = SynthConfig {
                max_block,
                prune_dominated: prune,
                ..SynthConfig::default()
            };
            let desc = synthesize_with(&obstructions(&file)?, &config)?;
            let json = with_newline(desc.to_json());
            match out {
                Some(path) => write(&path, &json)?,
                None => print!("{json}"),
            }
            if let Some(path) = dot {
                write(&path, &desc.to_dot())?;
            }
            Ok(true)
        }
        Command::Verify {
            obstructions: file,
            max_size,
            doc,
            json,
        } => {
            let forbidden = obstructions(&file)?;
            let desc = match doc {
                Some(path) => StructuralDescription::from_json(&read(&path)?)?,
                None => synthesize_with(&forbidden, &SynthConfig::default())?,
            };
            let report = verify_equivalence(&forbidden, &desc, max_size)?;
            if json {
                println!("{}", report.to_json());
            } else {
                println!("{}", report.summary());
                for t in &report.missing {
                    println!("missing {t}");
                }
                for t in &report.extra {
                    println!("extra {t}");
                }
            }
            Ok(report.is_equal())
        }
        Command::Member {
            obstructions: file,
            term,
            via_description,
        } => {
            let forbidden = obstructions(&file)?;
            let term = parse_term(&term)?;
            let answer = if via_description {
                let desc = synthesize_with(&forbidden, &SynthConfig::default())?;
                member_topdown(&desc, desc.root(), &term)?
            } else {
                Ideal::forbidding(forbidden).contains(&term)
            };
            println!("{answer}");
            Ok(true)
        }
        Command::Enumerate { max_size, forbid } => {
            let ideal = match forbid {
                Some(path) => Ideal::forbidding(obstructions(&path)?),
                None => Ideal::improper(),
            };
            for t in enumerate_sp(max_size)? {
                if ideal.contains(&t) {
                    println!("{t}");
                }
            }
            Ok(true)
        }
        Command::Show { doc } => {
            let desc = StructuralDescription::from_json(&read(&doc)?)?;
            let ranks = desc.ranks()?;
            println!("root Forb({})", desc.root());
            for (key, entry) in desc.entries() {
                println!("Forb({key})  rank {}  {} bits", ranks[key], entry.bits.len());
                for bit in &entry.bits {
                    println!("  {bit}");
                }
            }
            let report = desc.validate();
            if !report.is_valid() {
                for v in &report.violations {
                    println!("violation: {v}");
                }
                return Ok(false);
            }
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(InputError(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}
