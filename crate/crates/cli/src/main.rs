mod input;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use frobcat::decision::{decide_mod, decide_set, RingSpec};
use frobcat::mod_oracle::{sample_check_mod, DEFAULT_MAX_DIM};
use frobcat::set_oracle::{sample_check_set, DEFAULT_MAX_SIZE, DEFAULT_SAMPLES};
use frobcat::FinCategory;

use report::Report;

const EXIT_CODES: &str = "\
Exit codes:
  0  valid input / verdict yes / oracle consistent
  1  verdict no
  2  input error (unreadable file, parse failure, invalid category, bad spec)
  3  oracle found an inconsistency between the verdict and its evidence

Generators (--gen):
  cyclic:<n>  discrete:<n>  arrow  parallel:<k>  idmon
  adjoin-unit:<generator>  monoid-table:<file>  corpus:<name>";

#[derive(Parser)]
#[command(name = "frobcat", version, about = "Decide whether limits and colimits agree on a finite category")]
#[command(after_help = EXIT_CODES)]
struct Cli {
    /// Print `key: value` lines only.
    #[arg(long, global = true)]
    machine: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Input {
    /// Category in the text format.
    file: Option<PathBuf>,
    /// Generator spec instead of a file.
    #[arg(long)]
    gen: Option<String>,
}

impl Input {
    fn load(&self) -> Result<FinCategory, String> {
        input::load(self.file.as_deref(), self.gen.as_deref())
    }
}

#[derive(Subcommand)]
enum Command {
    /// Check the category laws.
    Validate(Input),
    /// Components, strong connectivity and invariant systems with their groups.
    Analyze(Input),
    /// Decide the Frobenius property for sets or modules.
    Decide {
        #[command(subcommand)]
        target: DecideTarget,
    },
    /// Check a verdict against random functors.
    Oracle {
        #[command(subcommand)]
        target: OracleTarget,
    },
}

#[derive(Subcommand)]
enum DecideTarget {
    Set(Input),
    Mod {
        #[command(flatten)]
        input: Input,
        /// z, q, zmod:<n> or fp:<p>.
        #[arg(long)]
        ring: String,
    },
}

#[derive(Subcommand)]
enum OracleTarget {
    Set {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Largest set assigned to an object.
        #[arg(long, default_value_t = DEFAULT_MAX_SIZE)]
        max_size: usize,
    },
    Mod {
        #[command(flatten)]
        input: Input,
        /// Prime characteristic of the field.
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Largest dimension assigned to an object.
        #[arg(long, default_value_t = DEFAULT_MAX_DIM)]
        max_dim: usize,
    },
}

enum Failure {
    Input(String),
    Report(Report, u8),
}

fn run(cli: &Cli) -> Result<(Report, u8), Failure> {
    match &cli.command {
        Command::Validate(inp) => {
            let cat = input::load_unchecked(inp.file.as_deref(), inp.gen.as_deref()).map_err(Failure::Input)?;
            let v = cat.validate();
            let mut r = Report::new(if v.is_valid() { "valid" } else { "invalid" });
            r.field("valid", if v.is_valid() { "yes" } else { "no" });
            report::category_summary(&mut r, &cat);
            for (k, violation) in v.violations.iter().enumerate() {
                r.field(format!("violation.{k}"), violation);
            }
            if v.is_valid() {
                Ok((r, 0))
            } else {
                Err(Failure::Report(r, 2))
            }
        }
        Command::Analyze(inp) => Ok((report::analyze(&inp.load().map_err(Failure::Input)?), 0)),
        Command::Decide { target } => {
            let (cat, verdict, name) = match target {
                DecideTarget::Set(inp) => {
                    let cat = inp.load().map_err(Failure::Input)?;
                    let v = decide_set(&cat).map_err(|e| Failure::Input(e.to_string()))?;
                    (cat, v, "set".to_string())
                }
                DecideTarget::Mod { input: inp, ring } => {
                    let ring: RingSpec = ring.parse().map_err(|e: frobcat::decision::RingError| Failure::Input(e.to_string()))?;
                    let cat = inp.load().map_err(Failure::Input)?;
                    let v = decide_mod(&cat, ring).map_err(|e| Failure::Input(e.to_string()))?;
                    (cat, v, ring.to_string())
                }
            };
            let code = if verdict.answer { 0 } else { 1 };
            Ok((report::decide(&cat, &name, &verdict), code))
        }
        Command::Oracle { target } => match target {
            OracleTarget::Set {
                input: inp,
                samples,
                seed,
                max_size,
            } => {
                let cat = inp.load().map_err(Failure::Input)?;
                let rep = sample_check_set(&cat, *samples, *seed, *max_size).map_err(|e| Failure::Input(e.to_string()))?;
                let code = if rep.is_consistent() { 0 } else { 3 };
                Ok((report::oracle_set(&cat, *seed, &rep), code))
            }
            OracleTarget::Mod {
                input: inp,
                p,
                samples,
                seed,
                max_dim,
            } => {
                let cat = inp.load().map_err(Failure::Input)?;
                let rep = sample_check_mod(&cat, *p, *samples, *seed, *max_dim).map_err(|e| Failure::Input(e.to_string()))?;
                let code = if rep.is_consistent() { 0 } else { 3 };
                Ok((report::oracle_mod(&cat, *seed, &rep), code))
            }
        },
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((r, code)) => {
            print!("{}", r.render(cli.machine));
            ExitCode::from(code)
        }
        Err(Failure::Report(r, code)) => {
            print!("{}", r.render(cli.machine));
            ExitCode::from(code)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
