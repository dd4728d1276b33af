use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use num_bigint::BigUint;

use sbcube::composer::{generate_sbc_with, Strategy};
use sbcube::designs::{pbd456, pbd456_route, search_plane_deletion, SearchOutcome};
use sbcube::library::{block_cube, BlockKind};
use sbcube::oracle::{cube_exists, search_cube, search_sbts, Outcome, SearchProblem};
use sbcube::{decode_cube, encode_cube, verify_consecutive, Error, Format, Mask};

const OK: u8 = 0;
const REJECTED: u8 = 1;
const UNAVAILABLE: u8 = 2;
const NONE_EXISTS: u8 = 3;
const OVER_BUDGET: u8 = 4;
const USAGE: u8 = 64;
const IO: u8 = 74;

/// Build, verify and search for cubes whose line sums are consecutive.
#[derive(Parser)]
#[command(name = "sbc", version)]
struct Cli {
    /// Worker threads for parallel existence checks.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Construct and verify an SBC(n).
    Gen {
        n: usize,
        #[arg(long, default_value = "auto")]
        strategy: Strategy,
        #[arg(long, default_value = "json")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check that a cube file's nonempty line sums are consecutive.
    Verify { file: PathBuf },
    /// Backtracking search for a small cube or triple system.
    Search {
        #[command(subcommand)]
        target: SearchTarget,
        #[arg(long, global = true, default_value_t = 0)]
        start: u64,
        #[arg(long, global = true, default_value_t = 0)]
        seed: u64,
        #[arg(long, global = true, default_value_t = 10_000_000)]
        budget: u64,
        /// Report only whether a solution exists; runs on `--threads` workers.
        #[arg(long, global = true)]
        exists: bool,
        #[arg(long, global = true, default_value = "json")]
        format: Format,
    },
    /// Build a verified PBD(v, {4,5,6}).
    Pbd {
        v: usize,
        /// Print the construction route instead of the design.
        #[arg(long)]
        route: bool,
        /// Run the plane-deletion search and print its table line.
        #[arg(long, conflicts_with = "route")]
        search: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 50_000_000)]
        budget: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Inspect the bundled building-block cubes.
    Blocks {
        #[command(subcommand)]
        action: BlocksAction,
    },
}

#[derive(Subcommand)]
enum SearchTarget {
    /// Full n×n×n cube.
    Sbc { n: usize },
    /// Cube on the cells of a mask file (any cube file; holes mark the mask).
    Mask { file: PathBuf },
    /// Weights on the 3-subsets of {1..v}.
    Sbts { v: usize },
}

#[derive(Subcommand)]
enum BlocksAction {
    List,
    Show {
        kind: BlockKind,
        #[arg(long, default_value = "text")]
        format: Format,
    },
}

/// Failure that ends the process with a specific code.
struct Exit(u8, String);

impl From<Error> for Exit {
    fn from(err: Error) -> Self {
        let code = match err {
            Error::Io(_) => IO,
            Error::Unavailable(_) | Error::NoDesign(_) => UNAVAILABLE,
            Error::Argument(_) | Error::Precondition(_) => USAGE,
            _ => REJECTED,
        };
        Exit(code, err.to_string())
    }
}

fn io_error(path: &Path, err: io::Error) -> Exit {
    Exit(IO, format!("{}: {err}", path.display()))
}

fn read(path: &Path) -> Result<String, Exit> {
    fs::read_to_string(path).map_err(|e| io_error(path, e))
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), Exit> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| io_error(path, e)),
        None => io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Exit(IO, format!("stdout: {e}"))),
    }
}

fn outcome_code<W>(outcome: &Outcome<W>) -> u8 {
    match outcome {
        Outcome::Found(_) => OK,
        Outcome::ExhaustedNone => NONE_EXISTS,
        Outcome::BudgetExceeded => OVER_BUDGET,
    }
}

fn run(cli: Cli) -> Result<u8, Exit> {
    match cli.command {
        Command::Gen {
            n,
            strategy,
            format,
            out,
        } => {
            let cube = generate_sbc_with::<u64>(n, strategy)?;
            let report = verify_consecutive(&cube)?;
            if !report.accepted {
                return Err(Exit(REJECTED, format!("refusing to write SBC({n}): {report}")));
            }
            emit(&encode_cube(&cube, format), out.as_deref())?;
            eprintln!("SBC({n}) {report}");
            Ok(OK)
        }
        Command::Verify { file } => {
            let cube = decode_cube::<BigUint>(&read(&file)?)?;
            let report = verify_consecutive(&cube)?;
            println!("{report}");
            Ok(if report.accepted { OK } else { REJECTED })
        }
        Command::Search {
            target,
            start,
            seed,
            budget,
            exists,
            format,
        } => {
            if let SearchTarget::Sbts { v } = target {
                let outcome = search_sbts(v, budget, seed)?;
                match &outcome {
                    Outcome::Found(w) if !exists => print!("{w}"),
                    other => println!("{}", verdict(other)),
                }
                return Ok(outcome_code(&outcome));
            }
            let mask = match target {
                SearchTarget::Sbc { n } if n > 0 => Mask::full(n),
                SearchTarget::Sbc { .. } => return Err(Exit(USAGE, "n must be positive".into())),
                SearchTarget::Mask { file } => decode_cube::<BigUint>(&read(&file)?)?.mask().clone(),
                SearchTarget::Sbts { .. } => unreachable!(),
            };
            let problem = SearchProblem::new(mask, start, budget, seed)?;
            if exists {
                let outcome = cube_exists(&problem, cli.threads);
                println!("{}", verdict(&outcome));
                return Ok(outcome_code(&outcome));
            }
            let outcome = search_cube(&problem);
            match &outcome {
                Outcome::Found(cube) => emit(&encode_cube(cube, format), None)?,
                other => println!("{}", verdict(other)),
            }
            Ok(outcome_code(&outcome))
        }
        Command::Pbd {
            v,
            route,
            search,
            seed,
            budget,
            out,
        } => {
            if search {
                return match search_plane_deletion(v, seed, budget) {
                    SearchOutcome::Found(route) => {
                        println!("{route:?}");
                        Ok(OK)
                    }
                    SearchOutcome::BudgetExceeded => {
                        println!("budget exceeded");
                        Ok(OVER_BUDGET)
                    }
                };
            }
            if route {
                return match pbd456_route(v) {
                    Some(route) => {
                        println!("{}", route.describe());
                        Ok(OK)
                    }
                    None => Err(Exit(UNAVAILABLE, format!("no recursive route for v = {v}"))),
                };
            }
            let design = pbd456(v)?;
            emit(&design.to_json(), out.as_deref())?;
            eprintln!(
                "PBD({v}, {{4,5,6}}): {} blocks, {}",
                design.blocks().len(),
                design.provenance()
            );
            Ok(OK)
        }
        Command::Blocks { action } => match action {
            BlocksAction::List => {
                for kind in BlockKind::ALL {
                    println!(
                        "{:<9} {:<9} n={} lines={}",
                        kind.name(),
                        kind.graph().to_string(),
                        kind.order(),
                        kind.line_count()
                    );
                }
                Ok(OK)
            }
            BlocksAction::Show { kind, format } => {
                emit(&encode_cube(&block_cube::<u64>(kind)?, format), None)?;
                Ok(OK)
            }
        },
    }
}

fn verdict<W>(outcome: &Outcome<W>) -> &'static str {
    match outcome {
        Outcome::Found(_) => "found",
        Outcome::ExhaustedNone => "exhausted: no solution exists",
        Outcome::BudgetExceeded => "budget exceeded",
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.use_stderr() { USAGE } else { OK };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(Exit(code, message)) => {
            eprintln!("sbc: {message}");
            ExitCode::from(code)
        }
    }
}
