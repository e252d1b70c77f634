//! Command-line front end: construction, verification, colouring,
//! search and census workflows over the `.star`/`.cstar` text formats.
//!
//! Exit codes: 0 success, 1 failed verification, 2 usage/parse/IO
//! error, 3 inadmissible or uncovered (n, e), 4 solver timeout without
//! an exact result. Failures also emit one machine-readable line on
//! stderr: `error kind=<KIND> msg="..."`.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Parser, Subcommand};
use starsys::{
    CensusOptions, ChiOutcome, ConstructError, ParsedFile, Permutation, StarSystem, block_count,
    census, chromatic_index, classes_from_colouring, construct, enumerate_invariant_systems,
    enumerate_systems, is_admissible, lower_bound, parse_auto, sample_system, verify_colouring,
    verify_system, write_coloured, write_system, write_system_stream,
};

#[derive(Parser)]
#[command(name = "starsys", version, about = "e-star systems: construct, verify, colour, search")]
struct Cli {
    /// Worker threads for census runs (default: available parallelism).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Force single-threaded, fully deterministic execution.
    #[arg(long, global = true)]
    reproducible: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the trivial lower bound L(n,e), block count and admissibility.
    Bound { n: u32, e: u32 },
    /// Verify a .star or .cstar file (format auto-detected).
    Check { file: PathBuf },
    /// Emit a block-coloured system of order n in .cstar format.
    Construct {
        n: u32,
        e: u32,
        /// Output path (stdout if omitted).
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Exact block-chromatic number of the system in FILE.
    Chi {
        file: PathBuf,
        /// Wall-clock budget in seconds (0 = unlimited). Default:
        /// unlimited up to 40 blocks, 60 s above.
        #[arg(long)]
        budget: Option<u64>,
        /// Write the best colouring found as .cstar.
        #[arg(long)]
        witness: Option<PathBuf>,
    },
    /// Enumerate systems (or sample with --sample) into .star output.
    Search {
        n: u32,
        e: u32,
        /// Stop after this many systems (exhaustive if omitted).
        #[arg(long)]
        limit: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Only systems invariant under this permutation, in cycle
        /// notation, e.g. "(1,2,3,4,5,6,7,8,9)".
        #[arg(long)]
        cyclic: Option<String>,
        /// Draw random systems instead of enumerating.
        #[arg(long)]
        sample: bool,
        /// Directory for one .star file per system (stdout stream with
        /// `---` separators if omitted).
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Chromatic-index census over enumerated systems.
    Census {
        n: u32,
        e: u32,
        #[arg(long)]
        limit: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Per-system budget in seconds (0 = unlimited).
        #[arg(long)]
        budget: Option<u64>,
        /// Also write the report as JSON.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Export the block-intersection graph in DIMACS edge format.
    Big {
        file: PathBuf,
        #[arg(long)]
        dimacs: PathBuf,
    },
}

struct Failure {
    kind: &'static str,
    msg: String,
    code: u8,
}

impl Failure {
    fn new(kind: &'static str, code: u8, msg: impl ToString) -> Failure {
        Failure { kind, code, msg: msg.to_string() }
    }

    fn usage(msg: impl ToString) -> Failure {
        Failure::new("USAGE", 2, msg)
    }

    fn invalid(msg: impl ToString) -> Failure {
        Failure::new("INVALID", 1, msg)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error kind={} msg={:?}", failure.kind, failure.msg);
            ExitCode::from(failure.code)
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let threads = if cli.reproducible {
        1
    } else {
        cli.threads
            .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |p| p.get()))
            .max(1)
    };
    match cli.command {
        Command::Bound { n, e } => cmd_bound(n, e),
        Command::Check { file } => cmd_check(&file),
        Command::Construct { n, e, output } => cmd_construct(n, e, output.as_deref()),
        Command::Chi { file, budget, witness } => cmd_chi(&file, budget, witness.as_deref()),
        Command::Search { n, e, limit, seed, cyclic, sample, output } => {
            cmd_search(n, e, limit, seed, cyclic.as_deref(), sample, output.as_deref())
        }
        Command::Census { n, e, limit, seed, budget, json } => {
            cmd_census(n, e, limit, seed, budget, json.as_deref(), threads)
        }
        Command::Big { file, dimacs } => cmd_big(&file, &dimacs),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|err| Failure::usage(format!("{}: {err}", path.display())))
}

fn write(path: &Path, contents: &str) -> Result<(), Failure> {
    fs::write(path, contents).map_err(|err| Failure::usage(format!("{}: {err}", path.display())))
}

fn load_system(path: &Path) -> Result<StarSystem, Failure> {
    match parse_auto(&read(path)?).map_err(|err| Failure::usage(err.to_string()))? {
        ParsedFile::Plain(sys) => Ok(sys),
        ParsedFile::Coloured(col) => Ok(col.system),
    }
}

fn cmd_bound(n: u32, e: u32) -> Result<(), Failure> {
    let admissible = is_admissible(n, e).map_err(|err| Failure::usage(err.to_string()))?;
    if admissible {
        let l = lower_bound(n, e).expect("admissible");
        let blocks = block_count(n, e).expect("admissible");
        println!("L={l} blocks={blocks} admissible=yes");
    } else {
        println!("admissible=no");
    }
    Ok(())
}

fn cmd_check(file: &Path) -> Result<(), Failure> {
    let parsed = parse_auto(&read(file)?).map_err(|err| Failure::usage(err.to_string()))?;
    match parsed {
        ParsedFile::Plain(sys) => match verify_system(&sys) {
            Ok(()) => {
                println!("valid=yes kind=system n={} e={} blocks={}", sys.n, sys.e, sys.blocks.len());
                Ok(())
            }
            Err(defect) => {
                println!("valid=no kind=system");
                Err(Failure::invalid(defect))
            }
        },
        ParsedFile::Coloured(col) => match verify_colouring(&col) {
            Ok(()) => {
                println!(
                    "valid=yes kind=colouring n={} e={} blocks={} classes={}",
                    col.system.n,
                    col.system.e,
                    col.system.blocks.len(),
                    col.class_count()
                );
                Ok(())
            }
            Err(defect) => {
                println!("valid=no kind=colouring");
                Err(Failure::invalid(defect))
            }
        },
    }
}

fn cmd_construct(n: u32, e: u32, output: Option<&Path>) -> Result<(), Failure> {
    let coloured = construct(n, e).map_err(|err| match err {
        ConstructError::Design(starsys::DesignError::StarSizeTooSmall(_)) => {
            Failure::usage(err.to_string())
        }
        ConstructError::Design(_) => Failure::new("INADMISSIBLE", 3, err),
        ConstructError::UnsupportedClass { .. } => Failure::new("UNSUPPORTED_CLASS", 3, err),
    })?;
    let text = write_coloured(&coloured);
    match output {
        Some(path) => {
            write(path, &text)?;
            println!(
                "written={} n={n} e={e} blocks={} classes={}",
                path.display(),
                coloured.system.blocks.len(),
                coloured.class_count()
            );
        }
        None => print!("{text}"),
    }
    Ok(())
}

/// Unlimited up to 40 blocks, 60 s above; an explicit 0 means unlimited.
fn chi_budget(requested: Option<u64>, blocks: usize) -> Option<Duration> {
    match requested {
        Some(0) => None,
        Some(secs) => Some(Duration::from_secs(secs)),
        None if blocks <= 40 => None,
        None => Some(Duration::from_secs(60)),
    }
}

fn cmd_chi(file: &Path, budget: Option<u64>, witness_path: Option<&Path>) -> Result<(), Failure> {
    let sys = load_system(file)?;
    let budget = chi_budget(budget, sys.blocks.len());
    let outcome = chromatic_index(&sys, budget).map_err(Failure::invalid)?;
    let witness = classes_from_colouring(&sys, outcome.witness());
    debug_assert_eq!(verify_colouring(&witness), Ok(()));
    if let Some(path) = witness_path {
        write(path, &write_coloured(&witness))?;
    }
    match outcome {
        ChiOutcome::Exact { chi, .. } => {
            println!("chi={chi}");
            Ok(())
        }
        ChiOutcome::Timeout { lower, upper, .. } => {
            println!("timeout=yes lower={lower} upper={upper}");
            Err(Failure::new("TIMEOUT", 4, format!("chromatic index in [{lower}, {upper}]")))
        }
    }
}

fn cmd_search(
    n: u32,
    e: u32,
    limit: Option<u64>,
    seed: u64,
    cyclic: Option<&str>,
    sample: bool,
    output: Option<&Path>,
) -> Result<(), Failure> {
    let map_design = |err: starsys::DesignError| match err {
        starsys::DesignError::StarSizeTooSmall(_) => Failure::usage(err.to_string()),
        starsys::DesignError::Inadmissible { .. } => Failure::new("INADMISSIBLE", 3, err),
    };
    let systems: Vec<StarSystem> = match (cyclic, sample) {
        (Some(_), true) => {
            return Err(Failure::usage("--cyclic and --sample cannot be combined"));
        }
        (Some(cycles), false) => {
            let sigma = Permutation::parse_cycles(cycles, n)
                .map_err(|err| Failure::usage(err.to_string()))?;
            let mut systems = enumerate_invariant_systems(n, e, &sigma).map_err(|err| {
                use starsys::InvariantSearchError::*;
                match err {
                    Design(design) => map_design(design),
                    Permutation(p) => Failure::usage(p.to_string()),
                    DegreeMismatch { .. } | IdentityAutomorphism => Failure::usage(err.to_string()),
                }
            })?;
            if let Some(limit) = limit {
                systems.truncate(limit as usize);
            }
            systems
        }
        (None, true) => {
            let draws = limit.unwrap_or(1);
            (0..draws)
                .map(|i| sample_system(n, e, seed.wrapping_add(i)))
                .collect::<Result<_, _>>()
                .map_err(map_design)?
        }
        (None, false) => enumerate_systems(n, e, limit, seed).map_err(map_design)?,
    };
    match output {
        Some(dir) => {
            fs::create_dir_all(dir)
                .map_err(|err| Failure::usage(format!("{}: {err}", dir.display())))?;
            for (i, sys) in systems.iter().enumerate() {
                let path = dir.join(format!("system_{i:06}.star"));
                write(&path, &write_system(sys))?;
            }
            println!("count={} dir={}", systems.len(), dir.display());
        }
        None => print!("{}", write_system_stream(&systems)),
    }
    Ok(())
}

fn cmd_census(
    n: u32,
    e: u32,
    limit: Option<u64>,
    seed: u64,
    budget: Option<u64>,
    json: Option<&Path>,
    threads: usize,
) -> Result<(), Failure> {
    let systems = enumerate_systems(n, e, limit, seed).map_err(|err| match err {
        starsys::DesignError::StarSizeTooSmall(_) => Failure::usage(err.to_string()),
        starsys::DesignError::Inadmissible { .. } => Failure::new("INADMISSIBLE", 3, err),
    })?;
    let blocks = systems.first().map_or(0, |s| s.blocks.len());
    let options = CensusOptions {
        budget_per_system: chi_budget(budget, blocks),
        threads,
        mode: if limit.is_some() { "enumerate-limit".into() } else { "enumerate".into() },
        seed,
    };
    let report = census(n, e, systems, &options);
    print!("{}", report.table());
    if let Some(path) = json {
        write(path, &report.to_json())?;
    }
    Ok(())
}

fn cmd_big(file: &Path, dimacs: &Path) -> Result<(), Failure> {
    let sys = load_system(file)?;
    let graph = starsys::block_intersection_graph(&sys).map_err(Failure::invalid)?;
    write(dimacs, &graph.to_dimacs())?;
    println!(
        "vertices={} edges={} written={}",
        graph.vertex_count(),
        graph.edge_count(),
        dimacs.display()
    );
    Ok(())
}
