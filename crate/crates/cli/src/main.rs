//! `latshadow`: batch verification of self-dual codes and the unimodular
//! lattices built from them.
//!
//! Exit codes: 0 pass, 2 invariant mismatch, 3 input error, 4 budget exceeded.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_rational::BigRational;

use latshadow::binwe::{solve_constraints, ConstraintProblem, DEFAULT_SOLVER_BUDGET};
use latshadow::lattice::parse_lattice;
use latshadow::qtheta::{decompose, DEFAULT_TRUNCATION};
use latshadow::registry;
use latshadow::report::{neighbor_report, verify_code, Claims, Report};
use latshadow::svp::{enumerate, CosetTarget, EnumConfig, DEFAULT_NODE_BUDGET};
use latshadow::zkcode::{parse_code, ZkCode};
use latshadow::Error;

const EXIT_MISMATCH: u8 = 2;
const EXIT_INPUT: u8 = 3;
const EXIT_BUDGET: u8 = 4;

#[derive(Parser)]
#[command(name = "latshadow", version, about = "Verify self-dual codes and their unimodular lattices")]
struct Cli {
    /// Worker threads for lattice enumeration.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    /// Maximum number of enumeration tree nodes per search.
    #[arg(long, global = true, default_value_t = DEFAULT_NODE_BUDGET)]
    node_budget: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a built-in instance or a code file against its expected invariants.
    Verify { target: String },
    /// Print the parameterized theta series of a lattice and its shadow.
    Theta {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        min_norm: usize,
        /// Highest integral power of q kept; defaults to LATSHADOW_TRUNCATION or 6.
        #[arg(long)]
        truncation: Option<usize>,
    },
    /// Find every weight enumerator of a doubly-even code meeting the constraints.
    Wesolve {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        dim: usize,
        #[arg(long, value_delimiter = ',', required = true)]
        support: Vec<usize>,
        #[arg(long, value_delimiter = ',')]
        dual_zeros: Vec<usize>,
        #[arg(long)]
        forbid_all_ones: bool,
        #[arg(long, default_value_t = DEFAULT_SOLVER_BUDGET)]
        budget: u64,
    },
    /// Count lattice (or shadow) vectors up to a norm bound.
    Enum {
        #[arg(long)]
        file: PathBuf,
        /// Norm bound as `p/q` or an integer.
        #[arg(long)]
        bound: String,
        #[arg(long, value_enum, default_value_t = Coset::Lattice)]
        coset: Coset,
    },
    /// Report the two unimodular neighbors of an instance or code file.
    Neighbors {
        target: String,
        /// Theta coefficients printed for each neighbor.
        #[arg(long, default_value_t = 5)]
        theta_to: usize,
    },
    /// List the built-in instances and their expected invariants.
    List,
}

#[derive(Clone, Copy, ValueEnum)]
enum Coset {
    Lattice,
    Shadow,
}

enum Failure {
    Mismatch,
    Core(Error),
    Input(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

fn truncation(flag: Option<usize>) -> Result<usize, Failure> {
    if let Some(t) = flag {
        return Ok(t);
    }
    match std::env::var("LATSHADOW_TRUNCATION") {
        Ok(v) => v.trim().parse().map_err(|_| Failure::Input(format!("LATSHADOW_TRUNCATION=`{v}` is not a count"))),
        Err(_) => Ok(DEFAULT_TRUNCATION),
    }
}

fn read(path: &std::path::Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

/// A registry name, or else a path to a code file.
fn load_target(target: &str) -> Result<(String, ZkCode, Claims), Failure> {
    if let Ok(inst) = registry::instance(target) {
        let claims = Claims::from(&inst.expected);
        return Ok((inst.name.to_string(), inst.code()?, claims));
    }
    let path = PathBuf::from(target);
    if !path.exists() {
        return Err(Failure::Core(Error::UnknownInstance(target.to_string())));
    }
    let file = parse_code(&read(&path)?)?;
    let claims = Claims::from_pairs(&file.expectations)?;
    let name = path.file_stem().map_or_else(|| target.to_string(), |s| s.to_string_lossy().into_owned());
    Ok((name, file.code, claims))
}

fn parse_bound(s: &str) -> Result<BigRational, Failure> {
    s.trim().parse().map_err(|_| Failure::Input(format!("bound `{s}` is not a rational p/q")))
}

fn print_report(r: &Report) -> Result<(), Failure> {
    print!("{r}");
    if r.passed() {
        Ok(())
    } else {
        Err(Failure::Mismatch)
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let cfg = EnumConfig { threads: cli.threads.max(1), node_budget: cli.node_budget, ..EnumConfig::default() };
    match cli.command {
        Command::Verify { target } => {
            let (name, code, claims) = load_target(&target)?;
            print_report(&verify_code(&name, &code, &claims, &cfg)?)
        }
        Command::Theta { n, min_norm, truncation: t } => {
            let t = truncation(t)?;
            let (lat, sh) = decompose(n, min_norm, t)?;
            println!("N {n}");
            println!("MIN_NORM {min_norm}");
            println!("TRUNCATION {}", lat.truncation());
            for line in lat.to_string().lines() {
                println!("THETA_L {line}");
            }
            for line in sh.to_string().lines() {
                println!("THETA_S {line}");
            }
            Ok(())
        }
        Command::Wesolve { n, dim, support, dual_zeros, forbid_all_ones, budget } => {
            let problem = ConstraintProblem { n, dim, support, dual_zeros, forbid_all_ones };
            let sols = solve_constraints(&problem, budget)?;
            println!("SOLUTIONS {}", sols.len());
            for s in &sols {
                println!("SOLUTION {}", s.polynomial());
            }
            Ok(())
        }
        Command::Enum { file, bound, coset } => {
            let l = parse_lattice(&read(&file)?)?;
            let bound = parse_bound(&bound)?;
            let target = match coset {
                Coset::Lattice => None,
                Coset::Shadow => Some(CosetTarget::new(l.shadow()?.shift().clone())),
            };
            let census = enumerate(&l, &bound, target.as_ref(), &cfg)?;
            println!("DIMENSION {}", l.dimension());
            println!("SCALE {}", l.scale());
            println!("BOUND {}/{}", bound.numer(), bound.denom());
            println!("COSET {}", if target.is_some() { "shadow" } else { "lattice" });
            for line in census.report_lines() {
                println!("{line}");
            }
            println!("TOTAL {}", census.total());
            Ok(())
        }
        Command::Neighbors { target, theta_to } => {
            let (name, code, _) = load_target(&target)?;
            print_report(&neighbor_report(&name, &code, theta_to, &cfg)?)
        }
        Command::List => {
            for inst in registry::instances() {
                let e = &inst.expected;
                let mut line = format!(
                    "INSTANCE {} kind {} n {} min_norm {} kissing {} sigma {}",
                    inst.name, inst.kind, inst.length, e.min_norm, e.kissing, e.sigma
                );
                if let Some(d) = e.euclidean_weight {
                    line.push_str(&format!(" euclidean_weight {d}"));
                }
                if let Some(r) = &e.residue {
                    line.push_str(&format!(" residue {}", r.polynomial()));
                }
                line.push_str(if inst.digest_matches() { " digest ok" } else { " digest BAD" });
                println!("{line}");
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_INPUT) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Mismatch) => ExitCode::from(EXIT_MISMATCH),
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_INPUT)
        }
        Err(Failure::Core(e)) => {
            eprintln!("error: {e}");
            match e {
                Error::BudgetExceeded { .. } => ExitCode::from(EXIT_BUDGET),
                _ => ExitCode::from(EXIT_INPUT),
            }
        }
    }
}
