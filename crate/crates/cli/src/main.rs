//! `omegalab`: polymatroid polytopes, derivative spaces and the toric
//! smoothness criterion for homogeneous polynomials.

mod commands;
mod input;

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use omegalab::algebra::ExponentVector;
use omegalab::certify::CertifyOptions;
use omegalab::feasibility::DEFAULT_MAX_PAIRS;
use omegalab::polymatroid::rho_from_support;
use omegalab::polytope::DEFAULT_MAX_LATTICE_SCAN;

use commands::{Output, PolytopeKind, EXIT_USAGE};
use input::{usage, InputError};

#[derive(Parser, Debug)]
#[command(name = "omegalab", version, about = "Toric smoothness certificates for homogeneous polynomials")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Support, M-convexity, rho table, Lorentzian test and derivative spaces.
    Analyze(PolyArgs),
    /// Run the smoothness criterion. Exit 0 smooth-toric, 1 criterion-fails,
    /// 2 not-applicable, 3 undecided, 64 bad input.
    Certify {
        #[command(flatten)]
        poly: PolyArgs,
        #[command(flatten)]
        guards: Guards,
    },
    /// Base, independence or bar polytope of a polymatroid.
    Polytope(PolytopeArgs),
    /// Exchange-axiom test on a support or an explicit point list.
    Mconvex {
        #[command(flatten)]
        poly: OptionalPolyArgs,
        /// Points separated by `;`, coordinates by `,`, e.g. "1,1,0;0,0,2".
        #[arg(long)]
        points: Option<String>,
    },
    /// Lorentzian test with the failing Hessians.
    Lorentzian(PolyArgs),
    /// Hyperbolic rank: the degree of h(e + t v).
    Rank {
        #[command(flatten)]
        poly: PolyArgs,
        /// Comma separated coordinates of e.
        #[arg(long, allow_hyphen_values = true)]
        e: String,
        /// Comma separated coordinates of v.
        #[arg(long, allow_hyphen_values = true)]
        v: String,
    },
    /// Certify random positive polynomials with the support of the input.
    ProbeSmoothable {
        #[command(flatten)]
        poly: PolyArgs,
        #[arg(long, default_value_t = 10)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        guards: Guards,
    },
}

#[derive(Args, Debug)]
struct PolyArgs {
    /// Polynomial, e.g. "x1*x2 + x1*x3 + x2*x3".
    polynomial: Option<String>,
    /// Read the polynomial from a .poly file (lines starting with # are skipped).
    #[arg(long)]
    file: Option<PathBuf>,
    /// Comma separated variable names in coordinate order. Default: the
    /// identifiers of the input, sorted by name and numeric suffix.
    #[arg(long)]
    vars: Option<String>,
}

#[derive(Args, Debug)]
struct OptionalPolyArgs {
    polynomial: Option<String>,
    #[arg(long)]
    file: Option<PathBuf>,
    #[arg(long)]
    vars: Option<String>,
}

#[derive(Args, Debug)]
struct Guards {
    /// S-pair budget per Groebner computation.
    #[arg(long, default_value_t = DEFAULT_MAX_PAIRS)]
    max_pairs: usize,
    /// Largest box scanned when enumerating lattice points.
    #[arg(long, default_value_t = DEFAULT_MAX_LATTICE_SCAN)]
    max_lattice_scan: u64,
    /// Worker threads for the per-face checks.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

impl Guards {
    fn options(&self) -> CertifyOptions {
        CertifyOptions {
            max_pairs: self.max_pairs,
            max_lattice_scan: self.max_lattice_scan,
            jobs: self.jobs.max(1),
            ..CertifyOptions::default()
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum FunctionKind {
    Base,
    Independence,
    Bar,
}

#[derive(Args, Debug)]
struct PolytopeArgs {
    /// Matroid bases as 1-based digit strings, e.g. "12,13,14,23,24,34".
    #[arg(long)]
    matroid: Option<String>,
    /// Ground set size for --matroid when it exceeds the largest element.
    #[arg(long)]
    ground: Option<usize>,
    /// Full value table in bitmask order, e.g. "0,1,1,2".
    #[arg(long)]
    table: Option<String>,
    #[arg(long, value_enum, default_value_t = FunctionKind::Base)]
    function: FunctionKind,
    /// Replace r by S -> min(rank - k, r(S)) first.
    #[arg(long)]
    truncate: Option<i64>,
    /// Use rho of the support of this polynomial.
    polynomial: Option<String>,
    #[arg(long)]
    file: Option<PathBuf>,
    #[arg(long)]
    vars: Option<String>,
}

fn load(p: &PolyArgs) -> Result<(omegalab::algebra::Polynomial, Vec<String>), InputError> {
    input::load_polynomial(p.polynomial.as_deref(), p.file.as_deref(), p.vars.as_deref())
}

fn parse_points(spec: &str) -> Result<BTreeSet<ExponentVector>, InputError> {
    spec.split(';')
        .map(|p| {
            p.split(',')
                .map(|x| x.trim().parse::<u32>().map_err(|_| usage(format!("bad coordinate `{x}`"))))
                .collect::<Result<Vec<u32>, _>>()
                .map(ExponentVector::new)
        })
        .collect()
}

fn run(cli: &Cli) -> Result<Output, InputError> {
    match &cli.command {
        Command::Analyze(p) => {
            let (h, names) = load(p)?;
            commands::analyze(&h, &names)
        }
        Command::Certify { poly, guards } => {
            let (h, names) = load(poly)?;
            commands::certify(&h, &names, &guards.options())
        }
        Command::Polytope(a) => {
            let sources = [a.matroid.is_some(), a.table.is_some(), a.polynomial.is_some() || a.file.is_some()];
            if sources.iter().filter(|&&s| s).count() != 1 {
                return Err(usage("give exactly one of --matroid, --table or a polynomial"));
            }
            let r = if let Some(m) = &a.matroid {
                input::matroid(m, a.ground)?
            } else if let Some(t) = &a.table {
                input::table(t)?
            } else {
                let (h, _) = input::load_polynomial(a.polynomial.as_deref(), a.file.as_deref(), a.vars.as_deref())?;
                rho_from_support(&h.support()).map_err(|e| usage(e.to_string()))?
            };
            let kind = match a.function {
                FunctionKind::Base => PolytopeKind::Base,
                FunctionKind::Independence => PolytopeKind::Independence,
                FunctionKind::Bar => PolytopeKind::Bar,
            };
            commands::polytope(&r, kind, a.truncate)
        }
        Command::Mconvex { poly, points } => {
            let has_poly = poly.polynomial.is_some() || poly.file.is_some();
            let set = match (points, has_poly) {
                (Some(spec), false) => parse_points(spec)?,
                (None, true) => {
                    let (h, _) =
                        input::load_polynomial(poly.polynomial.as_deref(), poly.file.as_deref(), poly.vars.as_deref())?;
                    h.support()
                }
                _ => return Err(usage("give exactly one of --points or a polynomial")),
            };
            commands::mconvex(&set)
        }
        Command::Lorentzian(p) => {
            let (h, _) = load(p)?;
            commands::lorentzian(&h)
        }
        Command::Rank { poly, e, v } => {
            let (h, _) = load(poly)?;
            let e = input::rational_list(e, "--e")?;
            let v = input::rational_list(v, "--v")?;
            commands::rank(&h, &e, &v)
        }
        Command::ProbeSmoothable {
            poly,
            trials,
            seed,
            guards,
        } => {
            let (h, _) = load(poly)?;
            commands::probe(&h.support(), *trials, *seed, &guards.options())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE as u8 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(out) => {
            match cli.format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&out.json).expect("json")),
                Format::Text => print!("{}", out.text),
            }
            ExitCode::from(out.code as u8)
        }
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(EXIT_USAGE as u8)
        }
    }
}
