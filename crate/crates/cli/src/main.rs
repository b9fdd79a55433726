//! attrkit command-line front end.

mod commands;
mod render;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use attrkit::io::{load_geometry, parse_matrix, read};
use attrkit::rational::parse_q;
use attrkit::{Error, Q};

use commands::Outcome;

#[derive(Debug, Parser)]
#[command(name = "attrkit", version)]
#[command(about = "Attractor, Bogomolov and c3 checks for charges on Calabi-Yau threefolds")]
struct Cli {
    /// Geometry: a JSON file, a preset name, or <name>.json under ATTRKIT_GEOMETRY_DIR.
    #[arg(long, global = true, default_value = "quintic")]
    geometry: String,

    /// Machine-readable output (JSON) on stdout.
    #[arg(long, global = true)]
    json: bool,

    /// Include the ζ(3)χ correction in central charges.
    #[arg(long, global = true)]
    corrections: bool,

    /// Constant C of the speculative c3 bound.
    #[arg(long, global = true, value_parser = parse_rational)]
    const_c: Option<Q>,

    /// Symmetric matrix A of the charge map, as a JSON file of rows.
    #[arg(long, global = true)]
    a_matrix: Option<PathBuf>,

    /// Maximum number of records added by `closure`.
    #[arg(long, global = true, default_value_t = 16)]
    budget: usize,

    /// Final barrier weight of the minimizer, relative to the starting value.
    #[arg(long, global = true, default_value_t = 1e-12)]
    tol: f64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Full report for a record: Bogomolov, attractor point, c3 bounds.
    Check {
        /// Chern record JSON, or a surface-bundle record with --divisor.
        record: PathBuf,
        /// Divisor carrying a surface-bundle record.
        #[arg(long, value_parser = parse_vec)]
        divisor: Option<Class>,
    },
    /// Numerically minimize |Z|²/∫J³ from a starting point.
    Minimize {
        record: PathBuf,
        #[arg(long = "start-b", value_parser = parse_vec)]
        start_b: Option<Class>,
        #[arg(long = "start-j", value_parser = parse_vec)]
        start_j: Option<Class>,
    },
    /// Named constructions.
    Catalog {
        #[command(subcommand)]
        which: CatalogCommand,
    },
    /// Closure of a set of charges under bound-state sums.
    Closure {
        /// JSON list of Chern records.
        seeds: PathBuf,
        #[arg(long = "b", value_parser = parse_vec)]
        b: Option<Class>,
        #[arg(long = "j", value_parser = parse_vec)]
        j: Class,
    },
    /// Bound entries for a record, with optional polarizations for the ample form.
    Bounds {
        record: PathBuf,
        /// Ample class for the c3 bound; repeatable. Defaults to each ample cone ray.
        #[arg(long = "w", value_parser = parse_vec)]
        w: Vec<Class>,
    },
    /// Pushforward of a bundle on a divisor.
    Push {
        /// Surface-bundle record JSON.
        surface: PathBuf,
        #[arg(long, value_parser = parse_vec)]
        divisor: Class,
    },
    /// Index bounds for a bundle on a surface.
    SurfaceBounds {
        /// Surface bound input JSON.
        input: PathBuf,
    },
}

#[derive(Debug, Subcommand)]
enum CatalogCommand {
    /// Tangent bundle of the quintic.
    TangentQuintic,
    /// Monad bundle with c1 = 0.
    Monad {
        #[arg(long, default_value_t = 3)]
        r: i64,
        #[arg(long)]
        n: i64,
    },
    /// Rank-3 kernel of O^4 → O(1) on the quintic.
    Jardim,
    /// Kernel of O(qJ)^p → O(pJ)^q.
    Extension {
        #[arg(long)]
        p: i64,
        #[arg(long)]
        q: i64,
        /// Polarization J; defaults to the first basis class.
        #[arg(long = "j", value_parser = parse_vec)]
        j: Option<Class>,
    },
}

fn parse_rational(s: &str) -> Result<Q, String> {
    parse_q(s).map_err(|e| e.to_string())
}

/// A class given by its coefficients, e.g. `1,1/2` or `[1, "1/2"]`.
#[derive(Debug, Clone)]
pub struct Class(pub Vec<Q>);

fn parse_vec(s: &str) -> Result<Class, String> {
    attrkit::io::parse_vector(s).map(Class).map_err(|e| e.to_string())
}

fn inner(c: &Option<Class>) -> Option<&[Q]> {
    c.as_ref().map(|c| c.0.as_slice())
}

pub struct Settings {
    pub corrections: bool,
    pub const_c: Option<Q>,
    pub a_matrix: Option<Vec<Vec<Q>>>,
    pub budget: usize,
    pub tol: f64,
}

fn run(cli: Cli) -> Result<Outcome, Error> {
    let g = load_geometry(&cli.geometry)?;
    let a_matrix = cli.a_matrix.as_deref().map(|p| read(p).and_then(|t| parse_matrix(&t))).transpose()?;
    let settings = Settings {
        corrections: cli.corrections,
        const_c: cli.const_c,
        a_matrix,
        budget: cli.budget,
        tol: cli.tol,
    };
    match cli.command {
        Command::Check { record, divisor } => commands::check(&g, &read(&record)?, inner(&divisor), &settings),
        Command::Minimize { record, start_b, start_j } => {
            commands::minimize(&g, &read(&record)?, inner(&start_b), inner(&start_j), &settings)
        }
        Command::Catalog { which } => match which {
            CatalogCommand::TangentQuintic => commands::catalog_tangent(&g, &settings),
            CatalogCommand::Monad { r, n } => commands::catalog_monad(&g, r, n, &settings),
            CatalogCommand::Jardim => commands::catalog_jardim(&g, &settings),
            CatalogCommand::Extension { p, q, j } => commands::catalog_extension(&g, p, q, j.map(|c| c.0), &settings),
        },
        Command::Closure { seeds, b, j } => commands::closure(&g, &read(&seeds)?, inner(&b), &j.0, &settings),
        Command::Bounds { record, w } => commands::bounds(&g, &read(&record)?, &w.into_iter().map(|c| c.0).collect::<Vec<_>>(), &settings),
        Command::Push { surface, divisor } => commands::push(&g, &read(&surface)?, &divisor.0),
        Command::SurfaceBounds { input } => commands::surface_bounds(&read(&input)?),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json = cli.json;
    match run(cli) {
        Ok(out) => {
            let text = if json {
                format!("{}\n", serde_json::to_string_pretty(&out.json).expect("reports serialize"))
            } else {
                out.text
            };
            // A closed pipe downstream is not an error of ours.
            let _ = std::io::stdout().lock().write_all(text.as_bytes());
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(commands::INPUT_ERROR)
        }
    }
}
