use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use crtool::io::{self, IoError, IoResult};
use crtool::suite::{run_check, run_suite, Report, SuiteKind, CHECK_IDS};
use crtool_core::classify::classify;
use crtool_core::crframe::levi_report;
use crtool_core::domains::{sample_boundary_point, BoundaryPoint, DomainModel, ModelKind};
use crtool_core::maps::apply_map;
use crtool_core::nu::{nu_estimate, nu_search, NuConfig};
use serde_json::Value;

#[derive(Parser)]
#[command(
    name = "crtool",
    version,
    about = "Levi forms, nu invariants and regularity verdicts for bounded symmetric domain boundaries"
)]
struct Cli {
    /// Seed for every random choice.
    #[arg(long, global = true, env = "CRTOOL_SEED", default_value_t = 0)]
    seed: u64,
    /// Write JSON output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a smooth boundary point.
    Sample(ModelArgs),
    /// Levi signature at a boundary point.
    Levi(PointArgs),
    /// The nu invariant at a boundary point.
    Nu {
        #[command(flatten)]
        point: PointArgs,
        /// Always run the numerical search, even at canonical points.
        #[arg(long)]
        search: bool,
        /// Random starts for the search.
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
    /// Regularity verdict for CR-transversal maps into a model.
    Classify {
        #[arg(long)]
        kind: String,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 0)]
        n: usize,
        /// Positive Levi eigenvalues of the source.
        #[arg(long = "nplus", visible_alias = "n-plus")]
        n_plus: usize,
        /// The map is CR-transversal.
        #[arg(long)]
        transversal: bool,
        /// The source is minimal.
        #[arg(long)]
        minimal: bool,
    },
    /// Apply a map specification to a boundary point.
    Map {
        /// JSON map specification.
        #[arg(long)]
        spec: PathBuf,
        #[command(flatten)]
        point: PointArgs,
    },
    /// Run the verification battery.
    Verify {
        /// `paper` or `quick`.
        #[arg(long, default_value = "paper")]
        suite: String,
        /// Run a single check by id.
        #[arg(long)]
        check: Option<u32>,
    },
}

#[derive(Args)]
struct ModelArgs {
    /// I, II, III, IV or Tube.
    #[arg(long)]
    kind: String,
    #[arg(long)]
    m: usize,
    #[arg(long, default_value_t = 0)]
    n: usize,
    /// Add a Levi-flat line factor.
    #[arg(long)]
    flat_line: bool,
    /// Distance from the canonical points, in [0, 1).
    #[arg(long = "radius", visible_alias = "r", default_value_t = 0.0)]
    r: f64,
}

#[derive(Args)]
struct PointArgs {
    /// JSON point file; when absent a point is sampled from the model flags.
    #[arg(long)]
    point: Option<PathBuf>,
    #[arg(long, required_unless_present = "point")]
    kind: Option<String>,
    #[arg(long, default_value_t = 0)]
    m: usize,
    #[arg(long, default_value_t = 0)]
    n: usize,
    #[arg(long)]
    flat_line: bool,
    #[arg(long = "radius", visible_alias = "r", default_value_t = 0.0)]
    r: f64,
}

fn parse_kind(s: &str) -> IoResult<ModelKind> {
    ModelKind::parse(s).ok_or_else(|| IoError::Format(format!("unknown kind {s}")))
}

fn model(kind: &str, m: usize, n: usize, flat_line: bool) -> IoResult<DomainModel> {
    let d = DomainModel::new(parse_kind(kind)?, m, n)?;
    Ok(if flat_line { d.product_with_line() } else { d })
}

fn resolve(args: &PointArgs, seed: u64) -> IoResult<BoundaryPoint> {
    match (&args.point, &args.kind) {
        (Some(path), _) => io::read_point(path),
        (None, Some(kind)) => Ok(sample_boundary_point(&model(kind, args.m, args.n, args.flat_line)?, seed, args.r)?),
        (None, None) => Err(IoError::Format("give --point or --kind".into())),
    }
}

/// JSON output and whether every check in it passed.
fn run(cli: &Cli) -> IoResult<(Value, bool)> {
    let seed = cli.seed;
    let value = match &cli.command {
        Command::Sample(a) => {
            let d = model(&a.kind, a.m, a.n, a.flat_line)?;
            io::point_to_json(&sample_boundary_point(&d, seed, a.r)?)
        }
        Command::Levi(a) => io::levi_to_json(&levi_report(&resolve(a, seed)?)?)?,
        Command::Nu { point, search, samples } => {
            let p = resolve(point, seed)?;
            let cfg = NuConfig { samples: *samples, seed, ..NuConfig::default() };
            let r = if *search { nu_search(&p, &cfg)? } else { nu_estimate(&p, &cfg)? };
            io::nu_to_json(&r)
        }
        Command::Classify { kind, m, n, n_plus, transversal, minimal } => {
            io::verdict_to_json(&classify(parse_kind(kind)?, *m, *n, *n_plus, *transversal, *minimal)?)
        }
        Command::Map { spec, point } => {
            let spec = io::map_from_json(&serde_json::from_str(&std::fs::read_to_string(spec)?)?)?;
            let image = apply_map(&spec, &resolve(point, seed)?)?;
            io::point_to_json(&image)
        }
        Command::Verify { suite, check } => {
            let kind = SuiteKind::parse(suite).ok_or_else(|| IoError::Format(format!("unknown suite {suite}")))?;
            let report = match check {
                Some(id) if CHECK_IDS.contains(id) => {
                    Report { suite: kind, seed, checks: vec![run_check(*id, kind, seed)] }
                }
                Some(id) => return Err(IoError::Format(format!("no check with id {id}"))),
                None => run_suite(kind, seed),
            };
            for c in &report.checks {
                eprintln!("{}", c.summary_line());
            }
            return Ok((report.to_json(), report.passed()));
        }
    };
    Ok((value, true))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli).and_then(|(v, ok)| io::emit(&v, cli.out.as_deref()).map(|_| ok)) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
