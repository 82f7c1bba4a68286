//! `toricq`: face lattices, groups, strata, retractions and orbit equivalence of toric
//! spaces given by polytope JSON files or built-in instance names.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use toricq_core::io::{self, ProblemInstance};
use toricq_core::lattice::{gamma_check, gamma_group};
use toricq_core::orbit::{classify_orbit, equivalent, OrbitPoint};
use toricq_core::polytope::{enumerate_faces, FacetSet};
use toricq_core::strata::{build_stratification, local_model};
use toricq_core::{instances, verify, Error, ToricSpace};

const EXIT_VALIDATION: u8 = 2;
const EXIT_NONCONVERGENCE: u8 = 3;
const EXIT_PROPERTY: u8 = 4;
const EXIT_OTHER: u8 = 1;

#[derive(Parser)]
#[command(name = "toricq", version, about = "Toric spaces from arbitrary convex polytopes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Instance JSON file or built-in name (see `toricq instances`).
    instance: String,
    /// Write the JSON report to this file instead of stdout.
    #[arg(long, value_name = "PATH")]
    json: Option<PathBuf>,
    /// Solver tolerance on the moment-map residual.
    #[arg(long)]
    tol: Option<f64>,
    /// Bits used for float shadows of exact data.
    #[arg(long)]
    precision: Option<u32>,
}

#[derive(Subcommand)]
enum Command {
    /// Face counts, depth, quasilattice rank and the Γ_I table.
    Analyze(Common),
    /// Face lattice with index sets, regularity and depths.
    Faces {
        #[command(flatten)]
        common: Common,
        /// Write the Hasse diagram as a DOT digraph.
        #[arg(long, value_name = "PATH")]
        dot: Option<PathBuf>,
    },
    /// Stratification report with charts, links and local models.
    Strata {
        #[command(flatten)]
        common: Common,
        /// Write the strata poset as a DOT digraph.
        #[arg(long, value_name = "PATH")]
        dot: Option<PathBuf>,
    },
    /// Classify the orbit of a point and retract it onto the zero level.
    Retract {
        #[command(flatten)]
        common: Common,
        /// Comma-separated complex coordinates, e.g. "1,0.5+2i".
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
    /// Decide whether two points define the same point of the quotient.
    Equiv {
        #[command(flatten)]
        common: Common,
        /// Two comma-separated complex points.
        #[arg(long, num_args = 2, allow_hyphen_values = true)]
        points: Vec<String>,
    },
    /// Γ_I for a chart, or Γ̌_I for a chart and a face; all charts when none is given.
    Gamma {
        #[command(flatten)]
        common: Common,
        /// Chart index set, e.g. "0,2".
        #[arg(long)]
        chart: Option<String>,
        /// Index set of a face, for the quotient acting on its stratum.
        #[arg(long)]
        face: Option<String>,
    },
    /// Run every property suite with seeded samples.
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// List the built-in instances.
    Instances,
}

/// Failure carrying the exit code and, for library errors, the error JSON.
struct Failure {
    code: u8,
    report: Value,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NonConvergence { .. } => EXIT_NONCONVERGENCE,
            Error::Internal(_) | Error::SignDepthExceeded(_) => EXIT_OTHER,
            _ => EXIT_VALIDATION,
        };
        Failure { code, report: io::error_json(&e) }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure { code: EXIT_OTHER, report: json!({"error": {"kind": "io", "message": format!("{e:#}")}}) }
    }
}

fn load(common: &Common) -> Result<ProblemInstance, Failure> {
    let path = Path::new(&common.instance);
    let mut inst = if path.exists() {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        ProblemInstance::from_str(&text)?
    } else {
        ProblemInstance::builtin(&common.instance)?
    };
    if let Some(t) = common.tol {
        inst.solver.tolerance = t;
    }
    if let Some(p) = common.precision {
        inst.solver.precision = p;
    }
    inst.solver.validate()?;
    Ok(inst)
}

fn space(inst: &ProblemInstance) -> Result<ToricSpace, Failure> {
    Ok(ToricSpace::new(inst.polytope.clone(), inst.solver)?)
}

/// Writes through a temporary file in the target directory, then renames it into place.
fn write_atomic(path: &Path, contents: &str) -> anyhow::Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).with_context(|| format!("creating a file in {}", dir.display()))?;
    tmp.write_all(contents.as_bytes())?;
    tmp.persist(path).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

fn emit(common: &Common, v: &Value) -> Result<(), Failure> {
    let text = io::to_pretty(v);
    match &common.json {
        Some(p) => write_atomic(p, &text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn parse_set(text: &str) -> Result<FacetSet, Failure> {
    let idx = text
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| s.trim().parse::<usize>().map_err(|_| Error::Parse(format!("'{s}' is not a facet index"))))
        .collect::<Result<Vec<_>, _>>()?;
    if idx.iter().any(|&i| i >= 64) {
        return Err(Error::Parse("facet indices must be below 64".into()).into());
    }
    Ok(FacetSet::from_indices(idx))
}

fn point(text: &str) -> Result<OrbitPoint, Failure> {
    Ok(OrbitPoint::from_complex(io::parse_points(text)?))
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Instances => {
            for name in instances::NAMES {
                println!("{name}");
            }
            Ok(())
        }
        Command::Analyze(common) => {
            let inst = load(&common)?;
            let lat = enumerate_faces(&inst.polytope)?;
            emit(&common, &io::analyze_report(&inst.name, &inst.polytope, &lat)?)
        }
        Command::Faces { common, dot } => {
            let inst = load(&common)?;
            let lat = enumerate_faces(&inst.polytope)?;
            if let Some(d) = dot {
                write_atomic(&d, &io::faces_dot(&lat))?;
            }
            emit(&common, &io::faces_json(&inst.polytope, &lat))
        }
        Command::Strata { common, dot } => {
            let inst = load(&common)?;
            let lat = enumerate_faces(&inst.polytope)?;
            let report = build_stratification(&inst.polytope, &lat)?;
            if let Some(d) = dot {
                write_atomic(&d, &io::strata_dot(&report))?;
            }
            let mut v = io::strata_json(&report);
            let models = report
                .singular_strata()
                .filter_map(|s| s.faces.first().copied())
                .map(|f| local_model(&inst.polytope, &report, f).map(|m| io::local_model_json(&m)))
                .collect::<Result<Vec<_>, _>>()?;
            v["local_models"] = Value::Array(models);
            emit(&common, &v)
        }
        Command::Retract { common, point: text } => {
            let inst = load(&common)?;
            let s = space(&inst)?;
            let class = classify_orbit(&s, &point(&text)?)?;
            emit(&common, &io::orbit_class_json(&s, &class))
        }
        Command::Equiv { common, points } => {
            let inst = load(&common)?;
            let s = space(&inst)?;
            let e = equivalent(&s, &point(&points[0])?, &point(&points[1])?)?;
            emit(&common, &io::equivalence_json(&s, &e))
        }
        Command::Gamma { common, chart, face } => {
            let inst = load(&common)?;
            let p = &inst.polytope;
            let lat = enumerate_faces(p)?;
            let v = match (chart, face) {
                (None, None) => io::gamma_table(p, &lat)?,
                (Some(c), None) => io::group_json(&gamma_group(p, parse_set(&c)?)?),
                (Some(c), Some(f)) => {
                    let set = parse_set(&f)?;
                    let face = lat
                        .by_index_set(set)
                        .ok_or_else(|| Error::Precondition(format!("{set} is not the index set of a face")))?;
                    io::group_json(&gamma_check(p, parse_set(&c)?, face)?)
                }
                (None, Some(_)) => return Err(Error::Parse("--face needs --chart".into()).into()),
            };
            emit(&common, &v)
        }
        Command::Verify { common, samples, seed } => {
            let mut inst = load(&common)?;
            if let Some(s) = seed {
                inst.seed = s;
            }
            let report = verify::run(&inst, samples)?;
            emit(&common, &report.to_json())?;
            if report.passed() {
                Ok(())
            } else {
                Err(Failure { code: EXIT_PROPERTY, report: json!({"error": {"kind": "property_failure", "message": "at least one property failed"}}) })
            }
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter("TORICQ_LOG")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            if f.code == EXIT_PROPERTY {
                eprintln!("{}", f.report);
            } else {
                print!("{}", io::to_pretty(&f.report));
            }
            ExitCode::from(f.code)
        }
    }
}
