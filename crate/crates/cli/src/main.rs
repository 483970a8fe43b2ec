//! `refined-count`: refined counts of planar tropical curves from the command line.

mod cache;
mod render;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use refined_tropical::analysis::{self, compute_g, Engine, Evaluations};
use refined_tropical::curve::CurveCombinatorics;
use refined_tropical::floor::diagram_census;
use refined_tropical::paths::{LambdaOrder, PathEngine, Side};
use refined_tropical::spec::DegreeSpec;
use refined_tropical::{Error, RefinedPoly};
use serde::Serialize;
use serde_json::json;

use crate::cache::{Cache, CacheKey};
use crate::render::{csv, json_line, json_pretty, row, table, Format};

#[derive(Parser)]
#[command(
    name = "refined-count",
    version,
    about = "Refined counts of planar tropical curves"
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Worker threads for the engines (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum EngineChoice {
    Floor,
    Path,
    Both,
}

#[derive(Subcommand)]
enum Command {
    /// Compute G(g,Δ) for a degree spec.
    Count {
        spec: DegreeSpec,
        #[arg(long, default_value_t = 0)]
        genus: u32,
        /// Defaults to both engines where both apply.
        #[arg(long, value_enum)]
        engine: Option<EngineChoice>,
        #[arg(long, default_value_t = LambdaOrder::default())]
        lambda: LambdaOrder,
        /// Recompute cached values and fail on any difference.
        #[arg(long)]
        verify_cache: bool,
    },
    /// Multiplicities and property checks for one curve file.
    Curve { file: PathBuf },
    /// List the floor diagrams of a degree and genus.
    Diagrams {
        spec: DegreeSpec,
        #[arg(long, default_value_t = 0)]
        genus: u32,
    },
    /// List the lattice paths with their multiplicities.
    Paths {
        spec: DegreeSpec,
        #[arg(long, default_value_t = 0)]
        genus: u32,
        #[arg(long, default_value_t = LambdaOrder::default())]
        lambda: LambdaOrder,
    },
    /// Structural checks on G(g,Δ).
    Analyze {
        spec: DegreeSpec,
        #[arg(long, default_value_t = 0)]
        genus: u32,
    },
    /// Compare all λ-orders and both engines.
    Invariance {
        spec: DegreeSpec,
        #[arg(long, default_value_t = 0)]
        genus: u32,
    },
}

enum Failure {
    /// Exit 1: a check failed or engines disagree.
    Check(String),
    /// Exit 2: bad input.
    Usage(String),
    /// Exit 3: the engine does not handle this degree.
    Unsupported(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::UnsupportedShape | Error::NonPrimitiveDegree => {
                Failure::Unsupported(e.to_string())
            }
            _ => Failure::Usage(e.to_string()),
        }
    }
}

/// Printed output and whether every check passed.
struct Outcome {
    text: String,
    ok: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli.command, cli.format) {
        Ok(out) => {
            print!("{}", out.text);
            ExitCode::from(if out.ok { 0 } else { 1 })
        }
        Err(Failure::Check(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Unsupported(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}

fn run(command: Command, format: Format) -> Result<Outcome, Failure> {
    match command {
        Command::Count {
            spec,
            genus,
            engine,
            lambda,
            verify_cache,
        } => count(&spec, genus, engine, lambda, verify_cache, format),
        Command::Curve { file } => curve(&file, format),
        Command::Diagrams { spec, genus } => diagrams(&spec, genus, format),
        Command::Paths {
            spec,
            genus,
            lambda,
        } => paths(&spec, genus, lambda, format),
        Command::Analyze { spec, genus } => {
            let r = analysis::analyze(&spec, genus)?;
            Ok(Outcome {
                ok: r.all_pass(),
                text: render::report(&r, format),
            })
        }
        Command::Invariance { spec, genus } => {
            let r = analysis::cross_validate(&spec, genus)?;
            Ok(Outcome {
                ok: r.all_pass(),
                text: render::report(&r, format),
            })
        }
    }
}

fn engines_for(spec: &DegreeSpec, choice: Option<EngineChoice>) -> Result<Vec<Engine>, Failure> {
    let floor = spec.floor_shape().is_some();
    let path = spec.degree().is_primitive();
    let unsupported =
        |e: &str| Failure::Unsupported(format!("the {e} engine does not support {spec}"));
    match choice {
        Some(EngineChoice::Floor) if !floor => Err(unsupported("floor")),
        Some(EngineChoice::Path) if !path => Err(unsupported("path")),
        Some(EngineChoice::Both) if !(floor && path) => {
            Err(unsupported(if floor { "path" } else { "floor" }))
        }
        Some(EngineChoice::Floor) => Ok(vec![Engine::Floor]),
        Some(EngineChoice::Path) => Ok(vec![Engine::Path]),
        Some(EngineChoice::Both) => Ok(vec![Engine::Floor, Engine::Path]),
        None => {
            let all: Vec<Engine> = [(floor, Engine::Floor), (path, Engine::Path)]
                .into_iter()
                .filter_map(|(ok, e)| ok.then_some(e))
                .collect();
            if all.is_empty() {
                Err(Failure::Unsupported(format!("no engine supports {spec}")))
            } else {
                Ok(all)
            }
        }
    }
}

fn count(
    spec: &DegreeSpec,
    genus: u32,
    choice: Option<EngineChoice>,
    lambda: LambdaOrder,
    verify: bool,
    format: Format,
) -> Result<Outcome, Failure> {
    let engines = engines_for(spec, choice)?;
    let path = Cache::default_path();
    let mut cache =
        Cache::open(&path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    let key = CacheKey {
        spec: spec.to_string(),
        genus,
    };

    let mut results: Vec<(Engine, RefinedPoly)> = Vec::new();
    for engine in engines {
        let cached = cache.get(&key, engine).cloned();
        let value = match cached {
            Some(v) if !verify => v,
            cached => {
                let fresh = compute_g(spec, genus, engine, lambda)?;
                match cached {
                    Some(old) if old != fresh => {
                        return Err(Failure::Check(format!(
                            "cached {engine} value for {spec} genus {genus} is {old}, recomputed {fresh}"
                        )))
                    }
                    Some(_) => {}
                    None => cache
                        .put(key.clone(), engine, fresh.clone())
                        .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?,
                }
                fresh
            }
        };
        results.push((engine, value));
    }

    let agree = results.windows(2).all(|w| w[0].1 == w[1].1);
    let g = &results[0].1;
    let delta = spec.degree().delta_invariant(genus).ok();
    let ev = Evaluations::of(g);
    let text = match format {
        Format::Json => json_pretty(&json!({
            "spec": spec.to_string(),
            "genus": genus,
            "delta": delta.map(|d| d.to_string()),
            "polynomial": g,
            "text": g.to_string(),
            "at_one": ev.at_one.to_string(),
            "at_minus_one": ev.at_minus_one.as_ref().map(ToString::to_string),
            "results": results.iter().map(|(e, p)| json!({"engine": e, "polynomial": p.to_string()})).collect::<Vec<_>>(),
            "agree": agree,
        })),
        Format::Csv => csv(
            &[
                "spec",
                "genus",
                "engine",
                "delta",
                "polynomial",
                "at_one",
                "at_minus_one",
            ],
            results.iter().map(|(e, p)| {
                let ev = Evaluations::of(p);
                vec![
                    spec.to_string(),
                    genus.to_string(),
                    e.to_string(),
                    delta.map_or(String::new(), |d| d.to_string()),
                    p.to_string(),
                    ev.at_one.to_string(),
                    ev.at_minus_one.map_or(String::new(), |v| v.to_string()),
                ]
            }),
        ),
        Format::Table => {
            let mut rows = vec![
                row("spec", spec),
                row("genus", genus),
                row("delta", delta.map_or("-".to_string(), |d| d.to_string())),
            ];
            if agree {
                rows.push(row("G", g));
                rows.push(row("G(1)", &ev.at_one));
                if let Some(m) = &ev.at_minus_one {
                    rows.push(row("G(-1)", m));
                }
            } else {
                rows.extend(results.iter().map(|(e, p)| row(format!("G [{e}]"), p)));
            }
            let names: Vec<String> = results.iter().map(|(e, _)| e.to_string()).collect();
            rows.push(row("engines", names.join(", ")));
            if results.len() > 1 {
                rows.push(row("agreement", if agree { "yes" } else { "NO" }));
            }
            table(&rows)
        }
    };
    Ok(Outcome { text, ok: agree })
}

fn curve(file: &std::path::Path, format: Format) -> Result<Outcome, Failure> {
    let text = std::fs::read_to_string(file)
        .map_err(|e| Failure::Usage(format!("{}: {e}", file.display())))?;
    let report = CurveCombinatorics::from_json(&text)?.property_report()?;
    let m = &report.multiplicities;
    let verdict = |p: Option<bool>| match p {
        Some(true) => "pass",
        Some(false) => "FAIL",
        None => "n/a",
    };
    let out = match format {
        Format::Json => json_pretty(&json!({
            "mu_complex": m.mu_complex.to_string(),
            "mu_real": m.mu_real.to_string(),
            "refined": m.refined,
            "text": m.refined.to_string(),
            "alpha": m.alpha.to_string(),
            "genus": m.genus,
            "degree": m.degree.to_string(),
            "half_integer_powers": report.half_integer_powers,
            "checks": report.checks,
        })),
        Format::Csv => csv(
            &["check", "result"],
            report.checks.iter().map(|c| vec![c.name, verdict(c.pass)]),
        ),
        Format::Table => {
            let mut rows = vec![
                row("mu_C", &m.mu_complex),
                row("mu_R", &m.mu_real),
                row("G", &m.refined),
                row("alpha", m.alpha),
                row("genus", m.genus),
                row("degree", &m.degree),
            ];
            rows.extend(
                report
                    .checks
                    .iter()
                    .map(|c| row(format!("check {}", c.name), verdict(c.pass))),
            );
            table(&rows)
        }
    };
    Ok(Outcome {
        text: out,
        ok: report.all_pass(),
    })
}

#[derive(Serialize)]
struct DiagramRecord {
    elevators: Vec<[u64; 3]>,
    infinite_down: Vec<u64>,
    infinite_up: Vec<u64>,
    nu: String,
    multiplicity: String,
}

fn diagrams(spec: &DegreeSpec, genus: u32, format: Format) -> Result<Outcome, Failure> {
    let shape = spec
        .floor_shape()
        .ok_or_else(|| Failure::Unsupported(format!("the floor engine does not support {spec}")))?;
    let records: Vec<DiagramRecord> = diagram_census(shape, genus)
        .into_iter()
        .map(|(d, nu, mult)| DiagramRecord {
            elevators: d
                .elevators
                .iter()
                .map(|e| [u64::from(e.lower), u64::from(e.upper), e.weight])
                .collect(),
            infinite_down: d.infinite_down,
            infinite_up: d.infinite_up,
            nu: nu.to_string(),
            multiplicity: mult.to_string(),
        })
        .collect();
    let join = |v: &[u64]| v.iter().map(u64::to_string).collect::<Vec<_>>().join(",");
    let elevators = |r: &DiagramRecord| {
        r.elevators
            .iter()
            .map(|[l, u, w]| format!("{l}-{u}:{w}"))
            .collect::<Vec<_>>()
            .join(",")
    };
    let text = match format {
        Format::Json => records.iter().map(json_line).collect(),
        Format::Csv => csv(
            &[
                "elevators",
                "infinite_down",
                "infinite_up",
                "nu",
                "multiplicity",
            ],
            records.iter().map(|r| {
                vec![
                    elevators(r),
                    join(&r.infinite_down),
                    join(&r.infinite_up),
                    r.nu.clone(),
                    r.multiplicity.clone(),
                ]
            }),
        ),
        Format::Table => records
            .iter()
            .map(|r| {
                format!(
                    "elevators=[{}] down=[{}] up=[{}] nu={} mult={}\n",
                    elevators(r),
                    join(&r.infinite_down),
                    join(&r.infinite_up),
                    r.nu,
                    r.multiplicity
                )
            })
            .collect(),
    };
    Ok(Outcome { text, ok: true })
}

#[derive(Serialize)]
struct PathRecord {
    points: Vec<[i64; 2]>,
    mu_plus: String,
    mu_minus: String,
}

fn paths(
    spec: &DegreeSpec,
    genus: u32,
    lambda: LambdaOrder,
    format: Format,
) -> Result<Outcome, Failure> {
    let deg = spec.degree();
    if !deg.is_primitive() {
        return Err(Error::NonPrimitiveDegree.into());
    }
    let engine = PathEngine::new(deg.dual_polygon(), lambda);
    let list = engine.enumerate(genus)?;
    let records: Vec<PathRecord> = {
        use rayon::prelude::*;
        list.par_iter()
            .map(|p| PathRecord {
                points: p.points.iter().map(|v| [v.x, v.y]).collect(),
                mu_plus: engine.mu(p, Side::Plus).to_string(),
                mu_minus: engine.mu(p, Side::Minus).to_string(),
            })
            .collect()
    };
    let points = |r: &PathRecord| {
        r.points
            .iter()
            .map(|[x, y]| format!("({x},{y})"))
            .collect::<Vec<_>>()
            .join(" ")
    };
    let text = match format {
        Format::Json => records.iter().map(json_line).collect(),
        Format::Csv => csv(
            &["points", "mu_plus", "mu_minus"],
            records
                .iter()
                .map(|r| vec![points(r), r.mu_plus.clone(), r.mu_minus.clone()]),
        ),
        Format::Table => records
            .iter()
            .map(|r| format!("{}  mu+={}  mu-={}\n", points(r), r.mu_plus, r.mu_minus))
            .collect(),
    };
    Ok(Outcome { text, ok: true })
}
