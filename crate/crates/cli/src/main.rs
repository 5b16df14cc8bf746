//! `polyfam`: exact computations on rational polytopes and linear
//! families of polytopes.
//!
//! Every command reads JSON, computes exactly over ℚ, and writes a JSON
//! run report to stdout (or `--out`). Exit codes: 0 success, 2 schema
//! error, 3 domain error, 4 internal assertion (e.g. a uniqueness
//! violation in the anticanonical search).

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use polyfam_core::anticanonical::{
    find_anticanonical, interior_samples, is_anticanonical, is_fano, ray_sum_check,
    translation_equivalent,
};
use polyfam_core::family::{
    fibered_family, gz_family, projected_family, toric_family, ChamberedFamily, FamilyKind,
    LinearFamily,
};
use polyfam_core::json as wire;
use polyfam_core::lattice;
use polyfam_core::num::{parse_rat, Rat};
use polyfam_core::{algebra, facet_lattice_volume, Error as CoreError, Polytope};

#[derive(Parser)]
#[command(name = "polyfam", version, about = "Exact toolkit for linear families of polytopes")]
struct Cli {
    /// Seed for all randomized sampling (linearity certification).
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker count for data-parallel enumeration (default: POLYFAM_JOBS or 1).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Write the run report to this path instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Lattice counts, volumes, facets and Ehrhart data of one polytope.
    Polytope {
        #[command(subcommand)]
        op: PolytopeOp,
    },
    /// Build and evaluate linear families.
    Family {
        #[command(subcommand)]
        op: FamilyOp,
    },
    /// Verify, search and characterize anticanonical parameters.
    Anticanonical {
        #[command(subcommand)]
        op: AnticanOp,
    },
    /// Volume polynomials and the associated graded algebra.
    Algebra {
        #[command(subcommand)]
        op: AlgebraOp,
    },
}

#[derive(Subcommand)]
enum PolytopeOp {
    /// Number of lattice points.
    Count { input: PathBuf },
    /// Number of relative-interior lattice points.
    Interior { input: PathBuf },
    /// Euclidean volume (0 for lower-dimensional polytopes).
    Volume { input: PathBuf },
    /// Facets with normals and lattice-normalized volumes.
    Facets { input: PathBuf },
    /// Ehrhart quasi-polynomial of the given period.
    Ehrhart {
        input: PathBuf,
        #[arg(long, default_value_t = 1)]
        period: u32,
    },
    /// Ehrhart–Macdonald reciprocity check up to the given dilation.
    Reciprocity {
        input: PathBuf,
        #[arg(long, default_value_t = 3)]
        mmax: u32,
    },
}

#[derive(Subcommand)]
enum FamilyOp {
    /// Construct a family: exactly one of --toric/--gz/--fibered/--projected.
    Build {
        /// Fan JSON for the support-number family over its nef cone.
        #[arg(long)]
        toric: Option<PathBuf>,
        /// Gelfand-Zetlin family for GL(n).
        #[arg(long)]
        gz: Option<usize>,
        /// Base family JSON for the fibered construction.
        #[arg(long)]
        fibered: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        multiplicity: u32,
        /// Source cone JSON and projection matrix JSON.
        #[arg(long, num_args = 2)]
        projected: Option<Vec<PathBuf>>,
        /// Also write the bare family JSON here for chaining.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Evaluate Δ(γ).
    Eval {
        family: PathBuf,
        /// Comma-separated rational coordinates, e.g. 0,2,4 or 1/2,3.
        #[arg(long, allow_hyphen_values = true)]
        gamma: String,
        /// Also write the bare polytope JSON here for chaining.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Budgeted certification of Minkowski additivity.
    VerifyLinearity {
        family: PathBuf,
        #[arg(long, default_value_t = 20)]
        budget: u32,
    },
    /// Common normal fan of the family fibers, with its properties.
    Fan {
        family: PathBuf,
        #[arg(long, default_value_t = 12)]
        budget: u32,
    },
}

#[derive(Subcommand)]
enum AnticanOp {
    /// Check N(Δ(γ-κ)) = N(Δ°(γ)) over the budgeted test set.
    Verify {
        family: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        kappa: String,
        #[arg(long, default_value_t = 5)]
        budget: u32,
    },
    /// Scan a lattice box for anticanonical parameters.
    Search {
        family: PathBuf,
        #[arg(long, default_value_t = 3)]
        radius: u32,
        #[arg(long, default_value_t = 5)]
        budget: u32,
    },
    /// Is the (verified) κ in the interior of the parameter cone?
    Fano {
        family: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        kappa: String,
        #[arg(long, default_value_t = 5)]
        budget: u32,
    },
    /// The ray-sum identity ∂_κ vol = Σ facet lattice volumes at samples.
    RaySum {
        family: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        kappa: String,
        #[arg(long, default_value_t = 5)]
        samples: usize,
        /// Linearity certification budget.
        #[arg(long, default_value_t = 12)]
        budget: u32,
    },
}

#[derive(Subcommand)]
enum AlgebraOp {
    /// Interpolated volume polynomial of the family.
    VolumePoly {
        family: PathBuf,
        #[arg(long, default_value_t = 12)]
        budget: u32,
    },
    /// Graded dimensions of the operator algebra of the volume polynomial.
    Dims {
        family: PathBuf,
        #[arg(long, default_value_t = 12)]
        budget: u32,
    },
    /// Do v and w represent the same class (L_{v-w} f = 0)?
    ClassEqual {
        family: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        v: String,
        #[arg(long, allow_hyphen_values = true)]
        w: String,
        #[arg(long, default_value_t = 12)]
        budget: u32,
    },
    /// Is Δ(κ) the sum of the rays of the family fan in the algebra?
    AnticanClass {
        family: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        kappa: String,
        #[arg(long, default_value_t = 12)]
        budget: u32,
    },
}

#[derive(Debug)]
enum CliError {
    /// Malformed input: bad JSON, bad schema, bad vectors. Exit code 2.
    Schema(String),
    /// A well-formed request the mathematics rejects. Exit code 3.
    Domain(CoreError),
    /// Violated internal assertion (budget too small to separate
    /// candidates). Exit code 4.
    Internal(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Schema(_) => 2,
            CliError::Domain(_) => 3,
            CliError::Internal(_) => 4,
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Schema(m) => format!("schema error: {m}"),
            CliError::Domain(e) => format!("domain error: {e}"),
            CliError::Internal(m) => format!("internal assertion: {m}"),
        }
    }
}

/// Domain errors that signal violated internal assertions map to exit 4.
fn domain(e: CoreError) -> CliError {
    match e {
        CoreError::UniquenessViolation(a, b) => CliError::Internal(format!(
            "two anticanonical classes survive the budget: {a:?} and {b:?}"
        )),
        other => CliError::Domain(other),
    }
}

fn schema<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Schema(e.to_string())
}

type CliResult<T> = Result<T, CliError>;

#[derive(Serialize)]
struct RunReport {
    command: String,
    inputs: Value,
    result: Value,
    exact: bool,
    elapsed_ms: u128,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let jobs = cli
        .jobs
        .or_else(|| std::env::var("POLYFAM_JOBS").ok().and_then(|s| s.parse().ok()))
        .unwrap_or(1);
    polyfam_core::set_jobs(jobs);
    if jobs > 1 {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global();
    }
    let start = Instant::now();
    match run(&cli) {
        Ok((command, inputs, result)) => {
            let report = RunReport {
                command,
                inputs,
                result,
                exact: true,
                elapsed_ms: start.elapsed().as_millis(),
            };
            let text = serde_json::to_string_pretty(&report).expect("report serializes");
            match &cli.out {
                Some(path) => {
                    if let Err(e) = std::fs::write(path, text + "\n") {
                        eprintln!("error: cannot write report: {e}");
                        return ExitCode::from(2);
                    }
                }
                None => println!("{text}"),
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> CliResult<T> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| schema(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| schema(format!("{}: {e}", path.display())))
}

fn load_polytope(path: &Path) -> CliResult<Polytope> {
    let j: wire::PolytopeJson = read_json(path)?;
    wire::polytope_from_json(&j).map_err(schema)
}

enum AnyFamily {
    Linear(LinearFamily),
    Chambered(ChamberedFamily),
}

fn load_any_family(path: &Path) -> CliResult<AnyFamily> {
    let j: wire::AnyFamilyJson = read_json(path)?;
    match j {
        wire::AnyFamilyJson::Linear(f) => {
            Ok(AnyFamily::Linear(wire::family_from_json(&f).map_err(schema)?))
        }
        wire::AnyFamilyJson::Chambered(f) => {
            Ok(AnyFamily::Chambered(wire::chambered_from_json(&f).map_err(schema)?))
        }
    }
}

fn load_linear_family(path: &Path) -> CliResult<LinearFamily> {
    match load_any_family(path)? {
        AnyFamily::Linear(f) => Ok(f),
        AnyFamily::Chambered(_) => Err(CliError::Domain(CoreError::InvalidInput(
            "this operation needs a linear family; the input is piecewise (chambered)".into(),
        ))),
    }
}

fn parse_vector(text: &str) -> CliResult<Vec<Rat>> {
    text.split(',')
        .map(|s| parse_rat(s.trim()).map_err(schema))
        .collect()
}

fn certified(family: &LinearFamily, budget: u32, seed: u64) -> CliResult<polyfam_core::family::LinearityVerdict> {
    let v = family.verify_linearity(budget, seed);
    if !v.is_verified() {
        return Err(CliError::Domain(CoreError::LinearityNotCertified));
    }
    Ok(v)
}

fn run(cli: &Cli) -> CliResult<(String, Value, Value)> {
    match &cli.command {
        Command::Polytope { op } => run_polytope(op),
        Command::Family { op } => run_family(op, cli.seed),
        Command::Anticanonical { op } => run_anticanonical(op, cli.seed),
        Command::Algebra { op } => run_algebra(op, cli.seed),
    }
}

fn run_polytope(op: &PolytopeOp) -> CliResult<(String, Value, Value)> {
    match op {
        PolytopeOp::Count { input } => {
            let p = load_polytope(input)?;
            Ok((
                "polytope count".into(),
                json!({"file": input}),
                json!({"count": lattice::count(&p)}),
            ))
        }
        PolytopeOp::Interior { input } => {
            let p = load_polytope(input)?;
            Ok((
                "polytope interior".into(),
                json!({"file": input}),
                json!({"interior": lattice::count_interior(&p)}),
            ))
        }
        PolytopeOp::Volume { input } => {
            let p = load_polytope(input)?;
            Ok((
                "polytope volume".into(),
                json!({"file": input}),
                json!({"volume": polyfam_core::num::format_rat(&p.volume())}),
            ))
        }
        PolytopeOp::Facets { input } => {
            let p = load_polytope(input)?;
            let facets = p.facets().map_err(domain)?;
            let mut out = Vec::new();
            for (normal, facet) in &facets {
                let lv = facet_lattice_volume(facet, normal).map_err(domain)?;
                out.push(json!({
                    "normal": normal.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                    "lattice_volume": polyfam_core::num::format_rat(&lv),
                    "polytope": serde_json::to_value(wire::polytope_to_json(facet).map_err(domain)?).unwrap(),
                }));
            }
            Ok((
                "polytope facets".into(),
                json!({"file": input}),
                json!({"count": facets.len(), "facets": out}),
            ))
        }
        PolytopeOp::Ehrhart { input, period } => {
            let p = load_polytope(input)?;
            let q = lattice::ehrhart(&p, *period).map_err(domain)?;
            Ok((
                "polytope ehrhart".into(),
                json!({"file": input, "period": period}),
                json!({
                    "count": lattice::count(&p),
                    "interior": lattice::count_interior(&p),
                    "ehrhart": serde_json::to_value(wire::ehrhart_to_json(&q)).unwrap(),
                }),
            ))
        }
        PolytopeOp::Reciprocity { input, mmax } => {
            let p = load_polytope(input)?;
            let ok = lattice::check_reciprocity(&p, *mmax).map_err(domain)?;
            Ok((
                "polytope reciprocity".into(),
                json!({"file": input, "mmax": mmax}),
                json!({"ok": ok}),
            ))
        }
    }
}

fn run_family(op: &FamilyOp, seed: u64) -> CliResult<(String, Value, Value)> {
    match op {
        FamilyOp::Build { toric, gz, fibered, multiplicity, projected, output } => {
            let chosen = [toric.is_some(), gz.is_some(), fibered.is_some(), projected.is_some()]
                .iter()
                .filter(|&&b| b)
                .count();
            if chosen != 1 {
                return Err(schema(
                    "family build takes exactly one of --toric, --gz, --fibered, --projected",
                ));
            }
            let (inputs, family_value) = if let Some(fan_path) = toric {
                let fan = wire::fan_from_json(&read_json(fan_path)?).map_err(schema)?;
                let fam = toric_family(&fan).map_err(domain)?;
                (
                    json!({"toric": fan_path}),
                    serde_json::to_value(wire::family_to_json(&fam).map_err(domain)?).unwrap(),
                )
            } else if let Some(n) = gz {
                let fam = gz_family(*n).map_err(domain)?;
                (
                    json!({"gz": n}),
                    serde_json::to_value(wire::family_to_json(&fam).map_err(domain)?).unwrap(),
                )
            } else if let Some(base_path) = fibered {
                let base = load_linear_family(base_path)?;
                let n = base.ambient_dim();
                let fam = fibered_family(&base, n, *multiplicity).map_err(domain)?;
                (
                    json!({"fibered": base_path, "multiplicity": multiplicity}),
                    serde_json::to_value(wire::family_to_json(&fam).map_err(domain)?).unwrap(),
                )
            } else {
                let paths = projected.as_ref().expect("checked above");
                #[derive(serde::Deserialize)]
                struct SourceCone {
                    space_dim: usize,
                    hrep: Vec<Vec<i64>>,
                }
                let cone: SourceCone = read_json(&paths[0])?;
                let matrix: Vec<Vec<String>> = read_json(&paths[1])?;
                let projection: Vec<Vec<Rat>> = matrix
                    .iter()
                    .map(|row| row.iter().map(|s| parse_rat(s).map_err(schema)).collect())
                    .collect::<CliResult<_>>()?;
                let hrep = cone
                    .hrep
                    .iter()
                    .map(|r| r.iter().map(|&x| polyfam_core::Int::from(x)).collect())
                    .collect();
                let fam =
                    projected_family(cone.space_dim, hrep, projection).map_err(domain)?;
                (
                    json!({"projected": paths}),
                    serde_json::to_value(wire::chambered_to_json(&fam).map_err(domain)?).unwrap(),
                )
            };
            if let Some(path) = output {
                let text = serde_json::to_string_pretty(&family_value).expect("serializes");
                std::fs::write(path, text + "\n")
                    .map_err(|e| schema(format!("cannot write {}: {e}", path.display())))?;
            }
            Ok(("family build".into(), inputs, family_value))
        }
        FamilyOp::Eval { family, gamma, output } => {
            let g = parse_vector(gamma)?;
            let p = match load_any_family(family)? {
                AnyFamily::Linear(f) => f.evaluate(&g).map_err(domain)?,
                AnyFamily::Chambered(f) => f.evaluate(&g).map_err(domain)?,
            };
            let pj = serde_json::to_value(wire::polytope_to_json(&p).map_err(domain)?).unwrap();
            if let Some(path) = output {
                let text = serde_json::to_string_pretty(&pj).expect("serializes");
                std::fs::write(path, text + "\n")
                    .map_err(|e| schema(format!("cannot write {}: {e}", path.display())))?;
            }
            Ok((
                "family eval".into(),
                json!({"file": family, "gamma": gamma}),
                json!({
                    "polytope": pj,
                    "count": lattice::count(&p),
                    "interior": lattice::count_interior(&p),
                }),
            ))
        }
        FamilyOp::VerifyLinearity { family, budget } => {
            let result = match load_any_family(family)? {
                AnyFamily::Linear(f) => {
                    let v = f.verify_linearity(*budget, seed);
                    serde_json::to_value(wire::linearity_verdict_to_json(&v)).unwrap()
                }
                AnyFamily::Chambered(f) => {
                    let chambers: Vec<Value> = f
                        .verify_chambers(*budget, seed)
                        .iter()
                        .map(|v| serde_json::to_value(wire::linearity_verdict_to_json(v)).unwrap())
                        .collect();
                    let global = f.verify_global(2 * *budget, seed);
                    json!({
                        "chambers": chambers,
                        "global": serde_json::to_value(wire::linearity_verdict_to_json(&global)).unwrap(),
                    })
                }
            };
            Ok((
                "family verify-linearity".into(),
                json!({"file": family, "budget": budget}),
                result,
            ))
        }
        FamilyOp::Fan { family, budget } => {
            let f = load_linear_family(family)?;
            let cert = certified(&f, *budget, seed)?;
            let fan = polyfam_core::family::family_fan(&f, &cert).map_err(domain)?;
            let props = fan.properties();
            Ok((
                "family fan".into(),
                json!({"file": family, "budget": budget}),
                json!({
                    "fan": serde_json::to_value(wire::fan_to_json(&fan).map_err(domain)?).unwrap(),
                    "properties": serde_json::to_value(wire::fan_properties_to_json(props)).unwrap(),
                }),
            ))
        }
    }
}

fn run_anticanonical(op: &AnticanOp, seed: u64) -> CliResult<(String, Value, Value)> {
    match op {
        AnticanOp::Verify { family, kappa, budget } => {
            let f = load_linear_family(family)?;
            let k = parse_vector(kappa)?;
            let v = is_anticanonical(&f, &k, *budget).map_err(domain)?;
            Ok((
                "anticanonical verify".into(),
                json!({"file": family, "kappa": kappa, "budget": budget}),
                serde_json::to_value(wire::anticanonical_verdict_to_json(&v)).unwrap(),
            ))
        }
        AnticanOp::Search { family, radius, budget } => {
            let f = load_linear_family(family)?;
            let found = find_anticanonical(&f, *radius, *budget).map_err(domain)?;
            let candidates: Vec<Vec<String>> = found
                .iter()
                .map(|k| k.iter().map(polyfam_core::num::format_rat).collect())
                .collect();
            let mut result = json!({
                "candidates": candidates,
                "uniqueness_ok": true,
            });
            // Fibered families carry a comparison against the claimed
            // all-ones parameter of the group-compactification picture.
            if let FamilyKind::Fibered { .. } = f.kind() {
                let claimed = vec![Rat::from_integer(1.into()); f.param_dim()];
                let matches = match found.first() {
                    Some(k) => translation_equivalent(&f, k, &claimed).map_err(domain)?,
                    None => false,
                };
                result["claimed_reference"] = json!(claimed
                    .iter()
                    .map(polyfam_core::num::format_rat)
                    .collect::<Vec<_>>());
                result["matches_claimed"] = json!(matches);
                result["note"] = json!(if matches {
                    "agrees with the claimed all-ones parameter"
                } else {
                    "discrepancy with the claimed all-ones parameter"
                });
            }
            Ok((
                "anticanonical search".into(),
                json!({"file": family, "radius": radius, "budget": budget}),
                result,
            ))
        }
        AnticanOp::Fano { family, kappa, budget } => {
            let f = load_linear_family(family)?;
            let k = parse_vector(kappa)?;
            let verdict = is_anticanonical(&f, &k, *budget).map_err(domain)?;
            let fano = is_fano(&f, &k);
            Ok((
                "anticanonical fano".into(),
                json!({"file": family, "kappa": kappa, "budget": budget}),
                json!({
                    "fano": fano,
                    "verification": serde_json::to_value(wire::anticanonical_verdict_to_json(&verdict)).unwrap(),
                }),
            ))
        }
        AnticanOp::RaySum { family, kappa, samples, budget } => {
            let f = load_linear_family(family)?;
            let k = parse_vector(kappa)?;
            let cert = certified(&f, *budget, seed)?;
            let pts = interior_samples(&f, *samples);
            let ok = ray_sum_check(&f, &cert, &k, &pts).map_err(domain)?;
            Ok((
                "anticanonical ray-sum".into(),
                json!({"file": family, "kappa": kappa, "samples": samples}),
                json!({
                    "ok": ok,
                    "samples": pts
                        .iter()
                        .map(|g| g.iter().map(polyfam_core::num::format_rat).collect::<Vec<_>>())
                        .collect::<Vec<_>>(),
                }),
            ))
        }
    }
}

fn run_algebra(op: &AlgebraOp, seed: u64) -> CliResult<(String, Value, Value)> {
    match op {
        AlgebraOp::VolumePoly { family, budget } => {
            let f = load_linear_family(family)?;
            let cert = certified(&f, *budget, seed)?;
            let poly = algebra::volume_polynomial(&f, &cert).map_err(domain)?;
            Ok((
                "algebra volume-poly".into(),
                json!({"file": family}),
                serde_json::to_value(wire::polynomial_to_json(&poly)).unwrap(),
            ))
        }
        AlgebraOp::Dims { family, budget } => {
            let f = load_linear_family(family)?;
            let cert = certified(&f, *budget, seed)?;
            let poly = algebra::volume_polynomial(&f, &cert).map_err(domain)?;
            let summary = algebra::graded_dimensions(&poly).map_err(domain)?;
            Ok((
                "algebra dims".into(),
                json!({"file": family}),
                serde_json::to_value(wire::graded_summary_to_json(&summary)).unwrap(),
            ))
        }
        AlgebraOp::ClassEqual { family, v, w, budget } => {
            let f = load_linear_family(family)?;
            let cert = certified(&f, *budget, seed)?;
            let poly = algebra::volume_polynomial(&f, &cert).map_err(domain)?;
            let vv = parse_vector(v)?;
            let ww = parse_vector(w)?;
            if vv.len() != poly.num_vars() || ww.len() != poly.num_vars() {
                return Err(schema("class vectors must match the parameter dimension"));
            }
            let ok = algebra::class_equal(&poly, &vv, &ww);
            Ok((
                "algebra class-equal".into(),
                json!({"file": family, "v": v, "w": w}),
                json!({"ok": ok}),
            ))
        }
        AlgebraOp::AnticanClass { family, kappa, budget } => {
            let f = load_linear_family(family)?;
            let k = parse_vector(kappa)?;
            let cert = certified(&f, *budget, seed)?;
            let ok = algebra::anticanonical_class_check(&f, &cert, &k).map_err(domain)?;
            Ok((
                "algebra antican-class".into(),
                json!({"file": family, "kappa": kappa}),
                json!({"ok": ok}),
            ))
        }
    }
}
