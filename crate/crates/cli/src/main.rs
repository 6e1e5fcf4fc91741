//! `skewc`: verify, search, construct, STPP tools, rendering and the
//! reproduction suite.
//!
//! Exit codes: 0 success, 1 predicate fails or a criterion is red, 2 usage
//! or input error, 3 search budget exhausted.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use skewcorner::constructions::{
    avgbad_construction, behrend_3ap_free, is_3ap_free, is_primitive,
    line_trapezoid_violation, petrov_construction, primitive_set, LineTriple, PrimitiveStrategy,
};
use skewcorner::grid_sets::{
    bi_skew_corner_violation, skew_corner_violation, tri_corner_violation, tri_skew_corner_violation, GridSet,
    TriSet,
};
use skewcorner::groups::{
    count_zero_sum_triples, induced_matching_from_3apfree, is_triforce_free_triple, trapezoid_violation,
    AbelianGroup, GroupElem, GroupTriple,
};
use skewcorner::render;
use skewcorner::report::{to_sorted_json, RunReport};
use skewcorner::repro::{run_criterion, ReproOptions, CRITERIA};
use skewcorner::search::{
    greedy_heuristic, max_bi_skew_exact, max_skew_grid_exact, max_skew_tri_exact, val_group_exact, val_plane_exact,
    Budget, Instance, Objective, SearchResult, Status, Symmetry, DEFAULT_GROUP_CAP,
};
use skewcorner::stpp::{
    lift_sdpp_to_stpp, omega_bound, packing_bound_check, stpp_to_trapezoid_witness, SdppFile, StppFile,
    StppTriple, Verified,
};
use skewcorner::textio::{self, Certificate};
use skewcorner::Error;

#[derive(Parser)]
#[command(name = "skewc", version, about = "Skew corner-free sets, trapezoid-free triples and STPP families")]
struct Cli {
    /// Print a JSON run report on stdout instead of text.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a certificate file against a predicate.
    Verify {
        file: PathBuf,
        /// Defaults to the natural predicate for the file's kind.
        #[arg(long, value_enum)]
        predicate: Option<Predicate>,
    },
    /// Exact (or heuristic) search for an extremal set.
    Search(SearchArgs),
    /// Build an explicit construction.
    Construct {
        #[arg(value_enum)]
        name: Construction,
        #[arg(long)]
        n: u32,
        /// Primitive-set strategy: half_interval, best_of or fixed_prime_count:K.
        #[arg(long, default_value = "best_of")]
        strategy: String,
        /// Write the point set (or triple) to this file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Operations on STPP / SDPP family files.
    Stpp {
        #[arg(value_enum)]
        op: StppOp,
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Draw a point-set file.
    Render {
        #[arg(value_enum)]
        format: RenderFormat,
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the acceptance suite and emit one consolidated report.
    Repro {
        /// Run only these criteria (repeatable).
        #[arg(long = "criterion")]
        criteria: Vec<u32>,
        #[arg(long, default_value_t = 2024)]
        seed: u64,
        #[arg(long, env = "SKEWC_WORKERS", default_value_t = 1)]
        workers: usize,
        /// Write the JSON report to this file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(clap::Args)]
struct SearchArgs {
    /// max-skew-grid, max-skew-tri, max-bi-skew, val-plane or val-group.
    objective: String,
    #[arg(long)]
    n: Option<u32>,
    /// Group literal for val-group, e.g. Z2xZ4.
    #[arg(long)]
    group: Option<String>,
    #[arg(long, default_value = "none")]
    symmetry: String,
    #[arg(long, env = "SKEWC_BUDGET_NODES", default_value_t = 100_000_000)]
    budget_nodes: u64,
    #[arg(long, env = "SKEWC_BUDGET_SECS", default_value_t = 600.0)]
    budget_secs: f64,
    #[arg(long, env = "SKEWC_WORKERS", default_value_t = 1)]
    workers: usize,
    /// Largest group order val-group accepts.
    #[arg(long, default_value_t = DEFAULT_GROUP_CAP)]
    group_cap: usize,
    /// Use the randomised greedy heuristic instead of exact search.
    #[arg(long)]
    heuristic: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 8)]
    restarts: usize,
    /// Write the result JSON to this file.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write the witness in the point-set text format to this file.
    #[arg(long)]
    witness: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Predicate {
    SkewGrid,
    BiSkew,
    SkewTri,
    Corner,
    LineTrapezoid,
    Triforce,
    Trapezoid,
}

#[derive(Clone, Copy, ValueEnum)]
enum Construction {
    Petrov,
    Primitive,
    Behrend,
    Avgbad,
    Matching,
}

#[derive(Clone, Copy, ValueEnum)]
enum StppOp {
    Verify,
    Omega,
    Lift,
    Witness,
}

#[derive(Clone, Copy, ValueEnum)]
enum RenderFormat {
    Svg,
    TextArt,
}

/// What a command produced, before printing.
struct Run {
    report: RunReport,
    text: String,
    code: u8,
}

impl Run {
    fn new(inputs: Value) -> Self {
        Run {
            report: RunReport::new(std::env::args().collect(), inputs),
            text: String::new(),
            code: 0,
        }
    }

    fn say(&mut self, line: impl AsRef<str>) {
        self.text.push_str(line.as_ref());
        self.text.push('\n');
    }
}

type CmdResult = Result<Run, Error>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let result = match cli.command {
        Command::Verify { file, predicate } => cmd_verify(&file, predicate),
        Command::Search(args) => cmd_search(&args),
        Command::Construct { name, n, strategy, out } => cmd_construct(name, n, &strategy, out.as_deref()),
        Command::Stpp { op, file, out } => cmd_stpp(op, &file, out.as_deref()),
        Command::Render { format, file, out } => cmd_render(format, &file, out.as_deref(), cli.json),
        Command::Repro {
            criteria,
            seed,
            workers,
            out,
        } => cmd_repro(&criteria, seed, workers, out.as_deref()),
    };
    match result {
        Ok(mut run) => {
            run.report.timings.insert("total_seconds".into(), start.elapsed().as_secs_f64());
            let body = if cli.json { run.report.to_json() + "\n" } else { run.text };
            // a closed pipe (e.g. `| head`) is not an error worth reporting
            let _ = std::io::stdout().write_all(body.as_bytes());
            ExitCode::from(run.code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn read(path: &Path) -> Result<String, Error> {
    fs::read_to_string(path).map_err(|e| Error::Precondition(format!("cannot read {}: {e}", path.display())))
}

fn write(path: &Path, contents: &str) -> Result<(), Error> {
    fs::write(path, contents).map_err(|e| Error::Precondition(format!("cannot write {}: {e}", path.display())))
}

fn json_error(e: serde_json::Error) -> Error {
    Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    }
}

/// Certificates come either in the text format or as a search result JSON.
fn load_certificate(text: &str) -> Result<Certificate, Error> {
    if !text.trim_start().starts_with('{') {
        return textio::load(text);
    }
    let v: Value = serde_json::from_str(text).map_err(json_error)?;
    let w = v.get("witness").unwrap_or(&v);
    let bad = |what: &str| Error::Precondition(format!("search result witness: {what}"));
    let nums = |key: &str| -> Result<Vec<u32>, Error> {
        serde_json::from_value(w.get(key).cloned().unwrap_or(Value::Null)).map_err(|_| bad(key))
    };
    let n = || w.get("n").and_then(Value::as_u64).map(|n| n as u32).ok_or_else(|| bad("n"));
    match w.get("kind").and_then(Value::as_str) {
        Some("grid") => {
            let pts: Vec<[u32; 2]> = serde_json::from_value(w["points"].clone()).map_err(|_| bad("points"))?;
            Ok(Certificate::Grid(GridSet::from_points(n()?, pts.into_iter().map(|[x, y]| (x, y)))?))
        }
        Some("tri") => {
            let pts: Vec<[u32; 3]> = serde_json::from_value(w["points"].clone()).map_err(|_| bad("points"))?;
            Ok(Certificate::Tri(TriSet::from_points(n()?, pts.into_iter().map(|[a, b, c]| (a, b, c)))?))
        }
        Some("lines") => Ok(Certificate::Lines(LineTriple::new(n()?, nums("A")?, nums("B")?, nums("C")?)?)),
        Some("group") => {
            let g: AbelianGroup = w["group"].as_str().ok_or_else(|| bad("group"))?.parse()?;
            let part = |key: &str| -> Result<Vec<usize>, Error> {
                let elems: Vec<Vec<u32>> =
                    serde_json::from_value(w.get(key).cloned().unwrap_or(Value::Null)).map_err(|_| bad(key))?;
                elems.into_iter().map(|r| g.index_of(&GroupElem::new(r))).collect()
            };
            Ok(Certificate::Group(GroupTriple::from_indices(g.clone(), part("A")?, part("B")?, part("C")?)?))
        }
        _ => Err(bad("unknown kind")),
    }
}

fn cmd_verify(file: &Path, predicate: Option<Predicate>) -> CmdResult {
    let cert = load_certificate(&read(file)?)?;
    let predicate = predicate.unwrap_or(match cert {
        Certificate::Grid(_) => Predicate::SkewGrid,
        Certificate::Tri(_) => Predicate::SkewTri,
        Certificate::Lines(_) => Predicate::LineTrapezoid,
        Certificate::Group(_) => Predicate::Trapezoid,
    });
    let name = predicate.to_possible_value().expect("no skipped variants").get_name().to_string();
    let violation: Option<String> = match (&cert, predicate) {
        (Certificate::Grid(s), Predicate::SkewGrid) => skew_corner_violation(s).map(|v| v.to_string()),
        (Certificate::Grid(s), Predicate::BiSkew) => bi_skew_corner_violation(s).map(|v| v.to_string()),
        (Certificate::Tri(s), Predicate::SkewTri) => tri_skew_corner_violation(s).map(|v| v.to_string()),
        (Certificate::Tri(s), Predicate::Corner) => tri_corner_violation(s).map(|v| v.to_string()),
        (Certificate::Lines(t), Predicate::LineTrapezoid) => line_trapezoid_violation(t).map(|v| v.to_string()),
        (Certificate::Lines(t), Predicate::Triforce) => {
            (!is_triforce_free_triple(&t.a, &t.b, &t.c, t.n)).then(|| "solution set contains a corner".to_string())
        }
        (Certificate::Group(t), Predicate::Trapezoid) => trapezoid_violation(t).map(|v| {
            format!(
                "system {:?} with fixed pair {:?} has solutions {:?} and {:?}",
                v.system, v.fixed, v.solutions[0], v.solutions[1]
            )
        }),
        _ => {
            return Err(Error::Precondition(format!(
                "predicate {name} does not apply to a {} file",
                cert.kind()
            )))
        }
    };
    let size = match &cert {
        Certificate::Grid(s) => s.len() as u64,
        Certificate::Tri(s) => s.len() as u64,
        Certificate::Lines(t) => t.solution_count() as u64,
        Certificate::Group(t) => count_zero_sum_triples(t),
    };
    let mut run = Run::new(json!({"file": file.display().to_string(), "predicate": name, "kind": cert.kind()}));
    run.report.outputs = json!({"holds": violation.is_none(), "violation": violation, "size": size});
    match &violation {
        None => run.say(format!("{name}: holds (size {size})")),
        Some(v) => {
            run.say(format!("{name}: fails: {v}"));
            run.code = 1;
        }
    }
    Ok(run)
}

fn run_search(args: &SearchArgs) -> Result<SearchResult, Error> {
    let objective: Objective = args.objective.parse()?;
    let symmetry: Symmetry = args.symmetry.parse()?;
    let instance = match (objective, args.n, &args.group) {
        (Objective::ValGroup, None, Some(g)) => Instance::Group(g.parse()?),
        (Objective::ValGroup, _, _) => return Err(Error::Precondition("val-group needs --group (and no --n)".into())),
        (_, Some(n), None) => Instance::Size(n),
        _ => return Err(Error::Precondition(format!("{objective} needs --n (and no --group)"))),
    };
    if symmetry == Symmetry::S3 && objective != Objective::MaxSkewTri {
        return Err(Error::Precondition("--symmetry s3 applies to max-skew-tri only".into()));
    }
    if args.heuristic {
        return greedy_heuristic(objective, &instance, symmetry, args.seed, args.restarts);
    }
    let budget = Budget::new(args.budget_nodes, args.budget_secs, args.workers)?;
    match (objective, &instance) {
        (Objective::MaxSkewGrid, &Instance::Size(n)) => max_skew_grid_exact(n, &budget),
        (Objective::MaxBiSkew, &Instance::Size(n)) => max_bi_skew_exact(n, &budget),
        (Objective::MaxSkewTri, &Instance::Size(n)) => max_skew_tri_exact(n, symmetry, &budget),
        (Objective::ValPlane, &Instance::Size(n)) => val_plane_exact(n, &budget),
        (Objective::ValGroup, Instance::Group(g)) => val_group_exact(g, args.group_cap, &budget),
        _ => unreachable!("instance kind checked above"),
    }
}

fn cmd_search(args: &SearchArgs) -> CmdResult {
    let r = run_search(args)?;
    r.check_witness()?;
    let mut run = Run::new(json!({
        "objective": args.objective,
        "n": args.n,
        "group": args.group,
        "symmetry": args.symmetry,
        "budget_nodes": args.budget_nodes,
        "budget_secs": args.budget_secs,
        "workers": args.workers,
        "heuristic": args.heuristic,
        "restarts": args.restarts,
    }));
    run.report.seed = Some(args.seed);
    let result = r.to_json();
    if let Some(path) = &args.out {
        write(path, &(to_sorted_json(&result) + "\n"))?;
    }
    if let Some(path) = &args.witness {
        write(path, &textio::save(&Certificate::from(&r.witness)))?;
    }
    run.report.timings.insert("search_seconds".into(), r.wall_time);
    run.report.outputs = result;
    run.say(format!(
        "{} {}: value {} status {:?} nodes {} ({:.2}s)",
        r.objective, r.instance, r.best_value, r.status, r.nodes, r.wall_time
    ));
    if r.status == Status::TimedOut {
        run.code = 3;
    }
    Ok(run)
}

fn cmd_construct(name: Construction, n: u32, strategy: &str, out: Option<&Path>) -> CmdResult {
    let mut run = Run::new(json!({"construction": name.to_possible_value().unwrap().get_name(), "n": n, "strategy": strategy}));
    let emit = |run: &mut Run, body: String| -> Result<(), Error> {
        match out {
            Some(path) => write(path, &body),
            None => {
                run.text.push_str(&body);
                Ok(())
            }
        }
    };
    match name {
        Construction::Petrov => {
            let strategy: PrimitiveStrategy = strategy.parse()?;
            let s = petrov_construction(n, strategy)?;
            let ok = skew_corner_violation(&s).is_none();
            run.report.outputs = json!({"sizes": {"points": s.len()}, "counts": {"density": s.len() as f64 / n as f64}, "skew_corner_free": ok});
            if !ok {
                run.code = 1;
            }
            emit(&mut run, textio::save(&Certificate::Grid(s)))?;
        }
        Construction::Primitive => {
            let strategy: PrimitiveStrategy = strategy.parse()?;
            let s = primitive_set(n, strategy);
            let ok = is_primitive(&s);
            let recip: f64 = s.iter().map(|&a| 1.0 / a as f64).sum();
            run.report.outputs = json!({"sizes": {"set": s.len()}, "counts": {"sum_reciprocals": recip}, "primitive": ok, "set": s});
            if !ok {
                run.code = 1;
            }
            emit(&mut run, format!("{}\n", join(&s)))?;
        }
        Construction::Behrend => {
            let s = behrend_3ap_free(n);
            let ok = is_3ap_free(&s, None);
            run.report.outputs = json!({"sizes": {"set": s.len()}, "progression_free": ok, "set": s});
            if !ok {
                run.code = 1;
            }
            emit(&mut run, format!("{}\n", join(&s)))?;
        }
        Construction::Avgbad => {
            let (t, report) = avgbad_construction(n)?;
            run.report.inequalities = report.inequalities.clone();
            run.report.outputs = json!({
                "sizes": {"A": report.size_a, "B": report.size_b, "C": report.size_c, "modulus": report.modulus},
                "counts": {"solutions": report.solution_count, "second_moment": report.second_moment,
                           "diagonal_lower_bound": report.diagonal_lower_bound},
                "progression_free": report.progression_free,
            });
            if !run.report.inequalities_hold() {
                run.code = 1;
            }
            emit(&mut run, textio::save(&Certificate::Group(t)))?;
        }
        Construction::Matching => {
            // a progression-free subset of [0, n) stays progression-free mod 2n+1
            let a = behrend_3ap_free(n).into_iter().map(|x| x - 1).collect::<Vec<_>>();
            let m = induced_matching_from_3apfree(&a, 2 * n + 1)?;
            run.report.outputs = json!({"sizes": {"matching": m.size, "set": a.len()}, "matching": m});
            run.say(format!("induced matching of size {} in Z{}", m.size, m.modulus));
        }
    }
    Ok(run)
}

fn join(v: &[u32]) -> String {
    v.iter().map(u32::to_string).collect::<Vec<_>>().join(" ")
}

fn cmd_stpp(op: StppOp, file: &Path, out: Option<&Path>) -> CmdResult {
    let text = read(file)?;
    let mut run = Run::new(json!({"op": op.to_possible_value().unwrap().get_name(), "file": file.display().to_string()}));
    match op {
        StppOp::Lift => {
            let input: SdppFile = serde_json::from_str(&text).map_err(json_error)?;
            let family = input.into_family()?;
            let index = input
                .index_set()?
                .ok_or_else(|| Error::Precondition("lift needs an index_set".into()))?;
            let mut lifted = lift_sdpp_to_stpp(&family, &index)?;
            let valid = lifted.verify().is_valid();
            let body = serde_json::to_string_pretty(&StppFile::from_family(&lifted)).expect("serializes") + "\n";
            run.report.outputs = json!({"group": lifted.group.to_string(), "triples": lifted.triples.len(), "valid": valid});
            match out {
                Some(p) => write(p, &body)?,
                None => run.text.push_str(&body),
            }
            if !valid {
                run.code = 1;
            }
        }
        _ => {
            let input: StppFile = serde_json::from_str(&text).map_err(json_error)?;
            let mut family = input.into_family()?;
            let verdict = family.verify().clone();
            let products: Vec<u64> = family.triples.iter().map(StppTriple::product_size).collect();
            run.report.outputs = json!({"group": family.group.to_string(), "valid": verdict.is_valid(), "products": products});
            if let Verified::Invalid(v) = &verdict {
                run.report.outputs["violation"] = json!(v.to_string());
            }
            match op {
                StppOp::Verify => match &verdict {
                    Verified::Valid => run.say(format!("valid STPP family in {} ({} triples)", family.group, products.len())),
                    Verified::Invalid(v) => {
                        run.say(format!("invalid: {v}"));
                        run.code = 1;
                    }
                    Verified::Unchecked => unreachable!(),
                },
                StppOp::Omega => {
                    let pack = packing_bound_check(&family)?;
                    let w = omega_bound(&family)?;
                    for (i, name) in ["sum |S||T| <= |G|", "sum |T||U| <= |G|", "sum |U||S| <= |G|"].iter().enumerate() {
                        run.report
                            .inequalities
                            .push(skewcorner::constructions::Inequality::le(name, pack.sums[i] as f64, pack.order as f64));
                    }
                    run.report.outputs["omega"] = json!(w);
                    run.say(if w.improves {
                        format!("omega <= {:.9}", w.omega)
                    } else {
                        "no bound better than 3".to_string()
                    });
                }
                StppOp::Witness => {
                    let t = stpp_to_trapezoid_witness(&family)?;
                    let count = count_zero_sum_triples(&t);
                    run.report.outputs["witness_count"] = json!(count);
                    let body = textio::save(&Certificate::Group(t));
                    match out {
                        Some(p) => write(p, &body)?,
                        None => run.text.push_str(&body),
                    }
                }
                StppOp::Lift => unreachable!(),
            }
        }
    }
    Ok(run)
}

fn cmd_render(format: RenderFormat, file: &Path, out: Option<&Path>, json: bool) -> CmdResult {
    let cert = load_certificate(&read(file)?)?;
    let body = match format {
        RenderFormat::Svg => render::svg(&cert)?,
        RenderFormat::TextArt => render::text_art(&cert)?,
    };
    let mut run = Run::new(json!({"file": file.display().to_string(), "kind": cert.kind()}));
    run.report.outputs = json!({"bytes": body.len()});
    match out {
        Some(p) => write(p, &body)?,
        None if json => run.report.outputs["document"] = json!(body),
        None => run.text.push_str(&body),
    }
    Ok(run)
}

fn cmd_repro(criteria: &[u32], seed: u64, workers: usize, out: Option<&Path>) -> CmdResult {
    let ids: Vec<u32> = if criteria.is_empty() {
        CRITERIA.iter().map(|&(id, _)| id).collect()
    } else {
        criteria.to_vec()
    };
    let opts = ReproOptions { seed, workers };
    let mut run = Run::new(json!({"criteria": ids, "workers": workers}));
    run.report.seed = Some(seed);
    let mut outcomes = Vec::new();
    for id in ids {
        let o = run_criterion(id, &opts)?;
        run.say(o.line());
        for d in &o.details {
            run.say(format!("    {d}"));
        }
        run.report.inequalities.extend(o.inequalities.iter().cloned());
        run.report.timings.insert(format!("criterion_{id}"), o.seconds);
        if !o.passed {
            run.code = 1;
        }
        outcomes.push(o);
    }
    run.report.outputs = json!({
        "passed": outcomes.iter().filter(|o| o.passed).count(),
        "failed": outcomes.iter().filter(|o| !o.passed).map(|o| o.id).collect::<Vec<_>>(),
        "criteria": outcomes,
    });
    if let Some(p) = out {
        write(p, &(run.report.to_json() + "\n"))?;
    }
    Ok(run)
}
