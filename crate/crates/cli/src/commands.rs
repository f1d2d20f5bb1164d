//! Subcommand definitions and their reports.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use flipkit::gen;
use flipkit::lp::{self, Rational, Relation, RowTag, VertexPoint};
use flipkit::oracles::{self, TdiOutcome};
use flipkit::setfam::{constant, SubmodularOracle};
use flipkit::solvers::{self, Hypothesis, TwoSystemInstance, TwoSystemOutcome};
use flipkit::transshipment::{solve_transshipment, TransshipmentInstance, TransshipmentOutcome};
use flipkit::{ArcSet, CrossingFamily, Digraph, VertexSet};

use crate::format::InstanceFile;
use crate::report::Report;
use crate::CliError;

#[derive(Debug, Parser)]
#[command(name = "flipkit", version, about = "Arc-connected flips, dijoin decompositions and two-system submodular flows")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CheckKind {
    Flip,
    Dijoin,
    Connectivity,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GenModel {
    Cycle,
    Bidirected,
    RandomEc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Repro {
    BadExample,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the cut hypothesis for k-arc-connected flips.
    VerifyHypothesis {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        tau: i64,
        #[arg(long)]
        k: i64,
    },
    /// Find a k-arc-connected flip obeying a family bound.
    FindFlip {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        k: i64,
        /// Defaults to 2k.
        #[arg(long)]
        tau: Option<i64>,
        #[arg(long)]
        family: Option<String>,
        #[arg(long = "fn")]
        function: Option<String>,
    },
    /// Split the arcs into a k-arc-connected flip and a (tau-k)-dijoin.
    Decompose {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        tau: i64,
        #[arg(long)]
        k: i64,
        /// Use the arc weights of the instance file.
        #[arg(long)]
        weighted: bool,
    },
    /// Near-Eulerian k-arc-connected flip of a 2k-edge-connected digraph.
    Orient {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        k: i64,
    },
    /// Split the arcs into a k-dijoin and a (tau-k)-dijoin.
    DijoinPair {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        tau: i64,
        #[arg(long)]
        k: i64,
    },
    /// Integral point of two submodular flow systems within bounds.
    Solve {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        sys1: String,
        #[arg(long)]
        sys2: String,
        /// Integer or -inf, applied to every arc.
        #[arg(long, allow_hyphen_values = true, default_value = "-inf")]
        lower: String,
        /// Integer or inf, applied to every arc.
        #[arg(long, allow_hyphen_values = true, default_value = "inf")]
        upper: String,
        /// File with one integer per arc.
        #[arg(long)]
        objective: Option<PathBuf>,
    },
    /// Integral b-transshipment or a violating set.
    Transship {
        #[arg(long = "in")]
        input: PathBuf,
        /// File with one integer per vertex.
        #[arg(long)]
        b: PathBuf,
        #[arg(long, allow_hyphen_values = true, default_value = "-inf")]
        lower: String,
        #[arg(long, allow_hyphen_values = true, default_value = "inf")]
        upper: String,
    },
    /// Check a flip, a dijoin or arc-connectivity.
    Check {
        #[arg(long)]
        what: CheckKind,
        #[arg(long = "in")]
        input: PathBuf,
        /// Arc ids, comma or space separated.
        #[arg(long, default_value = "")]
        set: String,
        #[arg(long)]
        k: i64,
    },
    /// Reproduce a known counterexample.
    Repro {
        #[arg(value_enum)]
        which: Repro,
    },
    /// Fractional vertices of the two systems within a box.
    SearchFractional {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        sys1: String,
        #[arg(long)]
        sys2: String,
        #[arg(long = "box", num_args = 2, allow_hyphen_values = true, default_values_t = [0, 1])]
        bounds: Vec<i64>,
    },
    /// Three-matroid reduction with an exhaustive equivalence check.
    ReduceMatroids {
        #[arg(long, default_value = "tiny")]
        catalog: String,
    },
    /// Print a generated instance file.
    Gen {
        #[arg(long, value_enum)]
        model: GenModel,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        target_ec: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Extra random edges for random-ec.
        #[arg(long, default_value_t = 0)]
        extra: usize,
    },
    /// Search for digraphs without a k-dijoin / (tau-k)-dijoin split.
    ConjectureSearch {
        #[arg(long)]
        tau: i64,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::VerifyHypothesis { .. } => "verify-hypothesis",
            Command::FindFlip { .. } => "find-flip",
            Command::Decompose { .. } => "decompose",
            Command::Orient { .. } => "orient",
            Command::DijoinPair { .. } => "dijoin-pair",
            Command::Solve { .. } => "solve",
            Command::Transship { .. } => "transship",
            Command::Check { .. } => "check",
            Command::Repro { .. } => "repro",
            Command::SearchFractional { .. } => "search-fractional",
            Command::ReduceMatroids { .. } => "reduce-matroids",
            Command::Gen { .. } => "gen",
            Command::ConjectureSearch { .. } => "conjecture-search",
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn load(path: &Path) -> Result<InstanceFile, CliError> {
    InstanceFile::parse(&read(path)?)
}

fn read_ints(path: &Path, expected: usize, what: &str) -> Result<Vec<i64>, CliError> {
    let values: Vec<i64> = read(path)?
        .split_whitespace()
        .map(|w| w.parse().map_err(|_| CliError::Parse(format!("{what}: bad integer {w:?}"))))
        .collect::<Result<_, _>>()?;
    if values.len() != expected {
        return Err(CliError::Parse(format!("{what}: expected {expected} integers, found {}", values.len())));
    }
    Ok(values)
}

fn parse_bound(s: &str, infinite: &str) -> Result<Option<i64>, CliError> {
    if s == infinite || s == "none" {
        return Ok(None);
    }
    s.parse()
        .map(Some)
        .map_err(|_| CliError::Usage(format!("bound must be an integer or {infinite}, got {s:?}")))
}

fn parse_arcs(s: &str, m: usize) -> Result<ArcSet, CliError> {
    let mut set = ArcSet::new();
    for w in s.split(|c: char| c == ',' || c.is_whitespace()).filter(|w| !w.is_empty()) {
        let a: usize = w.parse().map_err(|_| CliError::Usage(format!("bad arc id {w:?}")))?;
        if a >= m {
            return Err(CliError::Usage(format!("arc {a} out of range (m={m})")));
        }
        set.insert(a);
    }
    Ok(set)
}

fn ids(set: VertexSet) -> Vec<usize> {
    set.iter().collect()
}

fn arc_ids(set: &ArcSet) -> Vec<usize> {
    set.iter().collect()
}

fn join<T: std::fmt::Display>(xs: impl IntoIterator<Item = T>) -> String {
    xs.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

fn rationals(values: &[Rational]) -> String {
    join(values)
}

pub fn execute(cli: &Cli) -> Result<Report, CliError> {
    match &cli.command {
        Command::VerifyHypothesis { input, tau, k } => verify_hypothesis(input, *tau, *k),
        Command::FindFlip {
            input,
            k,
            tau,
            family,
            function,
        } => find_flip(input, *k, *tau, family.as_deref(), function.as_deref()),
        Command::Decompose { input, tau, k, weighted } => decompose(input, *tau, *k, *weighted),
        Command::Orient { input, k } => orient(input, *k),
        Command::DijoinPair { input, tau, k } => dijoin_pair(input, *tau, *k),
        Command::Solve {
            input,
            sys1,
            sys2,
            lower,
            upper,
            objective,
        } => solve(input, sys1, sys2, lower, upper, objective.as_deref()),
        Command::Transship { input, b, lower, upper } => transship(input, b, lower, upper),
        Command::Check { what, input, set, k } => check(*what, input, set, *k),
        Command::Repro { which: Repro::BadExample } => repro_bad_example(),
        Command::SearchFractional {
            input,
            sys1,
            sys2,
            bounds,
        } => search_fractional(input, sys1, sys2, bounds),
        Command::ReduceMatroids { catalog } => reduce_matroids(catalog),
        Command::Gen {
            model,
            n,
            target_ec,
            seed,
            extra,
        } => generate(*model, *n, *target_ec, *seed, *extra),
        Command::ConjectureSearch { tau, n, trials, seed } => conjecture_search(*tau, *n, *trials, *seed),
    }
}

fn verify_hypothesis(input: &Path, tau: i64, k: i64) -> Result<Report, CliError> {
    let file = load(input)?;
    let mut r = match solvers::verify_hypothesis(&file.digraph, tau, k)? {
        Hypothesis::Holds => Report::new("verify-hypothesis", "holds"),
        Hypothesis::Violated { set, slack } => {
            let mut r = Report::new("verify-hypothesis", "violated");
            r.line("set", set);
            r.line("slack", &slack);
            r.field("set", ids(set));
            r.field("slack", slack.to_string());
            r
        }
    };
    r.field("tau", tau);
    r.field("k", k);
    Ok(r)
}

fn flip_report(command: &str, d: &Digraph, cert: &solvers::FlipCertificate, f: &SubmodularOracle) -> Result<Report, CliError> {
    let mut r = Report::new(command, "flip found");
    r.line("flip", &cert.j);
    r.line("k", cert.k);
    r.field("flip", arc_ids(&cert.j));
    r.field("k", cert.k);
    r.field("tau", cert.tau);
    r.check("k-arc-connected after reversal", d.is_k_flip(&cert.j, cert.k as usize)?);
    let family_ok = f.entries()?.into_iter().all(|(u, v)| d.net_out_of(&cert.j, u) <= v);
    r.check("family bound", family_ok);
    Ok(r)
}

fn find_flip(input: &Path, k: i64, tau: Option<i64>, family: Option<&str>, function: Option<&str>) -> Result<Report, CliError> {
    let file = load(input)?;
    let d = &file.digraph;
    let f = match (family, function) {
        (_, Some(name)) => {
            let spec_family = &file.functions.get(name).ok_or_else(|| CliError::Parse(format!("unknown function {name}")))?.family;
            if let Some(fam) = family {
                if fam != spec_family {
                    return Err(CliError::Usage(format!("function {name} is defined over family {spec_family}, not {fam}")));
                }
            }
            file.oracle(name)?
        }
        (Some(_), None) => return Err(CliError::Usage("--family needs --fn to give its bound".into())),
        (None, None) => constant(CrossingFamily::empty(d.n()), 0)?,
    };
    let tau = tau.unwrap_or(2 * k);
    let cert = solvers::find_k_flip(d, tau, k, &f)?;
    flip_report("find-flip", d, &cert, &f)
}

fn decomposition_report(command: &str, result: &solvers::DecompositionResult) -> Report {
    let mut r = Report::new(command, "decomposition found");
    r.line(&format!("part 1 ({})", result.roles.0), &result.part1);
    r.line(&format!("part 2 ({})", result.roles.1), &result.part2);
    r.field("part1", arc_ids(&result.part1));
    r.field("part2", arc_ids(&result.part2));
    r.field("roles", [result.roles.0.to_string(), result.roles.1.to_string()]);
    r.check(&format!("part 1 is a {}", result.roles.0), result.verified.0);
    r.check(&format!("part 2 is a {}", result.roles.1), result.verified.1);
    r
}

fn decompose(input: &Path, tau: i64, k: i64, weighted: bool) -> Result<Report, CliError> {
    let file = load(input)?;
    let d = &file.digraph;
    let result = if weighted {
        solvers::weighted_decompose(d, d.weights(), tau, k)?
    } else {
        solvers::decompose_flip_dijoin(d, tau, k)?
    };
    Ok(decomposition_report("decompose", &result))
}

fn orient(input: &Path, k: i64) -> Result<Report, CliError> {
    let file = load(input)?;
    let d = &file.digraph;
    let cert = solvers::near_eulerian_flip(d, k)?;
    let f = flipkit::setfam::ceil_half_imbalance(d)?;
    let mut r = flip_report("orient", d, &cert, &f)?;
    let flipped = d.flip(&cert.j)?;
    let imbalance: Vec<i64> = (0..d.n()).map(|v| flipped.imbalance(v)).collect();
    r.line("imbalance after reversal", join(&imbalance));
    r.field("imbalance", &imbalance);
    r.check("near-Eulerian", imbalance.iter().all(|x| x.abs() <= 1));
    Ok(r)
}

fn dijoin_pair(input: &Path, tau: i64, k: i64) -> Result<Report, CliError> {
    let file = load(input)?;
    let result = solvers::dijoin_pair_decompose(&file.digraph, tau, k)?;
    Ok(decomposition_report("dijoin-pair", &result))
}

fn outcome_report(command: &str, inst: &TwoSystemInstance, outcome: TwoSystemOutcome) -> Result<Report, CliError> {
    Ok(match outcome {
        TwoSystemOutcome::Integral(y) => {
            let mut r = Report::new(command, "integral solution");
            r.line("y", join(&y));
            r.field("y", &y);
            r.check("bounds", inst.within_bounds(&y));
            r.check("both systems", inst.system_violation(&y)?.is_none());
            r
        }
        TwoSystemOutcome::ViolatingSet(u) => {
            let mut r = Report::new(command, "cut condition violated");
            r.line("set", u);
            r.line("min f(U)", inst.min_value(u).map_or("+inf".to_string(), |v| v.to_string()));
            r.line("capacity", inst.cut_capacity(u).map_or("+inf".to_string(), |v| v.to_string()));
            r.field("set", ids(u));
            r.check("set violates the cut condition", inst.violates_cut_condition(u));
            r
        }
        TwoSystemOutcome::Infeasible => Report::new(command, "infeasible"),
        TwoSystemOutcome::Unbounded => Report::new(command, "objective unbounded"),
    })
}

fn solve(input: &Path, sys1: &str, sys2: &str, lower: &str, upper: &str, objective: Option<&Path>) -> Result<Report, CliError> {
    let file = load(input)?;
    let d = file.digraph.clone();
    let m = d.arc_count();
    let (lo, hi) = (parse_bound(lower, "-inf")?, parse_bound(upper, "inf")?);
    let mut inst = TwoSystemInstance::new(d, file.oracle(sys1)?, file.oracle(sys2)?, vec![lo; m], vec![hi; m])?;
    if let Some(path) = objective {
        inst = inst.with_objective(read_ints(path, m, "objective")?)?;
    }
    let outcome = solvers::solve_two_systems(&inst)?;
    outcome_report("solve", &inst, outcome)
}

fn transship(input: &Path, b: &Path, lower: &str, upper: &str) -> Result<Report, CliError> {
    let file = load(input)?;
    let d = file.digraph.clone();
    let b = read_ints(b, d.n(), "supplies")?;
    let (lo, hi) = (parse_bound(lower, "-inf")?, parse_bound(upper, "inf")?);
    let inst = TransshipmentInstance::uniform(d, b, lo, hi)?;
    Ok(match solve_transshipment(&inst)? {
        TransshipmentOutcome::Flow(y) => {
            let mut r = Report::new("transship", "flow");
            r.line("y", join(&y));
            r.field("y", &y);
            r.check("bounds and supplies", inst.is_feasible_flow(&y));
            r
        }
        TransshipmentOutcome::ViolatingSet(u) => {
            let mut r = Report::new("transship", "violating set");
            r.line("set", u);
            let slack = inst.hoffman_slack(u);
            r.line("capacity minus supply", slack.map_or("+inf".into(), |s| s.to_string()));
            r.field("set", ids(u));
            r.check("supply exceeds capacity", slack.is_some_and(|s| s < 0));
            r
        }
    })
}

fn check(what: CheckKind, input: &Path, set: &str, k: i64) -> Result<Report, CliError> {
    let file = load(input)?;
    let d = &file.digraph;
    if k < 0 {
        return Err(CliError::Usage("k must be non-negative".into()));
    }
    let j = parse_arcs(set, d.arc_count())?;
    let k = k as usize;
    let (name, holds, witness) = match what {
        CheckKind::Dijoin => {
            let w = d.dijoin_violation(&j, k)?;
            ("dijoin", w.is_none(), w)
        }
        CheckKind::Flip | CheckKind::Connectivity => {
            let flipped = d.flip(&j)?;
            let conn = flipped.arc_connectivity()?;
            let witness = conn.and_then(|(value, u)| (value < k).then_some(u));
            (if what == CheckKind::Flip { "flip" } else { "connectivity" }, witness.is_none(), witness)
        }
    };
    let mut r = Report::new("check", if holds { "true" } else { "false" });
    r.field("what", name);
    r.field("k", k);
    r.field("set", arc_ids(&j));
    if let Some(u) = witness {
        r.line("witness", u);
        r.field("witness", ids(u));
    }
    Ok(r)
}

fn row_text(row: &lp::Row) -> String {
    let lhs = row
        .coeffs
        .iter()
        .map(|(j, a)| match a.to_string().as_str() {
            "1" => format!("y{j}"),
            "-1" => format!("-y{j}"),
            s => format!("{s}*y{j}"),
        })
        .collect::<Vec<_>>()
        .join(" + ")
        .replace("+ -", "- ");
    let rel = match row.relation {
        Relation::Le => "<=",
        Relation::Ge => ">=",
        Relation::Eq => "=",
    };
    format!("{lhs} {rel} {}   [{}]", row.rhs, row.tag)
}

fn point_text(p: &VertexPoint) -> String {
    rationals(&p.values)
}

fn repro_bad_example() -> Result<Report, CliError> {
    let inst = oracles::pairwise_sum_example()?;
    let lp = inst.lp(true)?;
    let mut r = Report::new("repro", "fractional vertex found");
    r.text("digraph: arcs 0=(0,3) 1=(1,4) 2=(2,5)");
    r.text("system:");
    for row in lp.rows().iter().filter(|row| matches!(row.tag, RowTag::Family { .. })) {
        r.text(format!("  {}", row_text(row)));
    }
    r.text("box: 0 <= y <= 1");
    let vertices = lp::enumerate_vertices(&lp)?;
    r.line("vertices", vertices.len());
    for v in &vertices {
        r.text(format!("  {}", point_text(v)));
    }
    let fractional = oracles::fractional_vertex_search(&inst)?;
    for fv in &fractional {
        r.line("fractional vertex", format!("{} (tight rank {})", point_text(&fv.point), fv.rank));
    }
    r.field("vertices", vertices.iter().map(point_text).collect::<Vec<_>>());
    r.field("fractional", fractional.iter().map(|f| point_text(&f.point)).collect::<Vec<_>>());
    let unbounded = TwoSystemInstance::unbounded(inst.d.clone(), inst.f1.clone(), inst.f2.clone())?;
    if let TdiOutcome::NoIntegralDual { primal_value, .. } = oracles::check_tdi_at(&[1, 1, 1], &unbounded)? {
        r.line("max y0 + y1 + y2", &primal_value);
        r.field("max_sum", primal_value.to_string());
    }
    r.check("vertex 1/2 1/2 1/2 present", fractional.iter().any(|f| point_text(&f.point) == "1/2 1/2 1/2"));
    Ok(r)
}

fn search_fractional(input: &Path, sys1: &str, sys2: &str, bounds: &[i64]) -> Result<Report, CliError> {
    let file = load(input)?;
    let d = file.digraph.clone();
    let m = d.arc_count();
    let (lo, hi) = (bounds[0], bounds[1]);
    if lo > hi {
        return Err(CliError::Usage("box lower bound exceeds upper bound".into()));
    }
    let inst = TwoSystemInstance::new(d, file.oracle(sys1)?, file.oracle(sys2)?, vec![Some(lo); m], vec![Some(hi); m])?;
    let found = oracles::fractional_vertex_search_capped(&inst, 16, 64)?;
    let mut r = Report::new(
        "search-fractional",
        if found.is_empty() { "no fractional vertex" } else { "fractional vertices found" },
    );
    for fv in &found {
        r.line("vertex", format!("{} (tight rank {})", point_text(&fv.point), fv.rank));
    }
    r.field("count", found.len());
    r.field("vertices", found.iter().map(|f| point_text(&f.point)).collect::<Vec<_>>());
    Ok(r)
}

fn reduce_matroids(catalog: &str) -> Result<Report, CliError> {
    let entries = oracles::catalogue(catalog)?;
    let mut reports = Vec::new();
    for entry in &entries {
        reports.push(oracles::check_equivalence(entry)?);
    }
    let agree = reports.iter().all(|e| e.agree);
    let mut r = Report::new("reduce-matroids", if agree { "equivalent" } else { "mismatch" });
    for e in &reports {
        let basis = e.common_basis.map_or("none".to_string(), |b| {
            format!("{{{}}}", (0..32).filter(|i| b >> i & 1 == 1).map(|i| i.to_string()).collect::<Vec<_>>().join(","))
        });
        r.line(&e.name, format!("common basis {basis}, integral solutions {}", e.solutions));
        r.check(&e.name, e.agree);
    }
    r.field("catalog", catalog);
    r.field("instances", reports.len());
    Ok(r)
}

fn generate(model: GenModel, n: usize, target: Option<usize>, seed: u64, extra: usize) -> Result<Report, CliError> {
    let d = match model {
        GenModel::Cycle | GenModel::Bidirected => {
            if n < 2 {
                return Err(CliError::Usage("need at least two vertices".into()));
            }
            let d = if model == GenModel::Cycle {
                Digraph::directed_cycle(n)
            } else {
                Digraph::bidirected_cycle(n)
            };
            let ec = d.underlying_edge_connectivity()?.0;
            if let Some(t) = target.filter(|&t| t > ec) {
                return Err(CliError::Usage(format!("model has edge connectivity {ec}, below the target {t}")));
            }
            d
        }
        GenModel::RandomEc => {
            let t = target.ok_or_else(|| CliError::Usage("random-ec needs --target-ec".into()))?;
            gen::random_ec_orientation(&mut gen::rng(seed), n, t, extra)?
        }
    };
    let file = InstanceFile::from_digraph(d);
    let mut r = Report::new("gen", "generated");
    r.text(file.to_string().trim_end());
    r.field("n", file.digraph.n());
    r.field("arcs", file.digraph.arc_count());
    r.field("seed", seed);
    Ok(r.into_instance())
}

fn conjecture_search(tau: i64, n: usize, trials: usize, seed: u64) -> Result<Report, CliError> {
    let report = oracles::conjecture_search(tau, n, trials, seed)?;
    let mut r = Report::new(
        "conjecture-search",
        if report.candidates.is_empty() { "no counterexample" } else { "candidates found" },
    );
    r.line("digraphs checked", report.checked);
    r.line("(digraph, k) pairs", report.pairs);
    for c in &report.candidates {
        r.line("candidate", json!({"n": c.n, "arcs": c.arcs, "k": c.k}));
    }
    r.field("tau", tau);
    r.field("checked", report.checked);
    r.field("pairs", report.pairs);
    r.field("candidates", &report.candidates);
    Ok(r)
}
