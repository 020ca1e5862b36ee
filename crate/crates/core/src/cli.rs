//! The `groundspace` command line: subspace and projection sources, the
//! subcommands, report documents and the named verifications.

use std::ffi::OsString;
use std::io::Write;
use std::path::Path;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use itertools::Itertools;
use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::cone::{analyze_cone, extreme_rays};
use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::fixtures;
use crate::io::{marginals_to_json, rationals_to_strings, read_json, ConeJson, LatticeJson, MatrixJson, ProjectionJson, SubspaceJson};
use crate::lattice::{build_lattice, coatom_decomposition, enumerate_coatoms, is_coatom, is_ground_projection, Completeness, GroundLattice};
use crate::linalg::{HermitianMatrix, Projection};
use crate::manybody::{
    affine_dimension, build_klocal, ff_lattice_3bit, klocal_dimension, marginal_map, marginal_polytope_vertices, SiteSystem,
};
use crate::subspace::{Engine, OperatorSubspace};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "groundspace", version, about = "Ground projection lattices of spaces of hermitian matrices")]
pub struct Cli {
    /// exact or float; defaults to the engine of the subspace
    #[arg(long, global = true, value_parser = parse_engine)]
    pub engine: Option<Engine>,
    /// Sets every tolerance (spectral, rank, residual)
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Random elements drawn by float coatom sampling
    #[arg(long, global = true)]
    pub samples: Option<usize>,
    /// Random functionals per missing ray in the float ray search
    #[arg(long, global = true)]
    pub restarts: Option<usize>,
    #[arg(long = "max-nodes", global = true)]
    pub max_nodes: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = OutFormat::Json)]
    pub out: OutFormat,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutFormat {
    Json,
    Dot,
}

/// Subspace sources: `m3-example`, `span{id}` (or `span{id}:n=4`), a system
/// such as `bits:N=3` optionally followed by `k=2`, a JSON file, or inline JSON.
///
/// Projection sources: `id`, `zero`, `support=[0,1]`, `complement=[3,5]`,
/// `p+`, `p-`, `corner` (for `m3-example`), a JSON file, or inline JSON.
#[derive(Subcommand, Debug)]
pub enum Command {
    /// Is the projection a ground projection? Reports q_max and dim K.
    Membership {
        #[arg(required = true, num_args = 2..=3, value_name = "SUBSPACE [k=K] PROJECTION")]
        args: Vec<String>,
    },
    /// The greatest projection with the same cone.
    Qmax {
        #[arg(required = true, num_args = 2..=3, value_name = "SUBSPACE [k=K] PROJECTION")]
        args: Vec<String>,
    },
    /// Dimension, witness and extreme rays of K(p); with --decompose also the coatom decomposition.
    Cone {
        #[arg(required = true, num_args = 2..=3, value_name = "SUBSPACE [k=K] PROJECTION")]
        args: Vec<String>,
        #[arg(long)]
        decompose: bool,
    },
    /// Coatoms of the lattice (complete for the exact engine, sampled otherwise).
    Coatoms {
        #[arg(required = true, num_args = 1..=2, value_name = "SUBSPACE [k=K]")]
        args: Vec<String>,
    },
    /// The lattice built from its coatoms; JSON or DOT.
    Lattice {
        #[arg(required = true, num_args = 1..=2, value_name = "SUBSPACE [k=K]")]
        args: Vec<String>,
        /// Build the frustration-free lattice of a classical system instead
        #[arg(long)]
        frustration_free: bool,
    },
    /// Basis and dimension of the k-local subspace of a system.
    Klocal {
        #[arg(required = true, num_args = 1..=2, value_name = "SYSTEM [k=K]")]
        args: Vec<String>,
    },
    /// k-body marginals of a state (`maximally-mixed`, `random`, or a matrix
    /// file), or `vertices` for the classical marginal polytope.
    Marginal {
        #[arg(required = true, num_args = 2..=3, value_name = "SYSTEM [k=K] STATE")]
        args: Vec<String>,
    },
    /// Runs a named fixture: m3, 3bit, 3bit-ff or klocal-dims.
    Verify { fixture: String },
}

fn parse_engine(s: &str) -> std::result::Result<Engine, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// Command echo, config echo, results, completeness flag and timing. Only
/// `timing_ms` varies between identical runs.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ReportDocument {
    pub command: Vec<String>,
    pub config: RunConfig,
    pub status: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub completeness: Option<Completeness>,
    pub results: Value,
    pub timing_ms: f64,
}

/// One line of a `verify` run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub expected: String,
    pub found: String,
    pub pass: bool,
}

impl Check {
    fn new(name: &str, expected: impl ToString, found: impl ToString) -> Self {
        let (expected, found) = (expected.to_string(), found.to_string());
        Check { name: name.into(), pass: expected == found, expected, found }
    }
}

struct Outcome {
    status: &'static str,
    completeness: Option<Completeness>,
    results: Value,
    dot: Option<String>,
    code: i32,
}

impl Outcome {
    fn ok(results: Value) -> Self {
        Outcome { status: "ok", completeness: None, results, dot: None, code: EXIT_OK }
    }
}

/// Runs the command line and returns the exit code.
pub fn run_with_output(args: impl IntoIterator<Item = impl Into<OsString> + Clone>, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    let cfg = match config_from(&cli) {
        Ok(c) => c,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_INPUT;
        }
    };
    let start = Instant::now();
    let outcome = match dispatch(&cli, &cfg) {
        Ok(o) => o,
        Err(e) => match failure_outcome(e) {
            Ok(o) => o,
            Err((code, msg)) => {
                let _ = writeln!(err, "error: {msg}");
                return code;
            }
        },
    };
    if cli.out == OutFormat::Dot {
        match &outcome.dot {
            Some(d) => {
                let _ = out.write_all(d.as_bytes());
            }
            None => {
                let _ = writeln!(err, "error: --out dot is only available for the lattice command");
                return EXIT_INPUT;
            }
        }
    } else {
        let report = ReportDocument {
            command: args.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect(),
            config: cfg,
            status: outcome.status.into(),
            completeness: outcome.completeness,
            results: outcome.results,
            timing_ms: start.elapsed().as_secs_f64() * 1e3,
        };
        let _ = writeln!(out, "{}", serde_json::to_string_pretty(&report).expect("serializable"));
    }
    if outcome.code != EXIT_OK {
        let _ = writeln!(err, "{}", outcome.status);
    }
    outcome.code
}

/// Entry point for the binary.
pub fn run() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with_output(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}

fn config_from(cli: &Cli) -> Result<RunConfig> {
    let mut cfg = RunConfig { seed: cli.seed, engine: cli.engine, ..RunConfig::default() };
    if let Some(t) = cli.tol {
        cfg.tol_spec = t;
        cfg.tol_rank = t;
        cfg.tol_resid = t;
    }
    if let Some(s) = cli.samples {
        cfg.samples = s;
    }
    if let Some(r) = cli.restarts {
        cfg.restarts = r;
    }
    if let Some(m) = cli.max_nodes {
        cfg.max_nodes = m;
    }
    cfg.validate()?;
    Ok(cfg)
}

/// Budget and incompleteness errors still produce a report; other errors do not.
fn failure_outcome(e: Error) -> std::result::Result<Outcome, (i32, String)> {
    match e {
        Error::BudgetExceeded { budget, partial } => {
            let doc = LatticeJson::from(partial.as_ref());
            Ok(Outcome {
                status: "budget-exceeded",
                completeness: Some(partial.completeness),
                dot: Some(partial.to_dot()),
                results: json!({ "budget": budget, "node_count": partial.nodes.len(), "partial_lattice": doc }),
                code: EXIT_BUDGET,
            })
        }
        Error::Incomplete { found, needed } => Ok(Outcome {
            status: "incomplete",
            completeness: None,
            dot: None,
            results: json!({ "needed": needed, "found": found.iter().map(ProjectionJson::from).collect::<Vec<_>>() }),
            code: EXIT_BUDGET,
        }),
        Error::NoConvergence { .. } => Err((EXIT_BUDGET, e.to_string())),
        other => Err((EXIT_INPUT, other.to_string())),
    }
}

/// Splits `SUBSPACE [k=K] REST...`.
fn split_k(args: &[String]) -> Result<(String, Option<usize>, Vec<String>)> {
    let (head, tail) = args.split_first().ok_or_else(|| Error::invalid("missing subspace"))?;
    if let Some(first) = tail.first() {
        if let Some(k) = first.strip_prefix("k=") {
            let k = k.parse().map_err(|_| Error::invalid(format!("cannot parse '{first}' as k=<integer>")))?;
            return Ok((head.clone(), Some(k), tail[1..].to_vec()));
        }
    }
    Ok((head.clone(), None, tail.to_vec()))
}

fn is_system(s: &str) -> bool {
    ["bits:", "qubits:", "sites:", "classical:"].iter().any(|p| s.starts_with(p))
}

/// Resolves a subspace source; see [`Command`].
pub fn resolve_subspace(source: &str, k: Option<usize>) -> Result<OperatorSubspace> {
    if source == "m3-example" || source == "m3" {
        return Ok(fixtures::m3_subspace());
    }
    if let Some(rest) = source.strip_prefix("span{id}") {
        let n = match rest.strip_prefix(":n=") {
            Some(v) => v.parse().map_err(|_| Error::invalid(format!("cannot parse '{source}'")))?,
            None if rest.is_empty() => 2,
            None => return Err(Error::invalid(format!("cannot parse '{source}'"))),
        };
        return OperatorSubspace::from_spanning_set(&[HermitianMatrix::identity(n)], Engine::FloatHermitian, 1e-9);
    }
    if is_system(source) {
        let sys: SiteSystem = source.parse()?;
        return build_klocal(&sys, k.unwrap_or(2.min(sys.n_sites())));
    }
    let doc: SubspaceJson = if source.trim_start().starts_with('{') {
        serde_json::from_str(source)?
    } else {
        read_json(Path::new(source))?
    };
    doc.to_subspace()
}

fn parse_index_list(s: &str) -> Result<Vec<usize>> {
    let inner = s.trim().trim_start_matches('[').trim_end_matches(']');
    if inner.trim().is_empty() {
        return Ok(Vec::new());
    }
    inner
        .split(',')
        .map(|t| t.trim().parse().map_err(|_| Error::invalid(format!("cannot parse index '{t}'"))))
        .collect()
}

/// Resolves a projection source against `u`; see [`Command`].
pub fn resolve_projection(source: &str, u: &OperatorSubspace) -> Result<Projection> {
    let n = u.ambient_n();
    let m3_only = |p: Projection| {
        if n == 3 {
            Ok(p)
        } else {
            Err(Error::invalid(format!("'{source}' is defined for the m3 example only")))
        }
    };
    match source {
        "id" | "identity" => return Ok(Projection::identity(n)),
        "zero" | "0" => return Ok(Projection::zero(n)),
        "p+" => return m3_only(fixtures::m3_p_pm(1.0)),
        "p-" => return m3_only(fixtures::m3_p_pm(-1.0)),
        "corner" => return m3_only(fixtures::m3_corner()),
        _ => {}
    }
    let check = |s: &[usize]| match s.iter().find(|&&x| x >= n) {
        Some(x) => Err(Error::invalid(format!("index {x} out of range for n = {n}"))),
        None => Ok(()),
    };
    if let Some(list) = source.strip_prefix("support=") {
        let s = parse_index_list(list)?;
        check(&s)?;
        return Projection::from_support(n, s);
    }
    if let Some(list) = source.strip_prefix("complement=") {
        let s = parse_index_list(list)?;
        check(&s)?;
        return Projection::from_support(n, (0..n).filter(|x| !s.contains(x)));
    }
    let doc: ProjectionJson = if source.trim_start().starts_with('{') {
        serde_json::from_str(source)?
    } else {
        read_json(Path::new(source))?
    };
    doc.to_projection(Some(n))
}

fn subspace_and_projection(args: &[String]) -> Result<(OperatorSubspace, Projection)> {
    let (src, k, rest) = split_k(args)?;
    let u = resolve_subspace(&src, k)?;
    let [p] = rest.as_slice() else {
        return Err(Error::invalid("expected exactly one projection"));
    };
    let p = resolve_projection(p, &u)?;
    Ok((u, p))
}

fn only_subspace(args: &[String]) -> Result<OperatorSubspace> {
    let (src, k, rest) = split_k(args)?;
    if !rest.is_empty() {
        return Err(Error::invalid(format!("unexpected argument '{}'", rest[0])));
    }
    resolve_subspace(&src, k)
}

fn dispatch(cli: &Cli, cfg: &RunConfig) -> Result<Outcome> {
    match &cli.command {
        Command::Membership { args } => {
            let (u, p) = subspace_and_projection(args)?;
            u.require_identity()?;
            let d = analyze_cone(&p, &u, cfg)?;
            let member = is_ground_projection(&p, &u, cfg)?;
            Ok(Outcome::ok(json!({
                "member": member,
                "q_max": ProjectionJson::from(&d.q_max),
                "dim_K": d.dim_k,
                "projection": ProjectionJson::from(&p),
            })))
        }
        Command::Qmax { args } => {
            let (u, p) = subspace_and_projection(args)?;
            u.require_identity()?;
            let d = analyze_cone(&p, &u, cfg)?;
            Ok(Outcome::ok(json!({ "q_max": ProjectionJson::from(&d.q_max), "rank": d.q_max.rank(), "dim_K": d.dim_k })))
        }
        Command::Cone { args, decompose } => {
            let (u, p) = subspace_and_projection(args)?;
            let d = analyze_cone(&p, &u, cfg)?;
            let d = if d.dim_k > 0 && d.dim_k <= cfg.max_ray_dim { d.with_rays(&u, cfg)? } else { d };
            let mut results = serde_json::to_value(ConeJson::from(&d)).expect("serializable");
            if *decompose {
                let qs = coatom_decomposition(&p, &u, cfg)?;
                results["decomposition"] = json!(qs.iter().map(ProjectionJson::from).collect::<Vec<_>>());
            }
            Ok(Outcome::ok(results))
        }
        Command::Coatoms { args } => {
            let u = only_subspace(args)?;
            let set = enumerate_coatoms(&u, cfg)?;
            let labels: Vec<String> = set
                .coatoms
                .iter()
                .map(|p| match p.support() {
                    Some(_) => complement_label(p, &u),
                    None => format!("rank {}", p.rank()),
                })
                .collect();
            Ok(Outcome {
                completeness: Some(set.completeness),
                ..Outcome::ok(json!({
                    "completeness": set.completeness,
                    "samples": set.samples,
                    "count": set.coatoms.len(),
                    "complement_labels": labels,
                    "coatoms": set.coatoms.iter().map(ProjectionJson::from).collect::<Vec<_>>(),
                }))
            })
        }
        Command::Lattice { args, frustration_free } => {
            let lattice = if *frustration_free {
                let (src, k, _) = split_k(args)?;
                let sys: SiteSystem = src.parse()?;
                crate::manybody::frustration_free_lattice(&sys, k.unwrap_or(2.min(sys.n_sites())), cfg.max_nodes)?
            } else {
                build_lattice(&only_subspace(args)?, cfg)?
            };
            Ok(lattice_outcome(&lattice))
        }
        Command::Klocal { args } => {
            let (src, k, rest) = split_k(args)?;
            if !rest.is_empty() {
                return Err(Error::invalid(format!("unexpected argument '{}'", rest[0])));
            }
            let sys: SiteSystem = src.parse()?;
            let k = k.unwrap_or(2.min(sys.n_sites()));
            let u = build_klocal(&sys, k)?;
            Ok(Outcome::ok(json!({
                "system": sys.to_string(),
                "k": k,
                "dim": u.dim(),
                "expected_dim": klocal_dimension(&sys, k),
                "marginal_dim": u.dim() - 1,
                "subspace": SubspaceJson::from(&u),
            })))
        }
        Command::Marginal { args } => {
            let (src, k, rest) = split_k(args)?;
            let sys: SiteSystem = src.parse()?;
            let k = k.unwrap_or(2.min(sys.n_sites()));
            let [state] = rest.as_slice() else {
                return Err(Error::invalid("expected exactly one state"));
            };
            if state == "vertices" {
                let cols = marginal_polytope_vertices(&sys, k)?;
                return Ok(Outcome::ok(json!({
                    "system": sys.to_string(),
                    "k": k,
                    "affine_dimension": affine_dimension(&cols),
                    "vertices": cols.iter().map(|c| rationals_to_strings(c)).collect::<Vec<_>>(),
                })));
            }
            let rho = resolve_state(state, &sys, cfg)?;
            let m = marginal_map(&rho, &sys, k)?;
            Ok(Outcome::ok(json!({
                "system": sys.to_string(),
                "k": k,
                "max_inconsistency": m.max_inconsistency()?,
                "marginals": marginals_to_json(&m),
            })))
        }
        Command::Verify { fixture } => {
            let checks = verify_fixture(fixture, cfg)?;
            let passed = checks.iter().all(|c| c.pass);
            Ok(Outcome {
                status: if passed { "ok" } else { "verification-failed" },
                completeness: None,
                results: json!({ "fixture": fixture, "passed": passed, "checks": checks }),
                dot: None,
                code: if passed { EXIT_OK } else { EXIT_VERIFY_FAILED },
            })
        }
    }
}

fn complement_label(p: &Projection, u: &OperatorSubspace) -> String {
    let c = p.complement();
    let s = c.support().unwrap_or(&[]);
    let names = s.iter().map(|&x| crate::lattice::config_name(x, u.site_dims())).join(",");
    format!("X∖{{{names}}}")
}

fn lattice_outcome(l: &GroundLattice) -> Outcome {
    let counts: Vec<[usize; 2]> = l.rank_counts().into_iter().map(|(r, c)| [r, c]).collect();
    Outcome {
        status: "ok",
        completeness: Some(l.completeness),
        dot: Some(l.to_dot()),
        results: json!({
            "node_count": l.nodes.len(),
            "coatom_count": l.coatoms.len(),
            "rank_counts": counts,
            "lattice": LatticeJson::from(l),
        }),
        code: EXIT_OK,
    }
}

fn resolve_state(state: &str, sys: &SiteSystem, cfg: &RunConfig) -> Result<HermitianMatrix> {
    let n = sys.total_dim();
    match state {
        "maximally-mixed" => Ok(HermitianMatrix::identity(n).scale(1.0 / n as f64)),
        "random" => {
            // g g* / tr for a complex Gaussian g
            let mut rng = cfg.rng(0x7374_6174);
            let g = crate::linalg::CMat::from_fn(n, n, |_, _| {
                num_complex::Complex64::new(rng.sample(rand_distr::StandardNormal), rng.sample(rand_distr::StandardNormal))
            });
            let rho = HermitianMatrix::from_cmat(&g.matmul(&g.adjoint()));
            Ok(rho.scale(1.0 / rho.trace()))
        }
        path => {
            let doc: MatrixJson = if path.trim_start().starts_with('{') {
                serde_json::from_str(path)?
            } else {
                read_json(Path::new(path))?
            };
            let m = doc.to_matrix()?;
            if m.n() != n {
                return Err(Error::DimensionMismatch { expected: n, found: m.n() });
            }
            Ok(m)
        }
    }
}

/// Checks of a named fixture.
pub fn verify_fixture(name: &str, cfg: &RunConfig) -> Result<Vec<Check>> {
    match name {
        "m3" => verify_m3(cfg),
        "3bit" => verify_three_bit(cfg),
        "3bit-ff" => verify_three_bit_ff(cfg),
        "klocal-dims" => verify_klocal_dims(),
        other => Err(Error::invalid(format!("unknown fixture '{other}' (expected m3, 3bit, 3bit-ff or klocal-dims)"))),
    }
}

fn verify_m3(cfg: &RunConfig) -> Result<Vec<Check>> {
    let u = fixtures::m3_subspace();
    let corner = fixtures::m3_corner();
    let mut checks = Vec::new();
    let d = analyze_cone(&corner, &u, cfg)?;
    checks.push(Check::new("dim K(0⊕1)", 2, d.dim_k));
    checks.push(Check::new("0⊕1 is a member", true, is_ground_projection(&corner, &u, cfg)?));
    for (sign, tag) in [(1.0, "+"), (-1.0, "-")] {
        let p = fixtures::m3_p_pm(sign);
        checks.push(Check::new(&format!("p{tag} is a coatom"), true, is_coatom(&p, &u, cfg)?));
    }
    let qs = coatom_decomposition(&corner, &u, cfg)?;
    let matched = [1.0, -1.0].iter().filter(|&&s| qs.iter().any(|q| q.approx_eq(&fixtures::m3_p_pm(s), 1e-7))).count();
    checks.push(Check::new("decomposition of 0⊕1 is {p+, p-}", "2 of 2", format!("{matched} of {}", qs.len().max(2))));
    let rays = extreme_rays(&d, &u, cfg)?;
    let ray_hits = [1.0, -1.0]
        .iter()
        .filter(|&&s| {
            let target = fixtures::m3_u_pm(s);
            let t = target.scale(1.0 / target.frobenius_norm());
            rays.iter().any(|r| (&r.scale(1.0 / r.frobenius_norm()) - &t).frobenius_norm() <= 1e-6)
        })
        .count();
    checks.push(Check::new("rays of K(0⊕1) are u+ and u-", 2, ray_hits));
    let member = fixtures::m3_family_member(num_complex::Complex64::from_polar(1.0, 0.4));
    checks.push(Check::new("p(-z)⊕0 is a coatom", true, is_coatom(&member, &u, cfg)?));
    Ok(checks)
}

fn subsets_of(n: usize, size: usize) -> impl Iterator<Item = Vec<usize>> {
    (0..n).combinations(size)
}

fn verify_three_bit(cfg: &RunConfig) -> Result<Vec<Check>> {
    let u = fixtures::three_bit_subspace();
    let cfg = RunConfig { engine: Some(Engine::ExactCommutative), ..cfg.clone() };
    let mut checks = vec![Check::new("dim U_(2)", 7, u.dim())];
    let set = enumerate_coatoms(&u, &cfg)?;
    checks.push(Check::new("coatoms", 16, set.coatoms.len()));
    let edges = set.coatoms.iter().filter(|p| fixtures::is_parity_edge(p.complement().support().unwrap_or(&[]))).count();
    checks.push(Check::new("coatom complements are parity edges", 16, edges));

    let mut members_small = 0;
    let mut members_seven = 0;
    let mut small_coatoms = 0;
    for mask in 0u32..256 {
        let s: Vec<usize> = (0..8).filter(|x| mask >> x & 1 == 1).collect();
        let p = Projection::from_support(8, s.iter().copied())?;
        let d = analyze_cone(&p, &u, &cfg)?;
        let member = d.q_max.support() == Some(&s[..]);
        if s.len() <= 3 && member {
            members_small += 1;
        }
        if s.len() == 7 && member {
            members_seven += 1;
        }
        if s.len() <= 5 && member && d.dim_k == 1 {
            small_coatoms += 1;
        }
    }
    checks.push(Check::new("members with |p| ≤ 3", 93, members_small));
    checks.push(Check::new("members with |p| = 7", 0, members_seven));
    checks.push(Check::new("coatoms with |p| ≤ 5", 0, small_coatoms));

    let lattice = build_lattice(&u, &cfg)?;
    let mut dual_fours = 0;
    let mut exceptions = Vec::new();
    for s in subsets_of(8, 4) {
        let rest: Vec<usize> = (0..8).filter(|x| !s.contains(x)).collect();
        if lattice.contains_support(&rest) {
            dual_fours += 1;
        } else {
            exceptions.push(s);
        }
    }
    checks.push(Check::new("four-sets in the dual lattice", 68, dual_fours));
    let mut expected: Vec<Vec<usize>> = vec![fixtures::V_PLUS.to_vec(), fixtures::V_MINUS.to_vec()];
    expected.sort();
    exceptions.sort();
    checks.push(Check::new("exceptions", format!("{expected:?}"), format!("{exceptions:?}")));
    checks.push(Check::new("lattice nodes", 226, lattice.nodes.len()));
    Ok(checks)
}

fn verify_three_bit_ff(cfg: &RunConfig) -> Result<Vec<Check>> {
    let q = ff_lattice_3bit();
    let mut checks = Vec::new();
    let small = (0..=2).flat_map(|k| subsets_of(8, k)).filter(|s| q.contains_support(s)).count();
    checks.push(Check::new("nodes with |p| ≤ 2", 37, small));
    let fives = subsets_of(8, 5)
        .filter(|s| {
            let rest: Vec<usize> = (0..8).filter(|x| !s.contains(x)).collect();
            q.contains_support(&rest)
        })
        .count();
    checks.push(Check::new("five-sets in the dual lattice", 48, fives));
    let hamming_one = q
        .coatoms
        .iter()
        .filter(|&&c| {
            let comp = q.nodes[c].complement();
            let s = comp.support().unwrap_or(&[]);
            s.len() == 2 && (s[0] ^ s[1]).count_ones() == 1
        })
        .count();
    checks.push(Check::new("dual atoms are non-horizontal edges", 12, hamming_one));
    let p = build_lattice(&fixtures::three_bit_subspace(), cfg)?;
    let inside = q.nodes.iter().filter(|n| p.contains(n)).count();
    checks.push(Check::new("frustration-free nodes that are ground projections", q.nodes.len(), inside));
    Ok(checks)
}

fn verify_klocal_dims() -> Result<Vec<Check>> {
    let mut checks = vec![
        Check::new("dim U_(2), 3 bits", 7, build_klocal(&SiteSystem::bits(3)?, 2)?.dim()),
        Check::new("dim U_(2), 3 qubits", 37, build_klocal(&SiteSystem::qubits(3)?, 2)?.dim()),
        Check::new("dim of 2-body marginals, 3 qubits", 36, build_klocal(&SiteSystem::qubits(3)?, 2)?.dim() - 1),
        Check::new(
            "affine dim of 2-marginal polytope, 3 bits",
            6,
            affine_dimension(&marginal_polytope_vertices(&SiteSystem::bits(3)?, 2)?),
        ),
    ];
    for n in 1..=4 {
        for k in 1..=n {
            for sys in [SiteSystem::bits(n)?, SiteSystem::qubits(n)?] {
                let m: usize = if sys.is_classical() { 2 } else { 4 };
                let closed = 1 + (1..=k).map(|l| binomial(n, l) * (m - 1).pow(l as u32)).sum::<usize>();
                checks.push(Check::new(&format!("dim U_({k}) for {sys}"), closed, build_klocal(&sys, k)?.dim()));
            }
        }
    }
    Ok(checks)
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run_with_output(std::iter::once("groundspace").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn split_k_token() {
        let args: Vec<String> = ["bits:N=3", "k=2", "id"].iter().map(|s| s.to_string()).collect();
        let (s, k, rest) = split_k(&args).unwrap();
        assert_eq!((s.as_str(), k, rest.len()), ("bits:N=3", Some(2), 1));
    }

    #[test]
    fn membership_of_identity() {
        let (code, out, _) = run(&["membership", "m3-example", "id"]);
        assert_eq!(code, 0);
        let doc: ReportDocument = serde_json::from_str(&out).unwrap();
        assert_eq!(doc.results["member"], true);
        assert_eq!(doc.results["dim_K"], 0);
    }

    #[test]
    fn unknown_fixture_is_an_input_error() {
        let (code, _, err) = run(&["verify", "nope"]);
        assert_eq!(code, EXIT_INPUT);
        assert!(err.contains("unknown fixture"));
    }

    #[test]
    fn dot_only_for_lattices() {
        assert_eq!(run(&["--out", "dot", "qmax", "m3", "id"]).0, EXIT_INPUT);
        let (code, out, _) = run(&["--out", "dot", "lattice", "span{id}"]);
        assert_eq!(code, 0);
        assert!(out.contains("n0 -> n1"));
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(4, 2), 6);
        assert_eq!(binomial(3, 0), 1);
    }
}
