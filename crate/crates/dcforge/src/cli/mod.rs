//! Command-line front end: config-driven solves with CSV traces and
//! certificate files, verification batteries over the benchmark zoo, trace
//! post-processing, and the paired-trace reduction demos.
//!
//! Config files are flat `key = value` text (one pair per line, `#` starts
//! a comment). All floating-point output uses 17 significant digits so
//! traces round-trip exactly; with timing off (the default) identical
//! configs produce byte-identical files.
//!
//! Exit codes: 0 success, 1 a certificate or check failed, 2 configuration
//! error, 3 solver or I/O error. The `DCFORGE_LOG` environment variable
//! (`quiet`, `info`, `trace`) controls progress output on stderr.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::analysis::{
    certify_equivalence, certify_kkt, certify_rates, check_problem_stationarity,
    estimate_curvature, Certificate, CertificateKind,
};
use crate::connections::{run_demo, DEMO_NAMES};
use crate::error::DcError;
use crate::problems::zoo::{self, FwPlusInstance};
use crate::problems::{
    BenchmarkInstance, DcProblem, Domain, Provenance, QuadraticForm, SmoothFn,
};
use crate::solvers::{
    cccp_plus_solve, cccp_solve, fw_plus_solve, fw_solve, FwFeasible, IterateRow, IterateTrace,
    SolveConfig, StepRule,
};
use crate::transforms::{self, EpigraphLift};

const TRACE_HEADER: &str = "k,objective,fw_gap,dc_gap,step_size,inner_iters,kkt_residual,feas_max,wall_ms";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum LogLevel {
    Quiet,
    Info,
    Trace,
}

fn parse_log_level(value: Option<&str>) -> LogLevel {
    match value {
        Some("quiet") => LogLevel::Quiet,
        Some("trace") => LogLevel::Trace,
        _ => LogLevel::Info,
    }
}

fn log_level() -> LogLevel {
    parse_log_level(std::env::var("DCFORGE_LOG").ok().as_deref())
}

fn info(msg: &str) {
    if log_level() >= LogLevel::Info {
        eprintln!("{msg}");
    }
}

fn trace_log(msg: &str) {
    if log_level() >= LogLevel::Trace {
        eprintln!("{msg}");
    }
}

/// A failed command, split by exit code: configuration problems exit 2,
/// solver and I/O problems exit 3. (Certificate failures are not errors;
/// they surface as exit 1 through a command's `Ok(false)`.)
#[derive(Debug)]
pub enum Failure {
    Config(String),
    Runtime(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Config(_) => 2,
            Failure::Runtime(_) => 3,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Failure::Config(m) | Failure::Runtime(m) => m,
        }
    }
}

fn config_failure(e: DcError) -> Failure {
    Failure::Config(e.to_string())
}

fn runtime_failure(e: DcError) -> Failure {
    Failure::Runtime(e.to_string())
}

#[derive(Parser)]
#[command(name = "dcforge", about = "Difference-of-convex optimization toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one configured instance; write trace.csv, certificates.txt, meta.txt.
    Run {
        /// Path to a flat key = value config file.
        config: PathBuf,
        /// Override the outer iteration budget.
        #[arg(long)]
        max_iters: Option<usize>,
        /// Override the convergence gap tolerance.
        #[arg(long)]
        gap_tol: Option<f64>,
        /// Override the instance-generation seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Override the output directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a certificate battery: equivalence, rates, connections, or all.
    Verify {
        suite: String,
    },
    /// Post-process a run directory into summary.md and gap_vs_bound.dat.
    Report {
        dir: PathBuf,
    },
    /// Run one paired-trace reduction demo by name.
    Demo {
        name: String,
    },
}

/// Parses `args` (argv[0] included) and executes the chosen command,
/// returning the process exit code.
pub fn dispatch<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let uses_stderr = e.use_stderr();
            let _ = e.print();
            return if uses_stderr { 2 } else { 0 };
        }
    };
    let outcome = match cli.command {
        Command::Run { config, max_iters, gap_tol, seed, out } => {
            let overrides = RunOverrides { max_iters, gap_tol, seed, out };
            execute_run(&config, &overrides)
        }
        Command::Verify { suite } => execute_verify(&suite),
        Command::Report { dir } => execute_report(&dir).map(|()| true),
        Command::Demo { name } => execute_demo(&name),
    };
    match outcome {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(f) => {
            eprintln!("error: {}", f.message());
            f.exit_code()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    Fw,
    FwPlus,
    Cccp,
    CccpPlus,
}

impl Algorithm {
    pub fn as_str(self) -> &'static str {
        match self {
            Algorithm::Fw => "fw",
            Algorithm::FwPlus => "fw_plus",
            Algorithm::Cccp => "cccp",
            Algorithm::CccpPlus => "cccp_plus",
        }
    }

    fn parse(name: &str) -> Result<Algorithm, DcError> {
        match name {
            "fw" => Ok(Algorithm::Fw),
            "fw_plus" => Ok(Algorithm::FwPlus),
            "cccp" => Ok(Algorithm::Cccp),
            "cccp_plus" => Ok(Algorithm::CccpPlus),
            other => Err(DcError::Config(format!(
                "unknown algorithm {other:?}; valid: fw, fw_plus, cccp, cccp_plus"
            ))),
        }
    }
}

/// Inline unconstrained quadratic difference program, assembled from the
/// `dim`/`f_*`/`g_*`/`x_init` config keys.
#[derive(Debug, Clone)]
pub struct InlineQuadratic {
    pub f: QuadraticForm,
    pub g: QuadraticForm,
    pub x_init: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub instance: String,
    pub inline: Option<InlineQuadratic>,
    pub algorithm: Algorithm,
    pub solve: SolveConfig,
    pub certificates: Vec<CertificateKind>,
    pub output_dir: PathBuf,
    pub seed: u64,
}

#[derive(Debug, Default, Clone)]
pub struct RunOverrides {
    pub max_iters: Option<usize>,
    pub gap_tol: Option<f64>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
}

fn parse_typed<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, DcError> {
    value
        .parse::<T>()
        .map_err(|_| DcError::Config(format!("key {key:?} has unparsable value {value:?}")))
}

fn parse_f64_list(key: &str, value: &str) -> Result<Vec<f64>, DcError> {
    value
        .split(',')
        .map(|part| parse_typed::<f64>(key, part.trim()))
        .collect()
}

fn parse_certificate_kind(name: &str) -> Result<CertificateKind, DcError> {
    const KINDS: [CertificateKind; 9] = [
        CertificateKind::ConcaveGapRate,
        CertificateKind::DcGapRate,
        CertificateKind::ConstrainedGapRate,
        CertificateKind::DcConstrainedGapRate,
        CertificateKind::ConvexValueRate,
        CertificateKind::ConvexFeasibilityRate,
        CertificateKind::Equivalence,
        CertificateKind::Kkt,
        CertificateKind::Stationarity,
    ];
    KINDS
        .into_iter()
        .find(|k| k.as_str() == name)
        .ok_or_else(|| {
            let valid: Vec<&str> = KINDS.iter().map(|k| k.as_str()).collect();
            DcError::Config(format!(
                "unknown certificate {name:?}; valid: {}",
                valid.join(", ")
            ))
        })
}

/// Parses a flat `key = value` config file. Unknown, duplicate, and missing
/// required keys are all rejected so typos cannot silently change a run.
pub fn parse_run_config(text: &str) -> Result<RunConfig, DcError> {
    let mut map: BTreeMap<String, String> = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(DcError::Config(format!(
                "config line {}: expected key = value, got {raw:?}",
                idx + 1
            )));
        };
        let key = key.trim().to_string();
        if map.insert(key.clone(), value.trim().to_string()).is_some() {
            return Err(DcError::Config(format!("duplicate config key {key:?}")));
        }
    }

    let mut take = |key: &str| map.remove(key);
    let instance = take("instance")
        .ok_or_else(|| DcError::Config("missing required key 'instance'".into()))?;
    let algorithm = Algorithm::parse(
        &take("algorithm")
            .ok_or_else(|| DcError::Config("missing required key 'algorithm'".into()))?,
    )?;
    let output_dir = PathBuf::from(
        take("out").ok_or_else(|| DcError::Config("missing required key 'out'".into()))?,
    );

    let mut solve = SolveConfig::default();
    if let Some(v) = take("max_iters") {
        solve.max_outer_iters = parse_typed("max_iters", &v)?;
    }
    if let Some(v) = take("gap_tol") {
        solve.gap_tol = parse_typed("gap_tol", &v)?;
    }
    if let Some(v) = take("eps_inner") {
        solve.eps_inner = parse_typed("eps_inner", &v)?;
    }
    if let Some(v) = take("inner_max_iters") {
        solve.inner_max_iters = parse_typed("inner_max_iters", &v)?;
    }
    if let Some(v) = take("step_rule") {
        solve.step_rule = match v.as_str() {
            "unit" => StepRule::Unit,
            "harmonic" => StepRule::Harmonic,
            "greedy" => StepRule::GreedyLinesearch,
            other => {
                return Err(DcError::Config(format!(
                    "unknown step_rule {other:?}; valid: unit, harmonic, greedy"
                )))
            }
        };
    }
    if let Some(v) = take("barrier_mu0") {
        solve.barrier_mu0 = parse_typed("barrier_mu0", &v)?;
    }
    if let Some(v) = take("barrier_shrink") {
        solve.barrier_shrink = parse_typed("barrier_shrink", &v)?;
    }
    if let Some(v) = take("unbounded_norm_threshold") {
        solve.unbounded_norm_threshold = parse_typed("unbounded_norm_threshold", &v)?;
    }
    if let Some(v) = take("record_timing") {
        solve.record_timing = parse_typed("record_timing", &v)?;
    }

    let certificates = match take("certificates") {
        None => Vec::new(),
        Some(list) => list
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(parse_certificate_kind)
            .collect::<Result<Vec<_>, _>>()?,
    };
    let seed = match take("seed") {
        None => 0,
        Some(v) => parse_typed("seed", &v)?,
    };

    let inline = if instance == "inline_quadratic" {
        let dim: usize = parse_typed(
            "dim",
            &take("dim").ok_or_else(|| DcError::Config("inline_quadratic needs 'dim'".into()))?,
        )?;
        if dim == 0 {
            return Err(DcError::Config("inline dimension must be positive".into()));
        }
        let mut matrix = |key: &str| -> Result<Vec<f64>, DcError> {
            let v = take(key)
                .ok_or_else(|| DcError::Config(format!("inline_quadratic needs {key:?}")))?;
            let q = parse_f64_list(key, &v)?;
            if q.len() != dim * dim {
                return Err(DcError::Config(format!(
                    "key {key:?} needs {} row-major entries, got {}",
                    dim * dim,
                    q.len()
                )));
            }
            Ok(q)
        };
        let f_q = matrix("f_q")?;
        let g_q = matrix("g_q")?;
        let mut vector = |key: &str, default: Vec<f64>| -> Result<Vec<f64>, DcError> {
            let Some(v) = take(key) else { return Ok(default) };
            let x = parse_f64_list(key, &v)?;
            if x.len() != dim {
                return Err(DcError::Config(format!(
                    "key {key:?} needs {dim} entries, got {}",
                    x.len()
                )));
            }
            Ok(x)
        };
        let f_lin = vector("f_lin", vec![0.0; dim])?;
        let g_lin = vector("g_lin", vec![0.0; dim])?;
        let x_init = vector("x_init", vec![0.0; dim])?;
        let f_const = match take("f_const") {
            None => 0.0,
            Some(v) => parse_typed("f_const", &v)?,
        };
        let g_const = match take("g_const") {
            None => 0.0,
            Some(v) => parse_typed("g_const", &v)?,
        };
        Some(InlineQuadratic {
            f: QuadraticForm::new(dim, f_q, f_lin, f_const),
            g: QuadraticForm::new(dim, g_q, g_lin, g_const),
            x_init,
        })
    } else {
        None
    };

    if !map.is_empty() {
        let keys: Vec<&str> = map.keys().map(String::as_str).collect();
        return Err(DcError::Config(format!("unknown config keys: {}", keys.join(", "))));
    }

    Ok(RunConfig { instance, inline, algorithm, solve, certificates, output_dir, seed })
}

/// Resolves the configured instance. Bare seeded family names
/// (`quadratic_dc`, `dc_constrained`) take their seed from the config;
/// explicit `family:<seed>` names carry their own.
pub fn resolve_instance(cfg: &RunConfig) -> Result<BenchmarkInstance, DcError> {
    if cfg.instance == "inline_quadratic" {
        let inline = cfg
            .inline
            .as_ref()
            .ok_or_else(|| DcError::Config("inline_quadratic needs its inline keys".into()))?;
        let problem = DcProblem::new(
            SmoothFn::quadratic(inline.f.clone()),
            SmoothFn::quadratic(inline.g.clone()),
            Domain::whole_space(inline.x_init.len()),
            Vec::new(),
            inline.x_init.clone(),
        )?;
        return Ok(BenchmarkInstance {
            name: "inline_quadratic".into(),
            problem,
            known_optimum: None,
            known_stationary_points: None,
            provenance: Provenance::GridOracle,
        });
    }
    match cfg.instance.as_str() {
        "quadratic_dc" => Ok(zoo::make_seeded_quadratic_dc(cfg.seed)),
        "dc_constrained" => Ok(zoo::make_seeded_dc_constrained(cfg.seed)),
        name => zoo::instance_by_name(name),
    }
}

/// Rejects algorithm/instance pairs up front: the surrogate and
/// conditional-gradient base methods handle only unconstrained differences,
/// and the constrained variants require difference-of-convex constraints.
pub fn validate_algorithm(algorithm: Algorithm, p: &DcProblem) -> Result<(), DcError> {
    let constrained = !p.dc_constraints.is_empty();
    match algorithm {
        Algorithm::Cccp | Algorithm::Fw if constrained => Err(DcError::Config(format!(
            "algorithm {} handles only unconstrained instances; use cccp_plus or fw_plus",
            algorithm.as_str()
        ))),
        Algorithm::CccpPlus | Algorithm::FwPlus if !constrained => Err(DcError::Config(format!(
            "algorithm {} requires difference-of-convex constraints; use cccp or fw",
            algorithm.as_str()
        ))),
        _ => Ok(()),
    }
}

fn lift_for_problem(p: &DcProblem) -> Result<EpigraphLift, DcError> {
    if !p.dc_constraints.is_empty() {
        transforms::lift_dc_constrained(p)
    } else if p.domain.is_whole_space() {
        transforms::lift_basic(p)
    } else {
        transforms::lift_convex_constrained(p)
    }
}

/// Runs the chosen driver. The conditional-gradient algorithms run on the
/// problem's epigraph lift, so their trace rows live in lifted coordinates.
pub fn solve_with(
    algorithm: Algorithm,
    p: &DcProblem,
    config: &SolveConfig,
) -> Result<IterateTrace, DcError> {
    match algorithm {
        Algorithm::Cccp => cccp_solve(p, config),
        Algorithm::CccpPlus => cccp_plus_solve(p, config),
        Algorithm::Fw | Algorithm::FwPlus => {
            let lift = lift_for_problem(p)?;
            let omega1 = lift.embed(&p.x_init);
            if p.dc_constraints.is_empty() {
                fw_solve(lift.phi(), &FwFeasible::Lift(&lift), &omega1, config)
            } else {
                fw_plus_solve(lift.phi(), &FwFeasible::Lift(&lift), lift.psis(), &omega1, config)
            }
        }
    }
}

fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(fmt_f64).unwrap_or_default()
}

pub fn render_trace_csv(trace: &IterateTrace) -> String {
    let mut out = String::with_capacity(64 * (trace.rows.len() + 1));
    out.push_str(TRACE_HEADER);
    out.push('\n');
    for row in &trace.rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            row.k,
            fmt_f64(row.objective),
            fmt_opt(row.fw_gap),
            fmt_opt(row.dc_gap),
            fmt_f64(row.step_size),
            row.inner_iters,
            fmt_opt(row.kkt_residual),
            fmt_f64(row.feas_max),
            fmt_opt(row.wall_ms),
        );
    }
    out
}

fn parse_opt_f64(key: &str, value: &str) -> Result<Option<f64>, DcError> {
    if value.is_empty() {
        Ok(None)
    } else {
        parse_typed::<f64>(key, value).map(Some)
    }
}

/// Parses a trace produced by [`render_trace_csv`]. The header must match
/// exactly and at least one data row must be present.
pub fn parse_trace_csv(text: &str) -> Result<Vec<IterateRow>, DcError> {
    let mut lines = text.lines();
    let Some(header) = lines.next() else {
        return Err(DcError::Config("trace.csv is empty".into()));
    };
    if header != TRACE_HEADER {
        return Err(DcError::Config(format!(
            "trace.csv has an unexpected header {header:?}"
        )));
    }
    let mut rows = Vec::new();
    for (idx, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let parts: Vec<&str> = line.split(',').collect();
        if parts.len() != 9 {
            return Err(DcError::Config(format!(
                "trace.csv data line {} has {} fields, expected 9",
                idx + 1,
                parts.len()
            )));
        }
        rows.push(IterateRow {
            k: parse_typed("k", parts[0])?,
            objective: parse_typed("objective", parts[1])?,
            fw_gap: parse_opt_f64("fw_gap", parts[2])?,
            dc_gap: parse_opt_f64("dc_gap", parts[3])?,
            step_size: parse_typed("step_size", parts[4])?,
            inner_iters: parse_typed("inner_iters", parts[5])?,
            kkt_residual: parse_opt_f64("kkt_residual", parts[6])?,
            feas_max: parse_typed("feas_max", parts[7])?,
            wall_ms: parse_opt_f64("wall_ms", parts[8])?,
        });
    }
    if rows.is_empty() {
        return Err(DcError::Config("trace.csv has no data rows".into()));
    }
    Ok(rows)
}

fn render_certificates(certs: &[Certificate]) -> String {
    let mut out = String::new();
    for c in certs {
        let _ = writeln!(
            out,
            "{} {} {}",
            c.kind,
            if c.passed { "pass" } else { "fail" },
            fmt_f64(c.worst_margin)
        );
    }
    out
}

fn render_meta(inst: &BenchmarkInstance, cfg: &RunConfig, trace: &IterateTrace) -> String {
    let mut out = format!(
        "instance = {}\nalgorithm = {}\nseed = {}\n",
        inst.name,
        cfg.algorithm.as_str(),
        cfg.seed
    );
    if let (Some((_, optimal)), Some(first)) = (inst.known_optimum.as_ref(), trace.rows.first()) {
        let _ = writeln!(out, "initial_minus_optimal = {}", fmt_f64(first.objective - optimal));
    }
    out
}

/// Evaluates one requested certificate against the finished run.
fn evaluate_certificate(
    kind: CertificateKind,
    inst: &BenchmarkInstance,
    trace: &IterateTrace,
    solve: &SolveConfig,
) -> Result<Certificate, DcError> {
    let optimal = inst.known_optimum.as_ref().map(|(_, v)| *v);
    Ok(match kind {
        CertificateKind::ConcaveGapRate
        | CertificateKind::DcGapRate
        | CertificateKind::ConstrainedGapRate
        | CertificateKind::DcConstrainedGapRate
        | CertificateKind::ConvexValueRate
        | CertificateKind::ConvexFeasibilityRate => {
            certify_rates(trace, kind, optimal, None, solve.eps_inner)
        }
        CertificateKind::Kkt => certify_kkt(trace, solve.eps_inner),
        CertificateKind::Equivalence => {
            certify_equivalence(&inst.problem, solve, solve.max_outer_iters)?
        }
        CertificateKind::Stationarity => {
            let last = trace
                .iterates
                .last()
                .ok_or_else(|| DcError::Config("run produced no iterates".into()))?;
            let x = &last[..inst.problem.dim()];
            check_problem_stationarity(&inst.problem, x, 1e-4, solve)?
        }
        CertificateKind::NotApplicable => Certificate {
            kind: CertificateKind::NotApplicable,
            passed: true,
            worst_margin: 0.0,
            details: "nothing requested".into(),
        },
    })
}

/// Loads and runs one config file. `Ok(true)` means every requested
/// certificate passed.
pub fn execute_run(config_path: &Path, overrides: &RunOverrides) -> Result<bool, Failure> {
    let text = fs::read_to_string(config_path).map_err(|e| {
        Failure::Config(format!("cannot read config {}: {e}", config_path.display()))
    })?;
    let mut cfg = parse_run_config(&text).map_err(config_failure)?;
    if let Some(n) = overrides.max_iters {
        cfg.solve.max_outer_iters = n;
    }
    if let Some(g) = overrides.gap_tol {
        cfg.solve.gap_tol = g;
    }
    if let Some(s) = overrides.seed {
        cfg.seed = s;
    }
    if let Some(o) = &overrides.out {
        cfg.output_dir = o.clone();
    }
    cfg.solve.validate().map_err(config_failure)?;
    let inst = resolve_instance(&cfg).map_err(config_failure)?;
    validate_algorithm(cfg.algorithm, &inst.problem).map_err(config_failure)?;

    info(&format!(
        "run: instance {} algorithm {} iters {} seed {}",
        inst.name,
        cfg.algorithm.as_str(),
        cfg.solve.max_outer_iters,
        cfg.seed
    ));
    let trace = solve_with(cfg.algorithm, &inst.problem, &cfg.solve).map_err(runtime_failure)?;
    info(&format!("run: {} iterations recorded ({:?})", trace.rows.len(), trace.status));
    for row in &trace.rows {
        trace_log(&format!(
            "  k {} objective {} gap {}",
            row.k,
            fmt_f64(row.objective),
            fmt_opt(row.fw_gap.or(row.dc_gap))
        ));
    }

    let mut certs = Vec::new();
    for kind in &cfg.certificates {
        certs.push(evaluate_certificate(*kind, &inst, &trace, &cfg.solve).map_err(runtime_failure)?);
    }

    let dir = &cfg.output_dir;
    fs::create_dir_all(dir)
        .map_err(|e| Failure::Runtime(format!("cannot create {}: {e}", dir.display())))?;
    let write = |name: &str, content: String| -> Result<(), Failure> {
        fs::write(dir.join(name), content)
            .map_err(|e| Failure::Runtime(format!("cannot write {name}: {e}")))
    };
    write("trace.csv", render_trace_csv(&trace))?;
    write("certificates.txt", render_certificates(&certs))?;
    write("meta.txt", render_meta(&inst, &cfg, &trace))?;

    for c in &certs {
        info(&format!(
            "certificate {}: {} (margin {:.3e})",
            c.kind,
            if c.passed { "pass" } else { "FAIL" },
            c.worst_margin
        ));
    }
    Ok(certs.iter().all(|c| c.passed))
}

/// Post-processes a run directory: `summary.md` with the headline numbers
/// and `gap_vs_bound.dat` with whitespace-separated `k  min-gap-so-far
/// [bound]` rows. The bound column appears when meta.txt recorded the
/// initial-above-optimal value.
pub fn execute_report(dir: &Path) -> Result<(), Failure> {
    let trace_path = dir.join("trace.csv");
    let text = fs::read_to_string(&trace_path).map_err(|e| {
        Failure::Config(format!("cannot read {}: {e}", trace_path.display()))
    })?;
    let rows = parse_trace_csv(&text).map_err(config_failure)?;

    let initial_minus_optimal = fs::read_to_string(dir.join("meta.txt"))
        .ok()
        .and_then(|meta| {
            meta.lines().find_map(|line| {
                let (key, value) = line.split_once('=')?;
                if key.trim() == "initial_minus_optimal" {
                    value.trim().parse::<f64>().ok()
                } else {
                    None
                }
            })
        });

    let use_dc = rows.iter().any(|r| r.dc_gap.is_some());
    if !use_dc && !rows.iter().any(|r| r.fw_gap.is_some()) {
        return Err(Failure::Config("trace.csv records no gap columns".into()));
    }
    let gap_name = if use_dc { "dc_gap" } else { "fw_gap" };

    let mut dat = String::new();
    let mut min_so_far = f64::INFINITY;
    let mut best: Option<(usize, f64)> = None;
    let mut worst_bound_margin = f64::INFINITY;
    for row in &rows {
        let gap = if use_dc { row.dc_gap } else { row.fw_gap };
        if let Some(g) = gap {
            if g < min_so_far {
                min_so_far = g;
                best = Some((row.k, g));
            }
        }
        match initial_minus_optimal {
            Some(head) => {
                let bound = head / row.k as f64;
                worst_bound_margin = worst_bound_margin.min(bound - min_so_far);
                let _ = writeln!(dat, "{} {} {}", row.k, fmt_f64(min_so_far), fmt_f64(bound));
            }
            None => {
                let _ = writeln!(dat, "{} {}", row.k, fmt_f64(min_so_far));
            }
        }
    }
    let Some((best_k, best_gap)) = best else {
        return Err(Failure::Config(format!("trace.csv has no {gap_name} data")));
    };

    let final_objective = rows.last().map(|r| r.objective).unwrap_or(f64::NAN);
    let mut summary = String::from("# Run summary\n\n");
    let _ = writeln!(summary, "- rows: {}", rows.len());
    let _ = writeln!(summary, "- final objective: {}", fmt_f64(final_objective));
    let _ = writeln!(summary, "- gap column: {gap_name}");
    let _ = writeln!(summary, "- best gap: {} at iteration {}", fmt_f64(best_gap), best_k);
    match initial_minus_optimal {
        Some(head) => {
            let _ = writeln!(summary, "- initial objective above optimal: {}", fmt_f64(head));
            let _ = writeln!(
                summary,
                "- worst bound margin (min over k of head/k - min-gap-so-far): {}",
                fmt_f64(worst_bound_margin)
            );
        }
        None => {
            let _ = writeln!(summary, "- bound: unavailable (no recorded optimum)");
        }
    }

    fs::write(dir.join("gap_vs_bound.dat"), dat)
        .map_err(|e| Failure::Runtime(format!("cannot write gap_vs_bound.dat: {e}")))?;
    fs::write(dir.join("summary.md"), summary)
        .map_err(|e| Failure::Runtime(format!("cannot write summary.md: {e}")))?;
    info(&format!(
        "report: {} rows, best {gap_name} {} at iteration {}",
        rows.len(),
        fmt_f64(best_gap),
        best_k
    ));
    Ok(())
}

struct VerifyRow {
    label: String,
    ok: bool,
    detail: String,
}

impl VerifyRow {
    fn from_certificate(label: String, c: &Certificate, tolerance: f64) -> VerifyRow {
        VerifyRow {
            label,
            ok: c.passed || c.worst_margin >= -tolerance,
            detail: format!("margin {:.3e}", c.worst_margin),
        }
    }

    fn error(label: String, e: &DcError) -> VerifyRow {
        VerifyRow { label, ok: false, detail: format!("error: {e}") }
    }
}

/// Paired-path agreement over the unconstrained and constrained batteries.
fn verify_equivalence() -> Vec<VerifyRow> {
    let cfg = SolveConfig::default();
    let mut rows = Vec::new();

    let mut basic = vec!["quartic1d".to_string()];
    basic.extend((0..10).map(|s| format!("quadratic_dc:{s}")));
    for name in basic {
        let label = format!("equivalence {name}");
        let row = match zoo::instance_by_name(&name)
            .and_then(|inst| certify_equivalence(&inst.problem, &cfg, 50))
        {
            Ok(c) => VerifyRow::from_certificate(label, &c, 1e-8),
            Err(e) => VerifyRow::error(label, &e),
        };
        rows.push(row);
    }

    let mut constrained = vec!["ring2d:v1".to_string(), "ring2d:v2".to_string()];
    constrained.extend((0..5).map(|s| format!("dc_constrained:{s}")));
    for name in constrained {
        let label = format!("equivalence {name}");
        let row = match zoo::instance_by_name(&name)
            .and_then(|inst| certify_equivalence(&inst.problem, &cfg, 30))
        {
            Ok(c) => VerifyRow::from_certificate(label, &c, 1e-6),
            Err(e) => VerifyRow::error(label, &e),
        };
        rows.push(row);
    }
    rows
}

fn constrained_template_trace(
    inst: &FwPlusInstance,
    iters: usize,
) -> Result<IterateTrace, DcError> {
    let cfg = SolveConfig {
        max_outer_iters: iters,
        // Rate checks read the whole prefix; disable the early stop.
        gap_tol: 0.0,
        ..SolveConfig::default()
    };
    fw_plus_solve(&inst.phi, &FwFeasible::Geometric(&inst.domain), &inst.psis, &inst.omega1, &cfg)
}

/// Gap-rate and convex-mode rate bounds over instances with known optima.
fn verify_rates() -> Vec<VerifyRow> {
    let mut rows = Vec::new();
    let cccp_cfg = SolveConfig {
        max_outer_iters: 1000,
        gap_tol: 0.0,
        ..SolveConfig::default()
    };

    let mut named = vec!["quartic1d".to_string()];
    named.extend((0..10).map(|s| format!("quadratic_dc:{s}")));
    for name in named {
        let label = format!("dc gap rate {name}");
        let row = (|| -> Result<VerifyRow, DcError> {
            let inst = zoo::instance_by_name(&name)?;
            let trace = cccp_solve(&inst.problem, &cccp_cfg)?;
            let optimal = inst.known_optimum.as_ref().map(|(_, v)| *v);
            let c = certify_rates(
                &trace,
                CertificateKind::DcGapRate,
                optimal,
                None,
                cccp_cfg.eps_inner,
            );
            Ok(VerifyRow::from_certificate(label.clone(), &c, 0.0))
        })()
        .unwrap_or_else(|e| VerifyRow::error(label, &e));
        rows.push(row);
    }

    for inst in zoo::fwplus_concave_instances() {
        let label = format!("constrained gap rate {}", inst.name);
        let row = (|| -> Result<VerifyRow, DcError> {
            let trace = constrained_template_trace(&inst, 500)?;
            let c = certify_rates(
                &trace,
                CertificateKind::ConstrainedGapRate,
                inst.phi_star,
                None,
                1e-10,
            );
            let worst_psi = trace
                .rows
                .iter()
                .skip(1)
                .map(|r| r.feas_max)
                .fold(0.0f64, f64::max);
            let mut vr = VerifyRow::from_certificate(label.clone(), &c, 0.0);
            if worst_psi > 1e-6 {
                vr.ok = false;
                vr.detail = format!("{}; side-constraint violation {worst_psi:.3e}", vr.detail);
            }
            Ok(vr)
        })()
        .unwrap_or_else(|e| VerifyRow::error(label, &e));
        rows.push(row);
    }

    let box_inst = zoo::fwplus_convex_box_instance();
    for kind in [CertificateKind::ConvexValueRate, CertificateKind::ConvexFeasibilityRate] {
        let label = format!("{kind} {}", box_inst.name);
        let row = (|| -> Result<VerifyRow, DcError> {
            let trace = constrained_template_trace(&box_inst, 1000)?;
            let target = match kind {
                CertificateKind::ConvexValueRate => &box_inst.phi,
                _ => &box_inst.psis[0],
            };
            let est = estimate_curvature(target, &box_inst.domain, 32, 6)?;
            let c = certify_rates(&trace, kind, box_inst.phi_star, est.analytic_upper_bound, 1e-10);
            Ok(VerifyRow::from_certificate(label.clone(), &c, 0.0))
        })()
        .unwrap_or_else(|e| VerifyRow::error(label, &e));
        rows.push(row);
    }
    rows
}

/// The five paired-trace reduction demos.
fn verify_connections() -> Vec<VerifyRow> {
    let mut rows = Vec::new();
    for name in DEMO_NAMES {
        let label = format!("demo {name}");
        let row = match run_demo(name) {
            Ok(rep) => {
                for line in &rep.lines {
                    info(&format!("  [{name}] {line}"));
                }
                VerifyRow {
                    label,
                    ok: rep.passed,
                    detail: format!("{} checks", rep.lines.len()),
                }
            }
            Err(e) => VerifyRow::error(label, &e),
        };
        rows.push(row);
    }
    rows
}

/// Runs a named battery and prints its pass/fail table. `Ok(true)` iff every
/// row passed.
pub fn execute_verify(suite: &str) -> Result<bool, Failure> {
    let rows = match suite {
        "equivalence" => verify_equivalence(),
        "rates" => verify_rates(),
        "connections" => verify_connections(),
        "all" => {
            let mut rows = verify_equivalence();
            rows.extend(verify_rates());
            rows.extend(verify_connections());
            rows
        }
        other => {
            return Err(Failure::Config(format!(
                "unknown suite {other:?}; valid: equivalence, rates, connections, all"
            )))
        }
    };
    let failures = rows.iter().filter(|r| !r.ok).count();
    for row in &rows {
        println!(
            "{:4}  {:44}  {}",
            if row.ok { "ok" } else { "FAIL" },
            row.label,
            row.detail
        );
    }
    println!("suite {suite}: {} checks, {failures} failures", rows.len());
    Ok(failures == 0)
}

/// Runs one reduction demo and prints its check lines.
pub fn execute_demo(name: &str) -> Result<bool, Failure> {
    let rep = run_demo(name).map_err(|e| match e {
        DcError::Config(msg) => Failure::Config(msg),
        other => Failure::Runtime(other.to_string()),
    })?;
    for line in &rep.lines {
        println!("  {line}");
    }
    println!("demo {}: {}", rep.name, if rep.passed { "pass" } else { "FAIL" });
    Ok(rep.passed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::Lcg64;

    const QUARTIC_CFG: &str = "\
# reference run
instance = quartic1d
algorithm = cccp
max_iters = 100
gap_tol = 0
certificates = dc_gap_rate
out = PLACEHOLDER
";

    fn write_config(dir: &Path, out: &Path) -> PathBuf {
        let text = QUARTIC_CFG.replace("PLACEHOLDER", out.to_str().unwrap());
        let path = dir.join("run.cfg");
        fs::write(&path, text).unwrap();
        path
    }

    #[test]
    fn config_parser_reads_keys_comments_and_defaults() {
        let cfg = parse_run_config(
            "instance = quartic1d   # the 1-D workhorse\n\
             algorithm = cccp\n\
             \n\
             # a comment line\n\
             max_iters = 7\n\
             step_rule = harmonic\n\
             certificates = dc_gap_rate, kkt\n\
             seed = 11\n\
             out = runs/q\n",
        )
        .unwrap();
        assert_eq!(cfg.instance, "quartic1d");
        assert_eq!(cfg.algorithm, Algorithm::Cccp);
        assert_eq!(cfg.solve.max_outer_iters, 7);
        assert_eq!(cfg.solve.step_rule, StepRule::Harmonic);
        assert_eq!(cfg.solve.gap_tol, SolveConfig::default().gap_tol);
        assert_eq!(
            cfg.certificates,
            vec![CertificateKind::DcGapRate, CertificateKind::Kkt]
        );
        assert_eq!(cfg.seed, 11);
        assert_eq!(cfg.output_dir, PathBuf::from("runs/q"));
    }

    #[test]
    fn config_parser_rejects_unknown_duplicate_and_malformed_input() {
        let base = "instance = quartic1d\nalgorithm = cccp\nout = o\n";
        assert!(matches!(
            parse_run_config(&format!("{base}mystery = 3\n")),
            Err(DcError::Config(_))
        ));
        assert!(matches!(
            parse_run_config(&format!("{base}instance = again\n")),
            Err(DcError::Config(_))
        ));
        assert!(matches!(parse_run_config("just words\n"), Err(DcError::Config(_))));
        assert!(matches!(
            parse_run_config(&format!("{base}max_iters = many\n")),
            Err(DcError::Config(_))
        ));
        assert!(matches!(
            parse_run_config(&format!("{base}step_rule = sideways\n")),
            Err(DcError::Config(_))
        ));
        assert!(matches!(
            parse_run_config(&format!("{base}certificates = nonsense_rate\n")),
            Err(DcError::Config(_))
        ));
        assert!(matches!(
            parse_run_config("algorithm = cccp\nout = o\n"),
            Err(DcError::Config(_))
        ));
        assert!(matches!(
            parse_run_config("instance = quartic1d\nout = o\n"),
            Err(DcError::Config(_))
        ));
        assert!(matches!(
            parse_run_config("instance = quartic1d\nalgorithm = cccp\n"),
            Err(DcError::Config(_))
        ));
    }

    #[test]
    fn inline_quadratic_config_builds_a_problem() {
        let cfg = parse_run_config(
            "instance = inline_quadratic\n\
             algorithm = cccp\n\
             out = o\n\
             dim = 2\n\
             f_q = 2,0,0,2\n\
             f_lin = -1, 0.5\n\
             g_q = 1,0,0,1\n\
             x_init = 0.25, -0.25\n",
        )
        .unwrap();
        let inst = resolve_instance(&cfg).unwrap();
        assert_eq!(inst.problem.dim(), 2);
        assert_eq!(inst.problem.x_init, vec![0.25, -0.25]);
        assert!(inst.known_optimum.is_none());
    }

    #[test]
    fn inline_quadratic_rejects_wrong_matrix_sizes() {
        let text = "instance = inline_quadratic\nalgorithm = cccp\nout = o\ndim = 2\n\
                    f_q = 1,0,0\ng_q = 1,0,0,1\n";
        assert!(matches!(parse_run_config(text), Err(DcError::Config(_))));
        let text2 = "instance = inline_quadratic\nalgorithm = cccp\nout = o\ndim = 2\n\
                     f_q = 1,0,0,1\ng_q = 1,0,0,1\nx_init = 0\n";
        assert!(matches!(parse_run_config(text2), Err(DcError::Config(_))));
    }

    #[test]
    fn algorithm_compatibility_is_validated_both_ways() {
        let quartic = zoo::instance_by_name("quartic1d").unwrap();
        assert!(validate_algorithm(Algorithm::Cccp, &quartic.problem).is_ok());
        assert!(validate_algorithm(Algorithm::Fw, &quartic.problem).is_ok());
        assert!(matches!(
            validate_algorithm(Algorithm::CccpPlus, &quartic.problem),
            Err(DcError::Config(_))
        ));
        assert!(matches!(
            validate_algorithm(Algorithm::FwPlus, &quartic.problem),
            Err(DcError::Config(_))
        ));
        let ring = zoo::instance_by_name("ring2d:v1").unwrap();
        assert!(validate_algorithm(Algorithm::CccpPlus, &ring.problem).is_ok());
        assert!(matches!(
            validate_algorithm(Algorithm::Cccp, &ring.problem),
            Err(DcError::Config(_))
        ));
        assert!(matches!(
            validate_algorithm(Algorithm::Fw, &ring.problem),
            Err(DcError::Config(_))
        ));
    }

    #[test]
    fn seventeen_digit_floats_round_trip_bitwise() {
        let mut rng = Lcg64::new(0xC5C);
        for _ in 0..200 {
            let v = rng.uniform(-1.0, 1.0) * 10f64.powi(rng.below(40) as i32 - 20);
            let back: f64 = fmt_f64(v).parse().unwrap();
            assert_eq!(back.to_bits(), v.to_bits(), "{v}");
        }
        for v in [0.0, -0.25, 1e-300, f64::MIN_POSITIVE, 4.9e-324, 1e300] {
            let back: f64 = fmt_f64(v).parse().unwrap();
            assert_eq!(back.to_bits(), v.to_bits(), "{v}");
        }
    }

    #[test]
    fn trace_csv_round_trips_every_field() {
        let rows = vec![
            IterateRow {
                k: 1,
                objective: 0.1 + 0.2,
                fw_gap: Some(1.25e-3),
                dc_gap: None,
                step_size: 1.0,
                inner_iters: 4,
                kkt_residual: None,
                feas_max: 0.0,
                wall_ms: None,
            },
            IterateRow {
                k: 2,
                objective: -3.5,
                fw_gap: None,
                dc_gap: Some(7.7e-11),
                step_size: 0.5,
                inner_iters: 0,
                kkt_residual: Some(2.0e-12),
                feas_max: 1.0e-9,
                wall_ms: Some(0.25),
            },
        ];
        let trace = IterateTrace {
            rows: rows.clone(),
            iterates: vec![vec![0.0], vec![1.0]],
            status: crate::solvers::RunStatus::MaxIters,
        };
        let text = render_trace_csv(&trace);
        let back = parse_trace_csv(&text).unwrap();
        assert_eq!(back.len(), 2);
        for (a, b) in rows.iter().zip(&back) {
            assert_eq!(a.k, b.k);
            assert_eq!(a.objective.to_bits(), b.objective.to_bits());
            assert_eq!(a.fw_gap, b.fw_gap);
            assert_eq!(a.dc_gap, b.dc_gap);
            assert_eq!(a.step_size, b.step_size);
            assert_eq!(a.inner_iters, b.inner_iters);
            assert_eq!(a.kkt_residual, b.kkt_residual);
            assert_eq!(a.feas_max, b.feas_max);
            assert_eq!(a.wall_ms, b.wall_ms);
        }
    }

    #[test]
    fn trace_csv_parser_rejects_corrupt_input() {
        assert!(matches!(parse_trace_csv(""), Err(DcError::Config(_))));
        assert!(matches!(parse_trace_csv("a,b,c\n1,2,3\n"), Err(DcError::Config(_))));
        assert!(matches!(
            parse_trace_csv(&format!("{TRACE_HEADER}\n")),
            Err(DcError::Config(_))
        ));
        assert!(matches!(
            parse_trace_csv(&format!("{TRACE_HEADER}\n1,2,3\n")),
            Err(DcError::Config(_))
        ));
    }

    #[test]
    fn certificates_render_kind_outcome_and_margin() {
        let certs = vec![Certificate {
            kind: CertificateKind::DcGapRate,
            passed: true,
            worst_margin: 0.125,
            details: String::new(),
        }];
        assert_eq!(
            render_certificates(&certs),
            "dc_gap_rate pass 1.2500000000000000e-1\n"
        );
    }

    #[test]
    fn run_writes_deterministic_outputs_and_report_consumes_them() {
        let tmp = tempfile::tempdir().unwrap();
        let out_a = tmp.path().join("a");
        let out_b = tmp.path().join("b");
        let cfg_path = write_config(tmp.path(), &out_a);

        let ok = execute_run(&cfg_path, &RunOverrides::default()).unwrap();
        assert!(ok);
        let trace_a = fs::read(out_a.join("trace.csv")).unwrap();
        let rows = parse_trace_csv(std::str::from_utf8(&trace_a).unwrap()).unwrap();
        assert_eq!(rows.len(), 100);

        let overrides = RunOverrides { out: Some(out_b.clone()), ..RunOverrides::default() };
        assert!(execute_run(&cfg_path, &overrides).unwrap());
        let trace_b = fs::read(out_b.join("trace.csv")).unwrap();
        assert_eq!(trace_a, trace_b);

        let cert_text = fs::read_to_string(out_a.join("certificates.txt")).unwrap();
        assert!(cert_text.starts_with("dc_gap_rate pass "));
        let meta = fs::read_to_string(out_a.join("meta.txt")).unwrap();
        assert!(meta.contains("initial_minus_optimal = 2.5000000000000000e-1"));

        execute_report(&out_a).unwrap();
        let dat = fs::read_to_string(out_a.join("gap_vs_bound.dat")).unwrap();
        let mut prev = f64::INFINITY;
        for (i, line) in dat.lines().enumerate() {
            let cols: Vec<&str> = line.split_whitespace().collect();
            assert_eq!(cols.len(), 3);
            let k: usize = cols[0].parse().unwrap();
            assert_eq!(k, i + 1);
            let min_gap: f64 = cols[1].parse().unwrap();
            assert!(min_gap <= prev);
            prev = min_gap;
            let bound: f64 = cols[2].parse().unwrap();
            assert_eq!(bound.to_bits(), (0.25 / k as f64).to_bits());
        }
        let summary = fs::read_to_string(out_a.join("summary.md")).unwrap();
        assert!(summary.contains("- rows: 100"));
        assert!(summary.contains("- gap column: dc_gap"));
    }

    #[test]
    fn equal_parts_instance_records_vanishing_dc_gaps() {
        let tmp = tempfile::tempdir().unwrap();
        let out = tmp.path().join("run");
        let text = format!(
            "instance = inline_quadratic\nalgorithm = cccp\nout = {}\n\
             dim = 2\nf_q = 1,0,0,1\nf_lin = 0.5,-0.3\ng_q = 1,0,0,1\ng_lin = 0.5,-0.3\n\
             x_init = 0.4,0.9\nmax_iters = 5\n",
            out.display()
        );
        let cfg_path = tmp.path().join("eq.cfg");
        fs::write(&cfg_path, text).unwrap();
        assert!(execute_run(&cfg_path, &RunOverrides::default()).unwrap());
        let rows =
            parse_trace_csv(&fs::read_to_string(out.join("trace.csv")).unwrap()).unwrap();
        for row in &rows {
            assert!(row.dc_gap.unwrap().abs() <= 1e-10);
        }
    }

    #[test]
    fn incompatible_algorithm_fails_as_a_config_error() {
        let tmp = tempfile::tempdir().unwrap();
        let text = format!(
            "instance = quartic1d\nalgorithm = cccp_plus\nout = {}\n",
            tmp.path().join("x").display()
        );
        let cfg_path = tmp.path().join("bad.cfg");
        fs::write(&cfg_path, text).unwrap();
        let err = execute_run(&cfg_path, &RunOverrides::default()).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn missing_config_and_missing_trace_are_config_errors() {
        let tmp = tempfile::tempdir().unwrap();
        let err =
            execute_run(&tmp.path().join("nope.cfg"), &RunOverrides::default()).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        let err = execute_report(&tmp.path().join("norun")).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        let empty = tmp.path().join("empty");
        fs::create_dir_all(&empty).unwrap();
        fs::write(empty.join("trace.csv"), "").unwrap();
        let err = execute_report(&empty).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn seed_flag_selects_the_seeded_family_instance() {
        let cfg = parse_run_config(
            "instance = quadratic_dc\nalgorithm = cccp\nout = o\nseed = 3\n",
        )
        .unwrap();
        let inst = resolve_instance(&cfg).unwrap();
        assert_eq!(inst.name, zoo::make_seeded_quadratic_dc(3).name);
        let named = parse_run_config(
            "instance = quadratic_dc:5\nalgorithm = cccp\nout = o\nseed = 3\n",
        )
        .unwrap();
        let inst5 = resolve_instance(&named).unwrap();
        assert_eq!(inst5.name, zoo::make_seeded_quadratic_dc(5).name);
    }

    #[test]
    fn verify_connections_suite_passes() {
        assert!(execute_verify("connections").unwrap());
        assert!(matches!(
            execute_verify("everything"),
            Err(Failure::Config(_))
        ));
    }

    #[test]
    fn demo_command_reports_unknown_names_as_config_errors() {
        assert!(execute_demo("ppm").unwrap());
        let err = execute_demo("nope").unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn dispatch_maps_clap_and_command_outcomes_to_exit_codes() {
        assert_eq!(dispatch(["dcforge", "--help"]), 0);
        assert_eq!(dispatch(["dcforge", "frobnicate"]), 2);
        assert_eq!(dispatch(["dcforge", "verify", "no_such_suite"]), 2);
        assert_eq!(dispatch(["dcforge", "demo", "fwascccp"]), 0);
        let tmp = tempfile::tempdir().unwrap();
        let out = tmp.path().join("o");
        let cfg_path = write_config(tmp.path(), &out);
        assert_eq!(
            dispatch(["dcforge", "run", cfg_path.to_str().unwrap()]),
            0
        );
        assert_eq!(
            dispatch(["dcforge", "report", out.to_str().unwrap()]),
            0
        );
    }

    #[test]
    fn log_level_parsing_defaults_to_info() {
        assert_eq!(parse_log_level(Some("quiet")), LogLevel::Quiet);
        assert_eq!(parse_log_level(Some("trace")), LogLevel::Trace);
        assert_eq!(parse_log_level(Some("info")), LogLevel::Info);
        assert_eq!(parse_log_level(Some("loud")), LogLevel::Info);
        assert_eq!(parse_log_level(None), LogLevel::Info);
    }

    #[test]
    fn run_overrides_change_budget_and_tolerance() {
        let tmp = tempfile::tempdir().unwrap();
        let out = tmp.path().join("short");
        let cfg_path = write_config(tmp.path(), &out);
        let overrides = RunOverrides {
            max_iters: Some(12),
            gap_tol: Some(0.0),
            ..RunOverrides::default()
        };
        assert!(execute_run(&cfg_path, &overrides).unwrap());
        let rows =
            parse_trace_csv(&fs::read_to_string(out.join("trace.csv")).unwrap()).unwrap();
        assert_eq!(rows.len(), 12);
    }
}
