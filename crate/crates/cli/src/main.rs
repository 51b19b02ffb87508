//! Command line front end.
//!
//! Five subcommands cover the decision and construction workflow: `check`
//! decides interpolability (Pick matrix, Lyapunov domination, or both),
//! `interpolate` builds a function in the constructible regimes, `eval`
//! applies a stored function to an operator argument, `gen` produces test
//! instances, and `verify` replays a claimed interpolant against its
//! instance.
//!
//! Every run prints one JSON report to stdout and diagnostics to stderr.
//! Exit codes are part of the contract:
//!
//! - 0: feasible, dominates, or the requested artifact was produced
//! - 1: infeasible, violated, or a claimed solution failed its residuals
//! - 2: undecided (no exact route and sampling found no violation)
//! - 3: instance outside the constructible regimes of `interpolate`
//! - 4: usage, I/O, parse, or shape errors
//! - 5: contradiction between routes that must agree

mod report;

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

use pickwell::instancekit::{
    self, deserialize_function, deserialize_instance, deserialize_matrix, serialize_function,
    serialize_instance, serialize_matrix,
};
use pickwell::kernel;
use pickwell::lyapunov::{self, DominationStatus, DominationVerdict, DominationWitness};
use pickwell::pickclassic::{self, INTERP_TOL};
use pickwell::{Error, FeasibleMode, ProblemInstance, SchurFn, SchurOutcome};

use report::{
    digest, matrix_rows, DominationSection, EvalSection, FunctionBody, GenSection,
    InterpolationSection, PickSection, Report, VerifySection, WitnessSection,
};

#[derive(Parser)]
#[command(
    name = "pickwell",
    version,
    about = "Interpolation feasibility via completely positive map domination"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether the instance admits an interpolant.
    Check {
        /// Instance document to read.
        #[arg(long)]
        instance: PathBuf,
        /// Decision route.
        #[arg(long, value_enum, default_value_t = CheckMode::Domination)]
        mode: CheckMode,
        /// Override the instance's positivity tolerance.
        #[arg(long)]
        tol: Option<f64>,
        /// Randomized samples when no exact route exists (0 disables).
        #[arg(long, default_value_t = 200)]
        samples: usize,
        /// Sampling seed; defaults to the instance seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Worker threads for sampling. The verdict does not depend on it.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Construct an interpolant in the classically constructible regimes.
    Interpolate {
        /// Instance document to read.
        #[arg(long)]
        instance: PathBuf,
        /// Also write the function document here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate a stored function at an operator argument.
    Eval {
        /// Function document to read.
        #[arg(long)]
        function: PathBuf,
        /// Matrix document with the argument.
        #[arg(long)]
        point: PathBuf,
        /// Also write the value as a matrix document here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generate a test instance.
    Gen {
        /// Kind of instance to produce.
        #[arg(long, value_enum)]
        mode: GenMode,
        /// Generator seed.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of interpolation nodes (upper bound for scalar mode).
        #[arg(long, default_value_t = 3)]
        n: usize,
        /// Matrix size of each point block.
        #[arg(long, default_value_t = 2)]
        k: usize,
        /// Number of blocks per point.
        #[arg(long, default_value_t = 1)]
        d: usize,
        /// Where to write the instance document.
        #[arg(long)]
        out: PathBuf,
    },
    /// Check a claimed interpolant against its instance.
    Verify {
        /// Instance document to read.
        #[arg(long)]
        instance: PathBuf,
        /// Function document with the claimed interpolant.
        #[arg(long)]
        function: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum CheckMode {
    Pick,
    Domination,
    Both,
}

impl CheckMode {
    fn as_str(&self) -> &'static str {
        match self {
            CheckMode::Pick => "pick",
            CheckMode::Domination => "domination",
            CheckMode::Both => "both",
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum GenMode {
    FeasibleInterior,
    FeasibleNilpotent,
    FeasibleMixed,
    Scalar,
    Operator,
}

impl GenMode {
    fn as_str(&self) -> &'static str {
        match self {
            GenMode::FeasibleInterior => "feasible-interior",
            GenMode::FeasibleNilpotent => "feasible-nilpotent",
            GenMode::FeasibleMixed => "feasible-mixed",
            GenMode::Scalar => "scalar",
            GenMode::Operator => "operator",
        }
    }
}

fn main() {
    std::process::exit(run());
}

fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.use_stderr() { 4 } else { 0 };
            let _ = err.print();
            return code;
        }
    };
    let started = Instant::now();
    match cli.command {
        Command::Check { instance, mode, tol, samples, seed, jobs } => {
            cmd_check(&instance, mode, tol, samples, seed, jobs, started)
        }
        Command::Interpolate { instance, out } => cmd_interpolate(&instance, out.as_deref(), started),
        Command::Eval { function, point, out } => {
            cmd_eval(&function, &point, out.as_deref(), started)
        }
        Command::Gen { mode, seed, n, k, d, out } => cmd_gen(mode, seed, n, k, d, &out, started),
        Command::Verify { instance, function } => cmd_verify(&instance, &function, started),
    }
}

/// Reports a failure that precedes any decision: bad files, bad documents,
/// bad flags. No report is printed for these, only a diagnostic.
fn usage_error(msg: &str) -> i32 {
    eprintln!("error: {msg}");
    4
}

fn read_file(path: &Path) -> Result<String, i32> {
    fs::read_to_string(path).map_err(|err| usage_error(&format!("cannot read {}: {err}", path.display())))
}

fn write_file(path: &Path, text: &str) -> Result<(), i32> {
    fs::write(path, text).map_err(|err| usage_error(&format!("cannot write {}: {err}", path.display())))
}

fn load_instance(path: &Path) -> Result<ProblemInstance, i32> {
    let text = read_file(path)?;
    deserialize_instance(&text)
        .map_err(|err| usage_error(&format!("{}: {err}", path.display())))
}

/// Digest of the canonical re-serialization, so the hash does not depend
/// on the formatting of the input file.
fn instance_digest(instance: &ProblemInstance) -> Result<String, i32> {
    let text = serialize_instance(instance)
        .map_err(|err| usage_error(&format!("cannot canonicalize instance: {err}")))?;
    Ok(digest(&text))
}

fn finish(mut report: Report, code: i32, started: Instant) -> i32 {
    report.exit_code = code;
    report.timing_ms = started.elapsed().as_millis() as u64;
    report.print();
    code
}

/// Extracts scalar interpolation data from a d = k = 1 instance.
fn scalar_data(instance: &ProblemInstance) -> (Vec<Complex64>, Vec<Complex64>) {
    let z = instance.points.iter().map(|p| p.block(0)[(0, 0)]).collect();
    let w = instance.targets.iter().map(|t| t[(0, 0)]).collect();
    (z, w)
}

fn cmd_check(
    path: &Path,
    mode: CheckMode,
    tol: Option<f64>,
    samples: usize,
    seed: Option<u64>,
    jobs: usize,
    started: Instant,
) -> i32 {
    let mut instance = match load_instance(path) {
        Ok(i) => i,
        Err(code) => return code,
    };
    if let Some(t) = tol {
        instance.tolerances.psd_tol = t;
        if let Err(err) = instance.tolerances.validate() {
            return usage_error(&format!("--tol {t}: {err}"));
        }
    }
    if jobs == 0 {
        return usage_error("--jobs must be positive");
    }
    let digest = match instance_digest(&instance) {
        Ok(d) => d,
        Err(code) => return code,
    };
    let seed = seed.unwrap_or(instance.seed);

    let mut report = Report::new("check");
    report.mode = Some(mode.as_str().to_string());
    report.instance_digest = Some(digest);

    let scalar_only = instance.d == 1 && instance.k == 1;
    let pick = match mode {
        CheckMode::Pick | CheckMode::Both => {
            if !scalar_only {
                return usage_error(&format!(
                    "mode {} needs scalar data (d = k = 1), got d = {}, k = {}",
                    mode.as_str(),
                    instance.d,
                    instance.k
                ));
            }
            let (z, w) = scalar_data(&instance);
            match pickclassic::pick_matrix(&z, &w, &instance.tolerances) {
                Ok(result) => Some(PickSection {
                    min_eigenvalue: result.min_eigenvalue,
                    verdict: if result.is_psd() { "psd" } else { "not_psd" },
                    feasible: result.is_psd(),
                }),
                Err(err) => return usage_error(&format!("pick matrix: {err}")),
            }
        }
        CheckMode::Domination => None,
    };

    let domination = match mode {
        CheckMode::Domination | CheckMode::Both => {
            match run_domination(&instance, samples, seed, jobs) {
                Ok(section) => Some(section),
                Err(code) => return code,
            }
        }
        CheckMode::Pick => None,
    };

    let code = match (&pick, &domination) {
        (Some(p), None) => {
            if p.feasible {
                0
            } else {
                1
            }
        }
        (None, Some(d)) => domination_exit(d.status),
        (Some(p), Some(d)) => {
            let dom_code = domination_exit(d.status);
            let agree = match d.status {
                "dominates" => p.feasible,
                "violated" => !p.feasible,
                _ => true,
            };
            if !agree {
                eprintln!(
                    "error: pick matrix says {} but domination says {}",
                    p.verdict, d.status
                );
                5
            } else if p.feasible {
                0
            } else {
                dom_code
            }
        }
        (None, None) => unreachable!("one route always runs"),
    };
    report.pick = pick;
    report.domination = domination;
    finish(report, code, started)
}

fn domination_exit(status: &str) -> i32 {
    match status {
        "dominates" => 0,
        "violated" => 1,
        _ => 2,
    }
}

/// Runs the domination decision: the exact Choi route when the resolvent
/// exists, otherwise randomized refutation. Violations are re-verified
/// through the independent witness path before they are reported.
fn run_domination(
    instance: &ProblemInstance,
    samples: usize,
    seed: u64,
    jobs: usize,
) -> Result<DominationSection, i32> {
    let tol = &instance.tolerances;
    match lyapunov::domination_exact(&instance.points, &instance.targets, tol) {
        Ok(verdict) => section_from_verdict(instance, verdict),
        Err(Error::SteinSingular { radius }) => {
            if samples == 0 {
                return Ok(undecided_section(
                    radius,
                    0,
                    None,
                    "no exact route at this spectral radius and sampling is disabled",
                ));
            }
            match lyapunov::domination_randomized_jobs(
                &instance.points,
                &instance.targets,
                samples,
                seed,
                tol,
                jobs,
            ) {
                Ok(verdict) => section_from_verdict(instance, verdict),
                Err(Error::GramianUnavailable(msg)) => Ok(undecided_section(
                    radius,
                    0,
                    None,
                    &format!("sampling unavailable: {msg}"),
                )),
                Err(err) => Err(usage_error(&format!("randomized domination: {err}"))),
            }
        }
        Err(err) => Err(usage_error(&format!("domination: {err}"))),
    }
}

fn undecided_section(
    radius: f64,
    samples_run: usize,
    min_sample_margin: Option<f64>,
    note: &str,
) -> DominationSection {
    DominationSection {
        status: DominationStatus::Undecided.as_str(),
        spectral_radius: radius,
        choi_min_eigenvalue: None,
        samples_run,
        min_sample_margin,
        note: Some(note.to_string()),
        witness: None,
    }
}

fn section_from_verdict(
    instance: &ProblemInstance,
    verdict: DominationVerdict,
) -> Result<DominationSection, i32> {
    let witness = match verdict.witness {
        Some(w) => Some(witness_section(instance, &w)?),
        None => None,
    };
    Ok(DominationSection {
        status: verdict.status.as_str(),
        spectral_radius: verdict.certificates.spectral_radius,
        choi_min_eigenvalue: verdict.certificates.choi_min_eigenvalue,
        samples_run: verdict.certificates.samples_run,
        min_sample_margin: verdict.certificates.min_sample_margin,
        note: None,
        witness,
    })
}

fn witness_section(
    instance: &ProblemInstance,
    witness: &DominationWitness,
) -> Result<WitnessSection, i32> {
    let verified = match lyapunov::verify_witness(
        &instance.points,
        &instance.targets,
        witness,
        &instance.tolerances,
    ) {
        Ok(margin) => margin,
        Err(err) => {
            // A witness we just produced must replay; if it does not, the
            // two computation paths disagree and the verdict is unsafe.
            eprintln!("error: violation witness failed re-verification: {err}");
            return Err(5);
        }
    };
    Ok(match witness {
        DominationWitness::PureSuperharmonic { level, q, margin } => WitnessSection {
            kind: "pure_superharmonic",
            margin: *margin,
            verified_margin: verified,
            level: Some(*level),
            matrix: Some(matrix_rows(q.data())),
            labels: None,
            seeds: None,
        },
        DominationWitness::Gramian { labels, factors, margin } => WitnessSection {
            kind: "gramian",
            margin: *margin,
            verified_margin: verified,
            level: None,
            matrix: None,
            labels: Some(labels.clone()),
            seeds: Some(factors.iter().map(|f| matrix_rows(f.seed())).collect()),
        },
    })
}

/// Recognizes a jet instance: a single node that is exactly the nilpotent
/// Jordan block, with a lower triangular Toeplitz target. Those encode
/// the first k Taylor coefficients at the origin.
fn jet_from_instance(instance: &ProblemInstance) -> Option<Vec<Complex64>> {
    if instance.d != 1 || instance.n != 1 || instance.k < 2 {
        return None;
    }
    let k = instance.k;
    let z = instance.points[0].block(0);
    let jordan = pickclassic::jordan_block(k);
    if (z - &jordan).iter().any(|e| e.norm() > 1e-14) {
        return None;
    }
    let w = &instance.targets[0];
    let jet: Vec<Complex64> = (0..k).map(|m| w[(m, 0)]).collect();
    for i in 0..k {
        for j in 0..k {
            let expected = if i >= j { jet[i - j] } else { Complex64::new(0.0, 0.0) };
            if (w[(i, j)] - expected).norm() > 1e-12 {
                return None;
            }
        }
    }
    Some(jet)
}

fn cmd_interpolate(path: &Path, out: Option<&Path>, started: Instant) -> i32 {
    let instance = match load_instance(path) {
        Ok(i) => i,
        Err(code) => return code,
    };
    let mut report = Report::new("interpolate");
    report.instance_digest = match instance_digest(&instance) {
        Ok(d) => Some(d),
        Err(code) => return code,
    };

    let (method, outcome) = if instance.d == 1 && instance.k == 1 {
        let (z, w) = scalar_data(&instance);
        match pickclassic::schur_interpolate(&z, &w, &instance.tolerances) {
            Ok(outcome) => ("schur", outcome),
            Err(err) => return usage_error(&format!("interpolation: {err}")),
        }
    } else if let Some(jet) = jet_from_instance(&instance) {
        match pickclassic::caratheodory_fejer(&jet, &instance.tolerances) {
            Ok(outcome) => ("caratheodory_fejer", outcome),
            Err(err) => return usage_error(&format!("interpolation: {err}")),
        }
    } else {
        report.interpolation = Some(InterpolationSection {
            method: "none",
            feasible: false,
            infeasible_step: None,
            infeasible_modulus: None,
            max_residual: None,
            boundary_sup_norm: None,
            degree: None,
            function: None,
            reason: Some(
                "no constructive method for this shape; use `check` to decide feasibility"
                    .to_string(),
            ),
        });
        return finish(report, 3, started);
    };

    match outcome {
        SchurOutcome::Feasible(f) => {
            let max_residual = match interpolation_residual(&instance, &f, method) {
                Ok(r) => r,
                Err(code) => return code,
            };
            let text = match serialize_function(&f) {
                Ok(t) => t,
                Err(err) => return usage_error(&format!("cannot serialize function: {err}")),
            };
            if let Some(out) = out {
                if let Err(code) = write_file(out, &text) {
                    return code;
                }
            }
            report.function_digest = Some(digest(&text));
            report.interpolation = Some(InterpolationSection {
                method,
                feasible: true,
                infeasible_step: None,
                infeasible_modulus: None,
                max_residual: Some(max_residual),
                boundary_sup_norm: Some(f.boundary_sup_norm()),
                degree: Some(f.degree()),
                function: Some(FunctionBody::from_schur(&f)),
                reason: None,
            });
            finish(report, 0, started)
        }
        SchurOutcome::Infeasible { step, modulus } => {
            report.interpolation = Some(InterpolationSection {
                method,
                feasible: false,
                infeasible_step: Some(step),
                infeasible_modulus: Some(modulus),
                max_residual: None,
                boundary_sup_norm: None,
                degree: None,
                function: None,
                reason: None,
            });
            finish(report, 1, started)
        }
    }
}

/// Largest interpolation residual of a constructed function, measured the
/// way the instance states the constraints: nodewise for Schur data, on
/// the jet coefficients for a Jordan instance.
fn interpolation_residual(
    instance: &ProblemInstance,
    f: &SchurFn,
    method: &str,
) -> Result<f64, i32> {
    let mut max_residual = 0.0f64;
    if method == "schur" {
        let (z, w) = scalar_data(instance);
        for (zi, wi) in z.iter().zip(&w) {
            match f.eval_scalar(*zi) {
                Ok(v) => max_residual = max_residual.max((v - wi).norm()),
                Err(err) => return Err(usage_error(&format!("evaluating at node: {err}"))),
            }
        }
    } else {
        let k = instance.k;
        let jet: Vec<Complex64> = (0..k).map(|m| instance.targets[0][(m, 0)]).collect();
        match f.taylor_jet(k) {
            Ok(coeffs) => {
                for (a, b) in coeffs.iter().zip(&jet) {
                    max_residual = max_residual.max((a - b).norm());
                }
            }
            Err(err) => return Err(usage_error(&format!("recovering jet: {err}"))),
        }
    }
    Ok(max_residual)
}

fn cmd_eval(function: &Path, point: &Path, out: Option<&Path>, started: Instant) -> i32 {
    let ftext = match read_file(function) {
        Ok(t) => t,
        Err(code) => return code,
    };
    let f = match deserialize_function(&ftext) {
        Ok(f) => f,
        Err(err) => return usage_error(&format!("{}: {err}", function.display())),
    };
    let ztext = match read_file(point) {
        Ok(t) => t,
        Err(code) => return code,
    };
    let z = match deserialize_matrix(&ztext) {
        Ok(z) => z,
        Err(err) => return usage_error(&format!("{}: {err}", point.display())),
    };

    let canonical = match serialize_function(&f) {
        Ok(t) => t,
        Err(err) => return usage_error(&format!("cannot canonicalize function: {err}")),
    };
    let mut report = Report::new("eval");
    report.function_digest = Some(digest(&canonical));

    let value = match f.eval_operator(&z) {
        Ok(v) => v,
        Err(err @ (Error::SingularDenominator | Error::PoleAtPoint)) => {
            eprintln!("error: {err}");
            return finish(report, 1, started);
        }
        Err(err) => return usage_error(&format!("evaluation: {err}")),
    };

    // Residual of the defining relation q(Z)·f(Z) = p(Z), recomputed from
    // the polynomial coefficients rather than trusted from the solver.
    let p = pickwell::funcalc::poly::eval_matrix(f.rational().numerator(), &z);
    let q = pickwell::funcalc::poly::eval_matrix(f.rational().denominator(), &z);
    let residual = kernel::fro_norm(&(&q * &value - &p));
    let norm = match kernel::operator_norm(&value) {
        Ok(n) => n,
        Err(err) => return usage_error(&format!("norm of value: {err}")),
    };

    if let Some(out) = out {
        let text = match serialize_matrix(&value) {
            Ok(t) => t,
            Err(err) => return usage_error(&format!("cannot serialize value: {err}")),
        };
        if let Err(code) = write_file(out, &text) {
            return code;
        }
    }
    report.evaluation = Some(EvalSection {
        rows: value.nrows(),
        cols: value.ncols(),
        value: matrix_rows(&value),
        norm,
        residual,
    });
    finish(report, 0, started)
}

fn cmd_gen(
    mode: GenMode,
    seed: u64,
    n: usize,
    k: usize,
    d: usize,
    out: &Path,
    started: Instant,
) -> i32 {
    let generated: Result<(ProblemInstance, Option<SchurFn>), Error> = match mode {
        GenMode::FeasibleInterior => instancekit::gen_feasible_instance(seed, n, k, FeasibleMode::Interior)
            .map(|(i, f)| (i, Some(f))),
        GenMode::FeasibleNilpotent => {
            instancekit::gen_feasible_instance(seed, n, k, FeasibleMode::Nilpotent)
                .map(|(i, f)| (i, Some(f)))
        }
        GenMode::FeasibleMixed => instancekit::gen_feasible_instance(seed, n, k, FeasibleMode::Mixed)
            .map(|(i, f)| (i, Some(f))),
        GenMode::Scalar => instancekit::gen_scalar_instance(seed, n).map(|i| (i, None)),
        GenMode::Operator => instancekit::gen_operator_instance(seed, d, k, n).map(|i| (i, None)),
    };
    let (instance, function) = match generated {
        Ok(pair) => pair,
        Err(err) => return usage_error(&format!("generation: {err}")),
    };

    let text = match serialize_instance(&instance) {
        Ok(t) => t,
        Err(err) => return usage_error(&format!("cannot serialize instance: {err}")),
    };
    if let Err(code) = write_file(out, &text) {
        return code;
    }

    let mut report = Report::new("gen");
    report.mode = Some(mode.as_str().to_string());
    report.instance_digest = Some(digest(&text));

    if let Some(f) = &function {
        let ftext = match serialize_function(f) {
            Ok(t) => t,
            Err(err) => return usage_error(&format!("cannot serialize function: {err}")),
        };
        let fpath = out.with_extension("function.json");
        if let Err(code) = write_file(&fpath, &ftext) {
            return code;
        }
        report.function_digest = Some(digest(&ftext));
    }

    report.generation = Some(GenSection {
        mode: mode.as_str(),
        d: instance.d,
        k: instance.k,
        n: instance.n,
        seed: instance.seed,
        note: instance.note.clone(),
    });
    finish(report, 0, started)
}

fn cmd_verify(instance_path: &Path, function_path: &Path, started: Instant) -> i32 {
    let instance = match load_instance(instance_path) {
        Ok(i) => i,
        Err(code) => return code,
    };
    if instance.d != 1 {
        return usage_error(&format!(
            "a function of one variable cannot interpolate d = {} data",
            instance.d
        ));
    }
    let ftext = match read_file(function_path) {
        Ok(t) => t,
        Err(code) => return code,
    };
    let f = match deserialize_function(&ftext) {
        Ok(f) => f,
        Err(err) => return usage_error(&format!("{}: {err}", function_path.display())),
    };

    let mut report = Report::new("verify");
    report.instance_digest = match instance_digest(&instance) {
        Ok(d) => Some(d),
        Err(code) => return code,
    };
    let canonical = match serialize_function(&f) {
        Ok(t) => t,
        Err(err) => return usage_error(&format!("cannot canonicalize function: {err}")),
    };
    report.function_digest = Some(digest(&canonical));

    // A function failing to evaluate at a node counts as a residual
    // failure, not a usage error: the claim was about these nodes.
    let mut max_residual = 0.0f64;
    let mut eval_failed = false;
    for (point, target) in instance.points.iter().zip(&instance.targets) {
        match f.eval_operator(point.block(0)) {
            Ok(value) => max_residual = max_residual.max(kernel::fro_norm(&(value - target))),
            Err(err) => {
                eprintln!("error: evaluating claimed interpolant: {err}");
                eval_failed = true;
                break;
            }
        }
    }
    let residuals_pass = !eval_failed && max_residual <= INTERP_TOL;

    let feasibility =
        match lyapunov::domination_exact(&instance.points, &instance.targets, &instance.tolerances)
        {
            Ok(verdict) => verdict.status.as_str(),
            Err(Error::SteinSingular { .. }) => "undecided",
            Err(err) => return usage_error(&format!("domination: {err}")),
        };

    let (agreement, code): (&'static str, i32) = if !residuals_pass {
        ("residual_failure", 1)
    } else {
        match feasibility {
            "dominates" => ("confirmed", 0),
            // A function with passing residuals IS an interpolant, so a
            // violated verdict means the two routes contradict each other.
            "violated" => ("contradiction", 5),
            _ => ("undecided", 2),
        }
    };
    if code == 5 {
        eprintln!("error: residuals pass but the domination check claims infeasibility");
    }

    report.verification = Some(VerifySection {
        max_residual,
        residual_tol: INTERP_TOL,
        residuals_pass,
        feasibility,
        agreement,
    });
    finish(report, code, started)
}
