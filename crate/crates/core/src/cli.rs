//! The `qdepth` command-line tool.
//!
//! Every subcommand writes a table (CSV with header, or a JSON array/object)
//! to stdout or `--out`. Exit codes: 0 on success, 1 on usage errors, 2 when
//! the experiment itself fails.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::circuit::InputSpec;
use crate::depth2::Depth2Instance;
use crate::eigenest::{self, CjSchedule};
use crate::format;
use crate::gadgets::verify_gadgets;
use crate::grover::builder::build_from_program;
use crate::grover::lemmas::run_suites;
use crate::grover::program::PhaseProgram;
use crate::grover::tradeoff::{self, Family};
use crate::grover::{GroverError, GroverSchedule, OracleSpec, Policy};
use crate::order_finding::{
    self, AncillaMode, Backend, FactorConfig, FactorMethod, GroupSpec, OrderError, OrderFindingPlan,
};
use crate::output::{write_record, write_rows, Format};
use crate::statevec::{label_string, StateVector, DEFAULT_MAX_WIDTH, OUTPUT_CUTOFF};

#[derive(Debug, Parser)]
#[command(
    name = "qdepth",
    version,
    about = "Toffoli + global-Hadamard circuit simulator and experiments"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Largest state vector (in wires) any subcommand may allocate.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_WIDTH)]
    max_width: usize,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run a circuit file and print its output distribution or sampled counts.
    Simulate {
        circuit: PathBuf,
        #[arg(long)]
        shots: Option<usize>,
        /// Override the file's INPUT line, e.g. `+-01`.
        #[arg(long)]
        input: Option<String>,
        /// Print the cost metrics instead of running.
        #[arg(long)]
        metrics: bool,
    },
    /// Check the local-Hadamard, phase-flip and conjugated-Toffoli gadgets.
    GadgetVerify,
    /// Output distribution of `H^∞ · T · H^∞` on `|a⟩` from the closed form.
    Depth2 {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        a: usize,
        /// Catalog permutation; defaults to `RANDOM <seed>`.
        #[arg(long)]
        perm: Option<String>,
        /// Compare against dense simulation instead of listing amplitudes.
        #[arg(long)]
        compare: bool,
    },
    /// Sample the order-finding circuit for `g` modulo `M`.
    OrderFind {
        #[arg(long)]
        modulus: u64,
        #[arg(long)]
        generator: u64,
        /// Resolution parameter; defaults to the next power of two above `M²`.
        #[arg(long)]
        k: Option<u64>,
        /// Wires per power.
        #[arg(long)]
        b: Option<usize>,
        /// `label:Y`, `mixed` or `eigen:K`.
        #[arg(long, default_value = "label:1")]
        ancilla: String,
        #[arg(long, value_enum, default_value_t = BackendArg::Auto)]
        backend: BackendArg,
        #[arg(long, default_value_t = 1)]
        trials: usize,
        /// Print the exact probability of reading 1 on every input wire.
        #[arg(long)]
        exact: bool,
    },
    /// Find a nontrivial factor of `M`.
    Factor {
        #[arg(long)]
        modulus: u64,
        #[arg(long, default_value_t = 10)]
        attempts: usize,
        /// List every attempt instead of the summary.
        #[arg(long)]
        verbose: bool,
    },
    /// Classical estimation of an eigenphase `θ/π` from simulated kickback counts.
    Eigenest {
        /// Phase `θ/π` in `[0, 1)`; drawn uniformly per trial when absent.
        #[arg(long)]
        theta: Option<f64>,
        #[arg(long, default_value_t = 1024)]
        k: u64,
        #[arg(long)]
        b: Option<usize>,
        /// Spend the whole budget on power 1.
        #[arg(long)]
        one_bit: bool,
        #[arg(long, default_value_t = 1)]
        trials: usize,
        /// Largest continued-fraction denominator; defaults to `⌊√K⌋`.
        #[arg(long)]
        q_max: Option<u64>,
        /// Success rates of the full schedule against power 1 alone.
        #[arg(long)]
        compare: bool,
    },
    /// Exact success probability of one search schedule.
    Grover {
        #[arg(long)]
        n: usize,
        /// `TxK` terms joined by `|`; defaults to optimal textbook Grover.
        #[arg(long)]
        schedule: Option<String>,
        /// Textbook iteration count, used when no schedule is given.
        #[arg(long)]
        iterations: Option<usize>,
        #[arg(long, default_value = "diffusion")]
        policy: String,
        /// The oracle checks the low `range_bits` wires; defaults to all.
        #[arg(long)]
        range_bits: Option<usize>,
        /// One row per hidden datum.
        #[arg(long)]
        per_x: bool,
    },
    /// Success against `Σ√k` for a family of schedules.
    GroverTradeoff {
        #[arg(long)]
        n: usize,
        /// `serial`, `frontier` or `single-phase`.
        #[arg(long, default_value = "frontier")]
        family: String,
        /// Smallest single-phase `k` reaching success 0.5 for every width up to `n`.
        #[arg(long)]
        scaling: bool,
    },
    /// Randomized checks of the three inequalities.
    Lemmas {
        #[arg(long, default_value_t = 10_000)]
        trials: usize,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum BackendArg {
    Auto,
    Dense,
    Eigenbasis,
}

impl From<BackendArg> for Backend {
    fn from(b: BackendArg) -> Self {
        match b {
            BackendArg::Auto => Backend::Auto,
            BackendArg::Dense => Backend::Dense,
            BackendArg::Eigenbasis => Backend::Eigenbasis,
        }
    }
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Failure(String),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Failure(_) => 2,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Failure(m) => m,
        }
    }
}

fn usage(e: impl std::fmt::Display) -> CliError {
    CliError::Usage(e.to_string())
}

fn failure(e: impl std::fmt::Display) -> CliError {
    CliError::Failure(e.to_string())
}

fn io_error(e: io::Error) -> CliError {
    CliError::Usage(format!("i/o error: {e}"))
}

fn path_error(path: &Path) -> impl Fn(io::Error) -> CliError + '_ {
    move |e| CliError::Usage(format!("{}: {e}", path.display()))
}

fn grover_error(e: GroverError) -> CliError {
    match e {
        GroverError::InvalidSchedule(_)
        | GroverError::InvalidOracle(_)
        | GroverError::Unsupported { .. }
        | GroverError::HiddenOutOfRange { .. }
        | GroverError::PhaseIndex { .. } => usage(e),
        _ => failure(e),
    }
}

fn order_error(e: OrderError) -> CliError {
    match e {
        OrderError::NotUnit { .. }
        | OrderError::GeneratorRange { .. }
        | OrderError::EigenIndex { .. }
        | OrderError::AncillaLabel(_)
        | OrderError::EmptyPlan => usage(e),
        _ => failure(e),
    }
}

/// Parses `args` (including the program name) and runs the subcommand.
/// Returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if e.use_stderr() => {
            let _ = write!(stderr, "{}", e.render());
            return 1;
        }
        Err(e) => {
            let _ = write!(stdout, "{}", e.render());
            return 0;
        }
    };
    let mut buffer = Vec::new();
    let result = dispatch(&cli, &mut buffer, stderr).and_then(|()| match &cli.out {
        Some(path) => fs::write(path, &buffer).map_err(path_error(path)),
        None => stdout.write_all(&buffer).map_err(io_error),
    });
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {}", e.message());
            e.code()
        }
    }
}

fn dispatch(cli: &Cli, out: &mut Vec<u8>, stderr: &mut dyn Write) -> Result<(), CliError> {
    let fmt = cli.format;
    match &cli.command {
        Command::Simulate {
            circuit,
            shots,
            input,
            metrics,
        } => simulate(cli, out, circuit, *shots, input.as_deref(), *metrics),
        Command::GadgetVerify => {
            let checks = verify_gadgets();
            write_rows(out, fmt, &checks).map_err(io_error)?;
            let failed = checks.iter().filter(|c| !c.passed).count();
            if failed > 0 {
                return Err(failure(format!("{failed} gadget checks failed")));
            }
            Ok(())
        }
        Command::Depth2 {
            n,
            a,
            perm,
            compare,
        } => depth2(cli, out, *n, *a, perm.as_deref(), *compare),
        Command::OrderFind {
            modulus,
            generator,
            k,
            b,
            ancilla,
            backend,
            trials,
            exact,
        } => {
            let spec = GroupSpec::new(*modulus, *generator).map_err(order_error)?;
            let k = k.unwrap_or_else(|| default_k(*modulus));
            let schedule = schedule_for(k, *b, false)?;
            let plan = OrderFindingPlan::from_schedule(&schedule, parse_ancilla(ancilla)?);
            if *exact {
                order_find_exact(cli, out, &spec, &plan)
            } else {
                order_find(cli, out, &spec, &plan, k, (*backend).into(), *trials)
            }
        }
        Command::Factor {
            modulus,
            attempts,
            verbose,
        } => factor(cli, out, stderr, *modulus, *attempts, *verbose),
        Command::Eigenest {
            theta,
            k,
            b,
            one_bit,
            trials,
            q_max,
            compare,
        } => {
            if *compare {
                let report =
                    eigenest::classical_resolution_demo(*k, *trials, cli.seed).map_err(usage)?;
                return write_record(out, fmt, &report).map_err(io_error);
            }
            eigenest_trials(cli, out, *theta, *k, *b, *one_bit, *trials, *q_max)
        }
        Command::Grover {
            n,
            schedule,
            iterations,
            policy,
            range_bits,
            per_x,
        } => grover(
            cli,
            out,
            *n,
            schedule.as_deref(),
            *iterations,
            policy,
            *range_bits,
            *per_x,
        ),
        Command::GroverTradeoff { n, family, scaling } => {
            grover_tradeoff(cli, out, *n, family, *scaling)
        }
        Command::Lemmas { trials } => {
            let reports = run_suites(*trials, cli.seed);
            write_rows(out, fmt, &reports).map_err(io_error)?;
            let violations: usize = reports.iter().map(|r| r.violations).sum();
            let _ = writeln!(stderr, "{violations} violations");
            if violations > 0 {
                return Err(failure(format!("{violations} lemma violations")));
            }
            Ok(())
        }
    }
}

fn check_width(cli: &Cli, width: usize) -> Result<(), CliError> {
    if width > cli.max_width {
        return Err(failure(format!(
            "width {width} exceeds --max-width {}",
            cli.max_width
        )));
    }
    Ok(())
}

#[derive(Serialize)]
struct ProbabilityRow {
    label: String,
    probability: f64,
}

#[derive(Serialize)]
struct CountRow {
    label: String,
    count: usize,
}

fn simulate(
    cli: &Cli,
    out: &mut Vec<u8>,
    path: &PathBuf,
    shots: Option<usize>,
    input: Option<&str>,
    metrics: bool,
) -> Result<(), CliError> {
    let text = fs::read_to_string(path).map_err(path_error(path))?;
    let mut circuit = format::parse(&text).map_err(usage)?;
    if let Some(symbols) = input {
        circuit.input =
            InputSpec::parse(symbols).ok_or_else(|| usage(format!("bad input `{symbols}`")))?;
    }
    if metrics {
        let m = circuit.metrics().map_err(usage)?;
        return write_record(out, cli.format, &m).map_err(io_error);
    }
    check_width(cli, circuit.width)?;
    let mut state =
        StateVector::init(circuit.width, &circuit.input, cli.max_width).map_err(usage)?;
    state.run(&circuit).map_err(usage)?;
    let n = circuit.width;
    match shots {
        Some(shots) => {
            let counts = state.sample(shots, cli.seed).map_err(usage)?;
            let rows: Vec<CountRow> = counts
                .counts
                .iter()
                .map(|(&z, &count)| CountRow {
                    label: label_string(z, n),
                    count,
                })
                .collect();
            write_rows(out, cli.format, &rows).map_err(io_error)
        }
        None => {
            let rows: Vec<ProbabilityRow> = state
                .distribution()
                .probabilities()
                .iter()
                .enumerate()
                .filter(|(_, p)| **p > OUTPUT_CUTOFF)
                .map(|(z, &probability)| ProbabilityRow {
                    label: label_string(z, n),
                    probability,
                })
                .collect();
            write_rows(out, cli.format, &rows).map_err(io_error)
        }
    }
}

#[derive(Serialize)]
struct AmplitudeRow {
    label: String,
    amplitude: f64,
    probability: f64,
}

fn depth2(
    cli: &Cli,
    out: &mut Vec<u8>,
    n: usize,
    a: usize,
    perm: Option<&str>,
    compare: bool,
) -> Result<(), CliError> {
    check_width(cli, n)?;
    let name = perm.map_or_else(|| format!("RANDOM {}", cli.seed), str::to_string);
    let perm: Arc<_> = format::catalog_permutation(&name, n).map_err(usage)?;
    let instance = Depth2Instance::new(a, perm).map_err(usage)?;
    if compare {
        let cmp = instance.compare(cli.max_width).map_err(failure)?;
        return write_record(out, cli.format, &cmp).map_err(io_error);
    }
    let rows: Vec<AmplitudeRow> = instance
        .amplitudes()
        .into_iter()
        .enumerate()
        .filter(|(_, amp)| amp * amp > OUTPUT_CUTOFF)
        .map(|(c, amplitude)| AmplitudeRow {
            label: label_string(c, n),
            amplitude,
            probability: amplitude * amplitude,
        })
        .collect();
    write_rows(out, cli.format, &rows).map_err(io_error)
}

/// Smallest power of two at or above `M²`.
fn default_k(modulus: u64) -> u64 {
    1u64 << eigenest::log2_ceil(modulus.saturating_mul(modulus))
}

fn schedule_for(k: u64, b: Option<usize>, one_bit: bool) -> Result<CjSchedule, CliError> {
    if k < 2 {
        return Err(usage("--k must be at least 2"));
    }
    let full = match b {
        Some(0) => return Err(usage("--b must be positive")),
        Some(b) => eigenest::schedule_with_b(k, b),
        None => eigenest::make_schedule(k).map_err(usage)?,
    };
    Ok(if one_bit {
        eigenest::one_bit_schedule(k, full.budget())
    } else {
        full
    })
}

fn parse_ancilla(text: &str) -> Result<AncillaMode, CliError> {
    let bad = || {
        usage(format!(
            "ancilla must be `label:Y`, `mixed` or `eigen:K`, got `{text}`"
        ))
    };
    match text.split_once(':') {
        None if text == "mixed" => Ok(AncillaMode::Mixed),
        Some(("label", y)) => y.parse().map(AncillaMode::Label).map_err(|_| bad()),
        Some(("eigen", k)) => k.parse().map(AncillaMode::Eigenvector).map_err(|_| bad()),
        _ => Err(bad()),
    }
}

#[derive(Serialize)]
struct OrderTrialRow {
    trial: usize,
    /// `c:ones/b` per power.
    samples: String,
    theta_hat: f64,
    numerator: u64,
    denominator: u64,
    low_confidence: bool,
}

fn order_find(
    cli: &Cli,
    out: &mut Vec<u8>,
    spec: &GroupSpec,
    plan: &OrderFindingPlan,
    k: u64,
    backend: Backend,
    trials: usize,
) -> Result<(), CliError> {
    let sets =
        order_finding::run_order_finding(spec, plan, backend, cli.seed, trials, cli.max_width)
            .map_err(order_error)?;
    let mut rows = Vec::with_capacity(sets.len());
    for (trial, set) in sets.iter().enumerate() {
        let est = eigenest::estimate_theta(set, k).map_err(failure)?;
        let r = est.rational(spec.modulus);
        rows.push(OrderTrialRow {
            trial,
            samples: set
                .samples
                .iter()
                .map(|s| format!("{}:{}/{}", s.c, s.x, s.b))
                .collect::<Vec<_>>()
                .join(";"),
            theta_hat: est.theta_hat,
            numerator: r.p,
            denominator: r.q,
            low_confidence: r.low_confidence,
        });
    }
    write_rows(out, cli.format, &rows).map_err(io_error)
}

#[derive(Serialize)]
struct WireRow {
    wire: usize,
    power: u64,
    prob_one: f64,
}

fn order_find_exact(
    cli: &Cli,
    out: &mut Vec<u8>,
    spec: &GroupSpec,
    plan: &OrderFindingPlan,
) -> Result<(), CliError> {
    let marginals: Vec<f64> = if plan.total_width(spec) <= cli.max_width {
        let dist =
            order_finding::input_distribution(spec, plan, cli.max_width).map_err(order_error)?;
        (0..plan.input_width())
            .map(|w| dist.marginal(&[w]).prob(1))
            .collect()
    } else {
        order_finding::wire_marginals(spec, plan).map_err(order_error)?
    };
    let rows: Vec<WireRow> = marginals
        .into_iter()
        .enumerate()
        .map(|(w, prob_one)| WireRow {
            wire: w,
            power: plan.c_js[w / plan.b],
            prob_one,
        })
        .collect();
    write_rows(out, cli.format, &rows).map_err(io_error)
}

#[derive(Serialize)]
struct FactorRow {
    modulus: u64,
    factor: Option<u64>,
    cofactor: Option<u64>,
    method: FactorMethod,
    attempts: usize,
}

fn factor(
    cli: &Cli,
    out: &mut Vec<u8>,
    stderr: &mut dyn Write,
    modulus: u64,
    attempts: usize,
    verbose: bool,
) -> Result<(), CliError> {
    if modulus < 2 {
        return Err(usage("--modulus must be at least 2"));
    }
    let config = FactorConfig {
        max_attempts: attempts,
        max_width: cli.max_width,
        ..FactorConfig::default()
    };
    let report = order_finding::factor_with(modulus, cli.seed, &config).map_err(order_error)?;
    if verbose {
        write_rows(out, cli.format, &report.attempts).map_err(io_error)?;
    } else {
        let row = FactorRow {
            modulus,
            factor: report.factor,
            cofactor: report.factor.map(|f| modulus / f),
            method: report.method,
            attempts: report.attempts.len(),
        };
        write_record(out, cli.format, &row).map_err(io_error)?;
    }
    match (report.factor, report.method) {
        (Some(f), _) => {
            let _ = writeln!(stderr, "{modulus} = {f} × {}", modulus / f);
            Ok(())
        }
        (None, FactorMethod::NoFactor) => {
            let _ = writeln!(stderr, "{modulus} has no nontrivial factor");
            Ok(())
        }
        (None, _) => Err(failure(format!(
            "no factor of {modulus} found in {attempts} attempts"
        ))),
    }
}

#[derive(Serialize)]
struct EigenTrialRow {
    trial: usize,
    theta: f64,
    theta_hat: f64,
    success: bool,
    numerator: u64,
    denominator: u64,
    low_confidence: bool,
    wires: usize,
}

#[allow(clippy::too_many_arguments)]
fn eigenest_trials(
    cli: &Cli,
    out: &mut Vec<u8>,
    theta: Option<f64>,
    k: u64,
    b: Option<usize>,
    one_bit: bool,
    trials: usize,
    q_max: Option<u64>,
) -> Result<(), CliError> {
    if let Some(t) = theta {
        if !(0.0..1.0).contains(&t) {
            return Err(usage("--theta must lie in [0, 1)"));
        }
    }
    let schedule = schedule_for(k, b, one_bit)?;
    let q_max = q_max.unwrap_or((k as f64).sqrt().floor() as u64).max(1);
    let mut rows = Vec::with_capacity(trials);
    for trial in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
        rng.set_stream(trial as u64 + 1);
        let truth = theta.unwrap_or_else(|| rng.random_range(0.0..1.0));
        let samples = eigenest::simulate_samples_with(truth, &schedule.c_js, schedule.b, &mut rng);
        let est = eigenest::estimate_theta(&samples, k).map_err(failure)?;
        let r = est.rational(q_max);
        rows.push(EigenTrialRow {
            trial,
            theta: truth,
            theta_hat: est.theta_hat,
            success: eigenest::is_success(est.theta_hat, truth, k),
            numerator: r.p,
            denominator: r.q,
            low_confidence: r.low_confidence,
            wires: samples.total_wires(),
        });
    }
    write_rows(out, cli.format, &rows).map_err(io_error)
}

#[derive(Serialize)]
struct GroverRow {
    schedule: String,
    policy: Policy,
    phases: usize,
    sum_sqrt_k: f64,
    total_calls: usize,
    quantum_depth: usize,
    interior_boundaries: usize,
    avg_success: f64,
    min_success: f64,
    max_success: f64,
}

#[derive(Serialize)]
struct HiddenRow {
    x: usize,
    success: f64,
}

#[allow(clippy::too_many_arguments)]
fn grover(
    cli: &Cli,
    out: &mut Vec<u8>,
    n: usize,
    schedule: Option<&str>,
    iterations: Option<usize>,
    policy: &str,
    range_bits: Option<usize>,
    per_x: bool,
) -> Result<(), CliError> {
    check_width(cli, n + 2)?;
    let spec = OracleSpec::first_bits(n, range_bits.unwrap_or(n)).map_err(grover_error)?;
    let policy: Policy = policy.parse().map_err(grover_error)?;
    let schedule = match (schedule, iterations) {
        (Some(_), Some(_)) => return Err(usage("give either --schedule or --iterations")),
        (Some(text), None) => {
            GroverSchedule::parse(text, policy, cli.seed).map_err(grover_error)?
        }
        (None, iterations) => {
            if policy != Policy::Diffusion {
                return Err(usage("--iterations needs the diffusion policy"));
            }
            GroverSchedule::standard(
                iterations.unwrap_or_else(|| tradeoff::optimal_iterations(spec.range_size())),
            )
        }
    };
    let program = PhaseProgram::new(&spec, &schedule).map_err(grover_error)?;
    let eval = program.evaluate();
    if per_x {
        let rows: Vec<HiddenRow> = eval
            .per_x
            .iter()
            .enumerate()
            .map(|(x, &success)| HiddenRow { x, success })
            .collect();
        return write_rows(out, cli.format, &rows).map_err(io_error);
    }
    let metrics = build_from_program(&program, 0)
        .and_then(|g| g.metrics())
        .map_err(grover_error)?;
    let row = GroverRow {
        schedule: schedule.label(),
        policy,
        phases: schedule.phases(),
        sum_sqrt_k: schedule.sum_sqrt_k(),
        total_calls: schedule.total_calls(),
        quantum_depth: metrics.quantum_depth,
        interior_boundaries: metrics.interior_boundaries,
        avg_success: eval.average,
        min_success: eval.min,
        max_success: eval.max,
    };
    write_record(out, cli.format, &row).map_err(io_error)
}

#[derive(Serialize)]
struct ScalingRow {
    n: usize,
    range: usize,
    k_min: Option<usize>,
    fitted_exponent: Option<f64>,
}

fn grover_tradeoff(
    cli: &Cli,
    out: &mut Vec<u8>,
    n: usize,
    family: &str,
    scaling: bool,
) -> Result<(), CliError> {
    check_width(cli, n + 2)?;
    if n == 0 {
        return Err(usage("--n must be positive"));
    }
    if scaling {
        let lo = n.min(6);
        let (points, slope) = tradeoff::single_phase_scaling(lo..=n, 0.5).map_err(grover_error)?;
        let rows: Vec<ScalingRow> = points
            .into_iter()
            .map(|p| ScalingRow {
                n: p.n,
                range: p.range,
                k_min: p.k_min,
                fitted_exponent: slope,
            })
            .collect();
        return write_rows(out, cli.format, &rows).map_err(io_error);
    }
    let family: Family = family.parse().map_err(grover_error)?;
    let spec = OracleSpec::standard(n).map_err(grover_error)?;
    let schedules = tradeoff::family_schedules(family, n, cli.seed).map_err(grover_error)?;
    let report = tradeoff::tradeoff_experiment(&spec, &schedules).map_err(grover_error)?;
    write_rows(out, cli.format, &report.rows).map_err(io_error)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(
            std::iter::once("qdepth").chain(args.iter().copied()),
            &mut out,
            &mut err,
        );
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn ancilla_grammar() {
        assert_eq!(parse_ancilla("label:7").unwrap(), AncillaMode::Label(7));
        assert_eq!(parse_ancilla("mixed").unwrap(), AncillaMode::Mixed);
        assert_eq!(
            parse_ancilla("eigen:2").unwrap(),
            AncillaMode::Eigenvector(2)
        );
        assert!(parse_ancilla("eigen").is_err());
        assert!(parse_ancilla("label:x").is_err());
    }

    #[test]
    fn default_k_is_power_of_two_above_square() {
        assert_eq!(default_k(15), 256);
        assert_eq!(default_k(16), 256);
        assert_eq!(default_k(21), 512);
    }

    #[test]
    fn usage_errors_exit_one() {
        assert_eq!(run_capture(&["no-such-command"]).0, 1);
        assert_eq!(
            run_capture(&["grover", "--n", "3", "--schedule", "3y1"]).0,
            1
        );
        assert_eq!(
            run_capture(&["order-find", "--modulus", "15", "--generator", "5"]).0,
            1
        );
        assert_eq!(run_capture(&["--help"]).0, 0);
    }

    #[test]
    fn too_wide_is_a_failure() {
        assert_eq!(
            run_capture(&["grover", "--n", "10", "--max-width", "8"]).0,
            2
        );
    }

    #[test]
    fn grover_summary_row() {
        let (code, out, _) = run_capture(&["grover", "--n", "2", "--iterations", "1"]);
        assert_eq!(code, 0);
        let mut lines = out.lines();
        assert_eq!(
            lines.next().unwrap(),
            "schedule,policy,phases,sum_sqrt_k,total_calls,quantum_depth,interior_boundaries,avg_success,min_success,max_success"
        );
        assert!(lines
            .next()
            .unwrap()
            .starts_with("2x1,diffusion,2,2.0,2,2,1,"));
    }
}
