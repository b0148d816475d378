//! Command-line front end for the `qmetro` library: parameter sweeps emitted
//! as CSV, precision-bound verification over parameter grids, optimal-point
//! reports, and single-point quantity reports.
//!
//! Exit codes: 0 on success, 1 on a bound or cross-check violation, 2 on a
//! usage error.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::fmt::Write as _;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use qmetro::{
    block_sld_qfi, lqu_closed, lqu_numeric, model_state, msc_model_closed, msc_xstate, optimal_p,
    optimal_q, optimal_r, phase_family, qfi_numeric, qfi_phase_closed, qfi_weight_closed,
    weight_family, ModelParams,
};

/// Tolerance for `--check` cross-validation and for the precision bounds.
const CHECK_TOL: f64 = 1e-6;
const BOUND_TOL: f64 = 1e-9;
/// Step used by every brute-force grid search over a single control.
const SCAN_STEP: f64 = 1e-4;

#[derive(Parser)]
#[command(
    name = "qmetro",
    version,
    about = "Quantum metrology of a two-qubit probe under weak measurement, \
             Unruh decoherence, and measurement reversal"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep one model variable and emit the requested quantities as CSV.
    Sweep(SweepArgs),
    /// Check LQU <= F_phi <= MSC over a full five-axis parameter grid.
    VerifyBounds(VerifyBoundsArgs),
    /// Report the closed-form optimal control against a grid search.
    Optimal(OptimalArgs),
    /// Report both quantum Fisher informations at a single point.
    Qfi(QfiArgs),
    /// Report the local quantum uncertainty at a single point.
    Lqu(PointOnlyArgs),
    /// Report the maximal steered coherence at a single point.
    Msc(PointOnlyArgs),
}

/// The probe and channel parameters held fixed (or swept) by every command.
#[derive(Args, Clone, Copy)]
struct PointArgs {
    /// Preparation polar angle theta in [0, pi] (radians).
    #[arg(long, default_value_t = FRAC_PI_2)]
    theta: f64,
    /// Preparation phase phi in [0, 2*pi] (radians).
    #[arg(long, default_value_t = 0.0)]
    phi: f64,
    /// Weak-measurement strength p in [0, 1).
    #[arg(long, default_value_t = 0.0)]
    p: f64,
    /// Reversal strength q in [0, 1).
    #[arg(long, default_value_t = 0.0)]
    q: f64,
    /// Acceleration angle r in [0, pi/4] (radians).
    #[arg(long, default_value_t = 0.0)]
    r: f64,
}

impl PointArgs {
    fn params(&self) -> Result<ModelParams, qmetro::Error> {
        ModelParams::new(self.theta, self.phi, self.p, self.q, self.r)
    }
}

#[derive(Args)]
struct SweepArgs {
    /// Variable to sweep; its point flag below is ignored.
    #[arg(long, value_enum)]
    var: Variable,
    /// First grid value (inclusive).
    #[arg(long)]
    start: f64,
    /// Last grid value (inclusive).
    #[arg(long)]
    stop: f64,
    /// Number of grid points (>= 2, endpoints included).
    #[arg(long)]
    steps: usize,
    /// Comma-separated quantities to emit, in column order.
    #[arg(long, value_enum, value_delimiter = ',')]
    quantities: Option<Vec<Quantity>>,
    /// Output path, or "stdout".
    #[arg(long, default_value = "stdout")]
    out: String,
    /// Re-derive every emitted information value through the spectral double
    /// sum and fail (exit 1) on any mismatch beyond 1e-6.
    #[arg(long)]
    check: bool,
    #[command(flatten)]
    point: PointArgs,
}

#[derive(Args)]
struct VerifyBoundsArgs {
    /// Grid resolution per axis (>= 3).
    #[arg(long, default_value_t = 5)]
    grid: usize,
    /// Test hook: offset F_phi by +10 to exercise the failure path.
    #[arg(long, hide = true)]
    corrupt_fphi: bool,
}

#[derive(Args)]
struct OptimalArgs {
    /// Control to optimize over; its point flag below is ignored.
    #[arg(long, value_enum)]
    mode: Variable,
    #[command(flatten)]
    point: PointArgs,
}

#[derive(Args)]
struct QfiArgs {
    #[command(flatten)]
    point: PointArgs,
    /// Cross-check the closed forms against the spectral double sum and the
    /// blockwise logarithmic derivative; fail (exit 1) beyond 1e-6.
    #[arg(long)]
    check: bool,
}

#[derive(Args)]
struct PointOnlyArgs {
    #[command(flatten)]
    point: PointArgs,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Variable {
    Theta,
    Phi,
    P,
    Q,
    R,
}

impl Variable {
    fn name(self) -> &'static str {
        match self {
            Variable::Theta => "theta",
            Variable::Phi => "phi",
            Variable::P => "p",
            Variable::Q => "q",
            Variable::R => "r",
        }
    }

    /// Inclusive sweep domain; the upper end for p and q stays strictly
    /// below 1 because unit strength is a degenerate postselection.
    fn domain(self) -> (f64, f64) {
        match self {
            Variable::Theta => (0.0, PI),
            Variable::Phi => (0.0, 2.0 * PI),
            Variable::P | Variable::Q => (0.0, 0.9999),
            Variable::R => (0.0, FRAC_PI_4),
        }
    }

    fn substitute(self, point: &PointArgs, x: f64) -> Result<ModelParams, qmetro::Error> {
        let mut point = *point;
        match self {
            Variable::Theta => point.theta = x,
            Variable::Phi => point.phi = x,
            Variable::P => point.p = x,
            Variable::Q => point.q = x,
            Variable::R => point.r = x,
        }
        point.params()
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Quantity {
    /// Quantum Fisher information of the polar angle.
    #[value(name = "F_theta")]
    FTheta,
    /// Quantum Fisher information of the phase.
    #[value(name = "F_phi")]
    FPhi,
    /// Local quantum uncertainty.
    #[value(name = "LQU")]
    Lqu,
    /// Maximal steered coherence.
    #[value(name = "MSC")]
    Msc,
    /// Success probability of the measure-reverse pipeline.
    #[value(name = "success_prob")]
    SuccessProb,
}

impl Quantity {
    const ALL: [Quantity; 5] = [
        Quantity::FTheta,
        Quantity::FPhi,
        Quantity::Lqu,
        Quantity::Msc,
        Quantity::SuccessProb,
    ];

    fn header(self) -> &'static str {
        match self {
            Quantity::FTheta => "F_theta",
            Quantity::FPhi => "F_phi",
            Quantity::Lqu => "LQU",
            Quantity::Msc => "MSC",
            Quantity::SuccessProb => "success_prob",
        }
    }

    /// Evaluate at a point; `None` marks a genuine singularity (emitted as
    /// the token "nan").
    fn evaluate(self, params: &ModelParams) -> Option<f64> {
        match self {
            Quantity::FTheta => Some(qfi_weight_closed(params)),
            Quantity::FPhi => qfi_phase_closed(params).ok(),
            Quantity::Lqu => lqu_closed(params).ok(),
            Quantity::Msc => model_state(params)
                .ok()
                .and_then(|s| s.as_xstate().ok())
                .and_then(|x| msc_xstate(&x).ok()),
            Quantity::SuccessProb => model_state(params).ok().map(|s| s.success_probability),
        }
    }
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Sweep(args) => cmd_sweep(&args),
        Command::VerifyBounds(args) => cmd_verify_bounds(&args),
        Command::Optimal(args) => cmd_optimal(&args),
        Command::Qfi(args) => cmd_qfi(&args),
        Command::Lqu(args) => cmd_lqu(&args),
        Command::Msc(args) => cmd_msc(&args),
    }
}

fn usage_error(message: &str) -> ExitCode {
    eprintln!("error: {message}");
    ExitCode::from(2)
}

/// 17 significant digits: enough to round-trip an f64 exactly.
fn fmt_value(value: Option<f64>) -> String {
    match value {
        Some(v) => format!("{v:.16e}"),
        None => "nan".to_string(),
    }
}

fn cmd_sweep(args: &SweepArgs) -> ExitCode {
    let (lo, hi) = args.var.domain();
    if args.steps < 2 {
        return usage_error("--steps must be at least 2");
    }
    if !(args.start < args.stop) {
        return usage_error("--start must be strictly below --stop");
    }
    if args.start < lo || args.stop > hi {
        return usage_error(&format!(
            "sweep range [{}, {}] leaves the domain [{lo}, {hi}] of {}",
            args.start,
            args.stop,
            args.var.name()
        ));
    }
    let quantities = args
        .quantities
        .clone()
        .unwrap_or_else(|| Quantity::ALL.to_vec());
    if quantities.is_empty() {
        return usage_error("--quantities must name at least one quantity");
    }

    let mut csv = String::new();
    write!(csv, "{}", args.var.name()).unwrap();
    for q in &quantities {
        write!(csv, ",{}", q.header()).unwrap();
    }
    csv.push('\n');

    let mut check_failures = Vec::new();
    for k in 0..args.steps {
        let x = args.start + (args.stop - args.start) * k as f64 / (args.steps - 1) as f64;
        let params = match args.var.substitute(&args.point, x) {
            Ok(p) => p,
            Err(e) => return usage_error(&format!("invalid point at {}={x}: {e}", args.var.name())),
        };
        write!(csv, "{}", fmt_value(Some(x))).unwrap();
        for q in &quantities {
            let value = q.evaluate(&params);
            write!(csv, ",{}", fmt_value(value)).unwrap();
            if args.check {
                if let Some(closed) = value {
                    check_information_value(*q, &params, closed, &mut check_failures);
                }
            }
        }
        csv.push('\n');
    }

    if args.out == "stdout" {
        print!("{csv}");
    } else if let Err(e) = std::fs::write(&args.out, &csv) {
        eprintln!("error: cannot write {}: {e}", args.out);
        return ExitCode::FAILURE;
    }

    if !check_failures.is_empty() {
        for failure in &check_failures {
            eprintln!("check: {failure}");
        }
        return ExitCode::FAILURE;
    }
    ExitCode::SUCCESS
}

/// Re-derive an emitted information value through the spectral double sum.
/// Points where the finite-difference stencil would leave the legal domain
/// (theta within a step of 0 or pi) are skipped; everything else must agree
/// within 1e-6.
fn check_information_value(
    quantity: Quantity,
    params: &ModelParams,
    closed: f64,
    failures: &mut Vec<String>,
) {
    let (family, at, label) = match quantity {
        Quantity::FTheta => (
            weight_family(params.phi(), params.p(), params.q(), params.r()),
            params.theta(),
            "F_theta",
        ),
        Quantity::FPhi => (
            phase_family(params.theta(), params.p(), params.q(), params.r()),
            params.phi(),
            "F_phi",
        ),
        _ => return,
    };
    match qfi_numeric(&family, at) {
        Ok(numeric) if (numeric.value - closed).abs() > CHECK_TOL => failures.push(format!(
            "{label} at theta={}, phi={}, p={}, q={}, r={}: closed {closed} vs numeric {}",
            params.theta(),
            params.phi(),
            params.p(),
            params.q(),
            params.r(),
            numeric.value
        )),
        _ => {}
    }
}

fn cmd_verify_bounds(args: &VerifyBoundsArgs) -> ExitCode {
    let n = args.grid;
    if n < 3 {
        return usage_error("--grid must be at least 3");
    }
    // Interior theta values keep F_phi regular; the other axes include
    // their physical lower ends.
    let thetas: Vec<f64> = (0..n).map(|k| PI * (k + 1) as f64 / (n + 1) as f64).collect();
    let phis: Vec<f64> = (0..n).map(|k| 2.0 * PI * k as f64 / n as f64).collect();
    let strengths: Vec<f64> = (0..n).map(|k| k as f64 / n as f64).collect();
    let rs: Vec<f64> = (0..n)
        .map(|k| FRAC_PI_4 * k as f64 / (n - 1) as f64)
        .collect();

    let mut worst_lower = f64::NEG_INFINITY;
    let mut worst_lower_at = (0.0, 0.0, 0.0, 0.0, 0.0);
    let mut worst_upper = f64::NEG_INFINITY;
    let mut worst_upper_at = (0.0, 0.0, 0.0, 0.0, 0.0);
    let mut points = 0usize;

    for &theta in &thetas {
        for &phi in &phis {
            for &p in &strengths {
                for &q in &strengths {
                    for &r in &rs {
                        let params = ModelParams::new(theta, phi, p, q, r)
                            .expect("grid point inside the valid ranges");
                        let mut f_phi =
                            qfi_phase_closed(&params).expect("theta is interior");
                        if args.corrupt_fphi {
                            f_phi += 10.0;
                        }
                        let lqu = lqu_closed(&params).expect("normalization is positive");
                        let msc = msc_model_closed(q, r).expect("q and r are in range");
                        points += 1;
                        if lqu - f_phi > worst_lower {
                            worst_lower = lqu - f_phi;
                            worst_lower_at = (theta, phi, p, q, r);
                        }
                        if f_phi - msc > worst_upper {
                            worst_upper = f_phi - msc;
                            worst_upper_at = (theta, phi, p, q, r);
                        }
                    }
                }
            }
        }
    }

    println!("checked {points} grid points at resolution {n}");
    let describe = |label: &str, worst: f64, at: (f64, f64, f64, f64, f64)| {
        println!(
            "max violation of {label}: {worst:.3e} at (theta={}, phi={}, p={}, q={}, r={})",
            at.0, at.1, at.2, at.3, at.4
        );
    };
    describe("LQU <= F_phi", worst_lower, worst_lower_at);
    describe("F_phi <= MSC", worst_upper, worst_upper_at);

    if worst_lower > BOUND_TOL || worst_upper > BOUND_TOL {
        println!("bound violation detected");
        ExitCode::FAILURE
    } else {
        println!("all bounds hold");
        ExitCode::SUCCESS
    }
}

/// First maximizer over `lo..=hi` at `step` resolution, keeping the smallest
/// argument on ties; the upper endpoint is always sampled.
fn scan_argmax(f: impl Fn(f64) -> f64, lo: f64, hi: f64, step: f64) -> f64 {
    let mut best_x = lo;
    let mut best = f(lo);
    let mut last = lo;
    let mut k = 1usize;
    loop {
        let x = lo + step * k as f64;
        if x > hi {
            break;
        }
        let v = f(x);
        if v > best {
            best = v;
            best_x = x;
        }
        last = x;
        k += 1;
    }
    if last < hi && f(hi) > best {
        best_x = hi;
    }
    best_x
}

fn cmd_optimal(args: &OptimalArgs) -> ExitCode {
    let point = &args.point;
    if let Err(e) = point.params() {
        return usage_error(&format!("invalid fixed point: {e}"));
    }
    let (closed, objective): (Option<f64>, Box<dyn Fn(f64) -> f64>) = match args.mode {
        Variable::R => (
            optimal_r(point.theta, point.p, point.q),
            Box::new(move |r| {
                qfi_weight_closed(
                    &ModelParams::new(point.theta, point.phi, point.p, point.q, r)
                        .expect("scan stays inside the domain"),
                )
            }),
        ),
        Variable::P => (
            optimal_p(point.theta, point.q, point.r),
            Box::new(move |p| {
                qfi_weight_closed(
                    &ModelParams::new(point.theta, point.phi, p, point.q, point.r)
                        .expect("scan stays inside the domain"),
                )
            }),
        ),
        Variable::Q => (
            optimal_q(point.theta, point.p, point.r),
            Box::new(move |q| {
                qfi_weight_closed(
                    &ModelParams::new(point.theta, point.phi, point.p, q, point.r)
                        .expect("scan stays inside the domain"),
                )
            }),
        ),
        Variable::Theta | Variable::Phi => {
            return usage_error("--mode must be one of p, q, r");
        }
    };

    let (lo, hi) = args.mode.domain();
    let scanned = scan_argmax(&objective, lo, hi, SCAN_STEP);
    let sin = point.theta.sin();
    let envelope = 1.0 / (sin * sin);

    println!("mode: {}", args.mode.name());
    match closed {
        Some(x) => {
            println!("closed-form optimum: {}", fmt_value(Some(x)));
            println!("grid-search optimum: {}", fmt_value(Some(scanned)));
            println!("difference: {:.3e}", (x - scanned).abs());
            println!("F at optimum: {}", fmt_value(Some(objective(x))));
        }
        None => {
            println!("closed-form optimum: none");
            println!("grid-search optimum: {}", fmt_value(Some(scanned)));
            println!("difference: n/a");
            println!("F at optimum: {}", fmt_value(Some(objective(scanned))));
        }
    }
    println!("envelope 1/sin^2(theta): {}", fmt_value(Some(envelope)));
    ExitCode::SUCCESS
}

fn cmd_qfi(args: &QfiArgs) -> ExitCode {
    let params = match args.point.params() {
        Ok(p) => p,
        Err(e) => return usage_error(&format!("invalid point: {e}")),
    };
    let f_theta = qfi_weight_closed(&params);
    let f_phi = qfi_phase_closed(&params).ok();
    let state = model_state(&params).expect("valid parameters give a state");
    println!("F_theta: {}", fmt_value(Some(f_theta)));
    println!("F_phi: {}", fmt_value(f_phi));
    println!("success_prob: {}", fmt_value(Some(state.success_probability)));

    if !args.check {
        return ExitCode::SUCCESS;
    }
    let mut worst: f64 = 0.0;
    let mut report = |label: &str, closed: f64, got: qmetro::Result<qmetro::QfiResult>| match got {
        Ok(result) => {
            let dev = (result.value - closed).abs();
            worst = worst.max(dev);
            println!("{label}: {} (deviation {dev:.3e})", fmt_value(Some(result.value)));
        }
        Err(e) => println!("{label}: skipped ({e})"),
    };
    let wf = weight_family(params.phi(), params.p(), params.q(), params.r());
    report("F_theta double sum", f_theta, qfi_numeric(&wf, params.theta()));
    report("F_theta block SLD", f_theta, block_sld_qfi(&wf, params.theta()));
    if let Some(f_phi) = f_phi {
        let pf = phase_family(params.theta(), params.p(), params.q(), params.r());
        report("F_phi double sum", f_phi, qfi_numeric(&pf, params.phi()));
        report("F_phi block SLD", f_phi, block_sld_qfi(&pf, params.phi()));
    }
    if worst > CHECK_TOL {
        println!("cross-check failed (worst deviation {worst:.3e})");
        ExitCode::FAILURE
    } else {
        println!("cross-check passed (worst deviation {worst:.3e})");
        ExitCode::SUCCESS
    }
}

fn cmd_lqu(args: &PointOnlyArgs) -> ExitCode {
    let params = match args.point.params() {
        Ok(p) => p,
        Err(e) => return usage_error(&format!("invalid point: {e}")),
    };
    let closed = lqu_closed(&params).ok();
    let numeric = model_state(&params)
        .ok()
        .and_then(|s| lqu_numeric(&s.rho).ok());
    println!("LQU closed form: {}", fmt_value(closed));
    println!("LQU numeric kernel: {}", fmt_value(numeric));
    if let (Some(a), Some(b)) = (closed, numeric) {
        println!("difference: {:.3e}", (a - b).abs());
    }
    ExitCode::SUCCESS
}

fn cmd_msc(args: &PointOnlyArgs) -> ExitCode {
    let params = match args.point.params() {
        Ok(p) => p,
        Err(e) => return usage_error(&format!("invalid point: {e}")),
    };
    let from_state = model_state(&params)
        .ok()
        .and_then(|s| s.as_xstate().ok())
        .and_then(|x| msc_xstate(&x).ok());
    let two_parameter = msc_model_closed(params.q(), params.r()).ok();
    println!("MSC from the state: {}", fmt_value(from_state));
    println!("MSC two-parameter form: {}", fmt_value(two_parameter));
    if let (Some(a), Some(b)) = (from_state, two_parameter) {
        println!("difference: {:.3e}", (a - b).abs());
    }
    ExitCode::SUCCESS
}
