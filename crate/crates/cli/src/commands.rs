use std::f64::consts::{PI, TAU};
use std::fmt;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde::Serialize;

use qbattery::array::{
    arrival_time, charge_from, path_lengths, speed_limit_bounds, ArraySpec, ChargingOutcome, InitialState, Mode,
    PathLengths, Propagation,
};
use qbattery::control::{
    charging_time, entropy_trace, optimize as run_optimizer, oracle_hamiltonian, time_grid, OptimizationConfig,
};
use qbattery::quantum::{qubit_count, HermitianOperator, MatrixJson, PureState};
use qbattery::qubit::{objective_curve, optimal_time, BlochState, DriveConstraint};

use crate::output::{ensure_dir, write_json, write_table, Cell, Table};
use crate::{ArrayArgs, BoundsArgs, EntropyArgs, Format, HamiltonianSource, ModeArg, OptimizeArgs, PropagationArg, QubitArgs};

#[derive(Debug)]
pub enum CliError {
    Invalid(String),
    NotConverged(String),
    Io(PathBuf, io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Invalid(_) => 2,
            CliError::NotConverged(_) => 3,
            CliError::Io(..) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Invalid(m) => write!(f, "invalid input: {m}"),
            CliError::NotConverged(m) => write!(f, "not converged: {m}"),
            CliError::Io(p, e) => write!(f, "{}: {e}", p.display()),
        }
    }
}

impl From<qbattery::Error> for CliError {
    fn from(e: qbattery::Error) -> Self {
        CliError::Invalid(e.to_string())
    }
}

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Invalid(msg.into())
}

pub struct Context {
    pub out: PathBuf,
    pub format: Format,
    pub radians: bool,
}

impl Context {
    fn angle_in(&self, a: f64) -> f64 {
        if self.radians {
            a
        } else {
            a * PI
        }
    }

    fn angle_out(&self, a: f64) -> f64 {
        if self.radians {
            a
        } else {
            a / PI
        }
    }

    fn angle_unit(&self) -> &'static str {
        if self.radians {
            "rad"
        } else {
            "pi"
        }
    }

    fn announce(&self, paths: &[PathBuf]) {
        for p in paths {
            println!("wrote {}", p.display());
        }
    }
}

/// Caps the worker pool at `QUANTACELL_THREADS` when set.
pub fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("QUANTACELL_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| invalid(format!("QUANTACELL_THREADS must be a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| invalid(format!("thread pool: {e}")))
}

#[derive(Serialize)]
struct QubitSummary {
    t_opt: f64,
    theta_final: f64,
    work: f64,
    power: f64,
    objective: f64,
    objective_per_radius: f64,
    attained: bool,
    alpha: f64,
    theta0: f64,
    r: f64,
    emax: f64,
    angle_unit: &'static str,
    warning: Option<String>,
}

pub fn qubit(ctx: &Context, a: &QubitArgs) -> Result<(), CliError> {
    let theta0 = ctx.angle_in(a.theta0);
    BlochState::new(a.r, theta0, 0.0)?;
    let c = DriveConstraint::new(a.emax)?;
    if a.samples == 0 {
        return Err(invalid("--samples must be at least 1"));
    }
    let res = optimal_time(theta0, a.r, &c, a.alpha)?;
    let curve = objective_curve(theta0, a.r, &c, a.alpha, TAU / a.emax, a.samples)?;

    let warning = if a.r == 0.0 {
        Some("zero Bloch radius: the state is maximally mixed and stores no work".to_string())
    } else if !res.attained {
        Some("the supremum is only approached as T -> 0; t_opt is reported as 0".to_string())
    } else {
        None
    };
    let summary = QubitSummary {
        t_opt: res.t_opt,
        theta_final: ctx.angle_out(res.theta_final),
        work: res.work,
        power: res.power,
        objective: res.objective,
        objective_per_radius: res.objective_per_radius,
        attained: res.attained,
        alpha: res.alpha,
        theta0: a.theta0,
        r: a.r,
        emax: a.emax,
        angle_unit: ctx.angle_unit(),
        warning,
    };
    ensure_dir(&ctx.out)?;
    let written = vec![
        write_json(&ctx.out, "summary.json", &summary)?,
        write_table(&ctx.out, "objective", ctx.format, &Table::series(curve))?,
    ];
    ctx.announce(&written);
    Ok(())
}

#[derive(Serialize)]
struct Comparison {
    parallel_power_per_qubit: f64,
    global_power_per_qubit: f64,
    ratio: f64,
}

#[derive(Serialize)]
struct ArraySummary {
    n: usize,
    eps: f64,
    emax: f64,
    lambda: f64,
    outcome: ChargingOutcome,
    comparison: Comparison,
    path_lengths: PathLengths,
}

pub fn array(ctx: &Context, a: &ArrayArgs) -> Result<(), CliError> {
    let spec = ArraySpec::new(a.n, a.eps, a.emax)?;
    let mode = match a.mode {
        ModeArg::Parallel => Mode::Parallel,
        ModeArg::Global => Mode::Global,
    };
    let propagation = match a.propagation {
        PropagationArg::Bare => Propagation::Bare,
        PropagationArg::Total => Propagation::Total { compensate: false },
        PropagationArg::Compensated => Propagation::Total { compensate: true },
    };
    let initial = match a.beta {
        None => InitialState::Ground,
        Some(beta) => InitialState::Thermal { beta },
    };
    if a.samples < 100 {
        return Err(invalid("--samples must be at least 100"));
    }

    let outcome = charge_from(&spec, mode, propagation, initial)?;
    let par = charge_from(&spec, Mode::Parallel, propagation, initial)?;
    let glob = charge_from(&spec, Mode::Global, propagation, initial)?;
    let comparison = Comparison {
        parallel_power_per_qubit: par.power_per_qubit,
        global_power_per_qubit: glob.power_per_qubit,
        ratio: glob.power_per_qubit / par.power_per_qubit,
    };
    let mut table = Table::new(&["n", "parallel_power_per_qubit", "global_power_per_qubit", "ratio"]);
    table.push(vec![
        Cell::Int(a.n as u64),
        Cell::Real(comparison.parallel_power_per_qubit),
        Cell::Real(comparison.global_power_per_qubit),
        Cell::Real(comparison.ratio),
    ]);
    let summary = ArraySummary {
        n: a.n,
        eps: a.eps,
        emax: a.emax,
        lambda: spec.lambda(),
        outcome,
        comparison,
        path_lengths: path_lengths(&spec, a.samples)?,
    };
    ensure_dir(&ctx.out)?;
    let written = vec![
        write_json(&ctx.out, "array.json", &summary)?,
        write_table(&ctx.out, "comparison", ctx.format, &table)?,
    ];
    ctx.announce(&written);
    Ok(())
}

/// `"4"` or an inclusive range `"1..4"`.
fn parse_counts(raw: &str) -> Result<Vec<usize>, CliError> {
    let num = |s: &str| {
        s.trim()
            .parse::<usize>()
            .map_err(|_| invalid(format!("bad qubit count {s:?} in --n {raw:?}")))
    };
    let counts: Vec<usize> = match raw.split_once("..") {
        Some((lo, hi)) => {
            let hi = hi.strip_prefix('=').unwrap_or(hi);
            let (lo, hi) = (num(lo)?, num(hi)?);
            if lo > hi {
                return Err(invalid(format!("empty range {raw:?}")));
            }
            (lo..=hi).collect()
        }
        None => vec![num(raw)?],
    };
    Ok(counts)
}

#[derive(Serialize)]
struct OptimizeSummary {
    n: usize,
    lambda: f64,
    emax: f64,
    fidelity_target: f64,
    restarts: usize,
    max_iters: usize,
    seed: u64,
    t_perp: Option<f64>,
    /// `t_perp` in units of the single-qubit time `π/emax`.
    t_normalized: Option<f64>,
    oracle_time: f64,
    achieved_fidelity: f64,
    restarts_used: usize,
    best_restart: usize,
    converged: bool,
    hamiltonian: MatrixJson,
}

#[derive(Serialize)]
struct Fit {
    /// Least-squares `c` in `t_perp ≈ c/n`.
    c: f64,
    /// `‖t − c/n‖ / ‖t‖` over the converged points.
    relative_residual: f64,
    points: usize,
}

fn fit_inverse(points: &[(usize, f64)]) -> Option<Fit> {
    if points.is_empty() {
        return None;
    }
    let (num, den) = points
        .iter()
        .fold((0.0, 0.0), |(a, b), &(n, t)| (a + t / n as f64, b + 1.0 / (n * n) as f64));
    let c = num / den;
    let resid: f64 = points.iter().map(|&(n, t)| (t - c / n as f64).powi(2)).sum();
    let norm: f64 = points.iter().map(|&(_, t)| t * t).sum();
    Some(Fit {
        c,
        relative_residual: (resid / norm).sqrt(),
        points: points.len(),
    })
}

pub fn optimize(ctx: &Context, a: &OptimizeArgs) -> Result<(), CliError> {
    let counts = parse_counts(&a.n)?;
    let configs: Vec<OptimizationConfig> = counts
        .iter()
        .map(|&n| {
            let mut cfg = OptimizationConfig::new(n, a.emax);
            cfg.fidelity_target = a.fidelity;
            cfg.restarts = a.restarts;
            cfg.seed = a.seed;
            if let Some(it) = a.max_iters {
                cfg.max_iters = it;
            }
            cfg.validate().map(|_| cfg)
        })
        .collect::<Result<_, _>>()?;

    ensure_dir(&ctx.out)?;
    let sweep = counts.len() > 1;
    let mut written = Vec::new();
    let mut table = Table::new(&["n", "t_perp", "t_normalized", "oracle_time"]);
    let mut points = Vec::new();
    let mut missed = Vec::new();
    for cfg in &configs {
        let res = run_optimizer(cfg)?;
        let suffix = if sweep { format!("_n{}", cfg.n) } else { String::new() };
        let summary = OptimizeSummary {
            n: cfg.n,
            lambda: cfg.lambda,
            emax: a.emax,
            fidelity_target: cfg.fidelity_target,
            restarts: cfg.restarts,
            max_iters: cfg.max_iters,
            seed: cfg.seed,
            t_perp: res.t_perp,
            t_normalized: res.normalized_time(cfg),
            oracle_time: PI / cfg.lambda,
            achieved_fidelity: res.achieved_fidelity,
            restarts_used: res.restarts_used,
            best_restart: res.best_restart,
            converged: res.converged,
            hamiltonian: MatrixJson::from_operator(&res.hamiltonian),
        };
        written.push(write_json(&ctx.out, &format!("result{suffix}.json"), &summary)?);
        written.push(write_json(&ctx.out, &format!("hamiltonian{suffix}.json"), &summary.hamiltonian)?);
        let history = Table::series(res.objective_history.iter().map(|&(i, v)| (i as f64, v)));
        written.push(write_table(&ctx.out, &format!("history{suffix}"), ctx.format, &history)?);

        table.push(vec![
            Cell::Int(cfg.n as u64),
            Cell::Real(res.t_perp.unwrap_or(f64::NAN)),
            Cell::Real(summary.t_normalized.unwrap_or(f64::NAN)),
            Cell::Real(summary.oracle_time),
        ]);
        match res.t_perp {
            Some(t) => points.push((cfg.n, t)),
            None => missed.push(cfg.n),
        }
    }
    if sweep {
        written.push(write_table(&ctx.out, "sweep", ctx.format, &table)?);
        if let Some(fit) = fit_inverse(&points) {
            written.push(write_json(&ctx.out, "fit.json", &fit)?);
        }
    }
    ctx.announce(&written);
    if missed.is_empty() {
        Ok(())
    } else {
        Err(CliError::NotConverged(format!(
            "fidelity target {} not reached for n = {missed:?}; best-so-far written",
            a.fidelity
        )))
    }
}

fn load_hamiltonian(src: &HamiltonianSource, n: Option<usize>) -> Result<(HermitianOperator, usize), CliError> {
    let h = match (&src.hamiltonian, src.oracle) {
        (Some(path), None) => {
            let text = fs::read_to_string(path).map_err(|e| invalid(format!("{}: {e}", path.display())))?;
            HermitianOperator::from_json(&text).map_err(|e| invalid(format!("{}: {e}", path.display())))?
        }
        (None, Some(lambda)) => {
            let n = n.ok_or_else(|| invalid("--oracle needs --n"))?;
            if !(lambda > 0.0) {
                return Err(invalid("--oracle needs a positive budget"));
            }
            oracle_hamiltonian(n, lambda)?
        }
        _ => return Err(invalid("give exactly one of --hamiltonian or --oracle")),
    };
    let inferred = qubit_count(h.dim())?;
    match n {
        Some(n) if n != inferred => Err(invalid(format!(
            "--n {n} does not match a Hamiltonian of dimension {}",
            h.dim()
        ))),
        _ => Ok((h, inferred)),
    }
}

pub fn entropy(ctx: &Context, a: &EntropyArgs) -> Result<(), CliError> {
    let (h, n) = load_hamiltonian(&a.source, a.n)?;
    if a.samples == 0 {
        return Err(invalid("--samples must be at least 1"));
    }
    let t_end = match a.t_end {
        Some(t) if t >= 0.0 && t.is_finite() => t,
        Some(t) => return Err(invalid(format!("--t-end {t} must be finite and non-negative"))),
        None => {
            if !(a.fidelity > 0.0 && a.fidelity <= 1.0) {
                return Err(invalid("--fidelity outside (0, 1]"));
            }
            charging_time(&h, n, a.fidelity)?
                .map(|c| c.time)
                .ok_or_else(|| invalid("the Hamiltonian never charges the register; pass --t-end"))?
        }
    };
    let trace = entropy_trace(&h, n, &a.keep, &time_grid(t_end, a.samples))?;
    ensure_dir(&ctx.out)?;
    let written = vec![write_table(&ctx.out, "entropy", ctx.format, &Table::series(trace))?];
    ctx.announce(&written);
    Ok(())
}

fn load_state(spec: &str) -> Result<PureState, CliError> {
    if !spec.is_empty() && spec.chars().all(|c| c == '0' || c == '1') {
        return Ok(PureState::from_bitstring(spec)?);
    }
    let path = Path::new(spec);
    let text = fs::read_to_string(path).map_err(|e| invalid(format!("{spec}: {e}")))?;
    PureState::from_json(&text).map_err(|e| invalid(format!("{spec}: {e}")))
}

#[derive(Serialize)]
struct BoundsSummary {
    /// `null` when the energy variance vanishes.
    mt: f64,
    /// `null` when the mean energy sits at the ground level.
    ml: f64,
    angle: f64,
    angle_unit: &'static str,
    zero_variance: bool,
    zero_mean_energy: bool,
    arrival_fidelity: f64,
    actual_arrival: Option<f64>,
}

pub fn bounds(ctx: &Context, a: &BoundsArgs) -> Result<(), CliError> {
    let (h, _) = load_hamiltonian(&a.source, a.n)?;
    let initial = load_state(&a.initial)?;
    let target = load_state(&a.target)?;
    for s in [&initial, &target] {
        if s.dim() != h.dim() {
            return Err(invalid(format!("state dimension {} does not match Hamiltonian {}", s.dim(), h.dim())));
        }
    }
    if !(a.fidelity > 0.0 && a.fidelity <= 1.0) {
        return Err(invalid("--fidelity outside (0, 1]"));
    }
    let limits = speed_limit_bounds(&h, &initial, &target)?;
    let gap = h.eig().gap();
    let arrival = if gap > 0.0 {
        arrival_time(&h, &initial, &target, a.fidelity, 4.0 * PI / gap)?
    } else if initial.fidelity(&target)? >= a.fidelity {
        Some(0.0)
    } else {
        None
    };
    let summary = BoundsSummary {
        mt: limits.mt,
        ml: limits.ml,
        angle: ctx.angle_out(limits.angle),
        angle_unit: ctx.angle_unit(),
        zero_variance: limits.zero_variance,
        zero_mean_energy: limits.zero_mean_energy,
        arrival_fidelity: a.fidelity,
        actual_arrival: arrival,
    };
    ensure_dir(&ctx.out)?;
    let written = vec![write_json(&ctx.out, "bounds.json", &summary)?];
    ctx.announce(&written);
    Ok(())
}
