//! Shortest full-charging time `|0…0⟩ → |1…1⟩` over time-independent
//! Hamiltonians whose spectrum is confined to `[0, Λ]`.
//!
//! The search runs Nelder-Mead on the `d²` real parameters of a Hermitian
//! matrix (diagonal, then real and imaginary parts of the upper triangle).
//! Every candidate is affinely rescaled onto the allowed spectral window
//! before its charging time is measured, so all iterates are feasible.

pub mod nelder_mead;

use std::f64::consts::PI;
use std::io::{self, Write};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::Serialize;

use crate::array::{parallel_drive, ArraySpec};
use crate::error::{invalid, Error, Result};
use crate::quantum::{
    check_qubit_count, reduced_state, vn_entropy, CMatrix, CVector, HermitianOperator, Propagator,
    PureState, Spectrum, C64,
};

const FLAT_SPECTRUM: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OptimizationConfig {
    pub n: usize,
    /// Spectral window `[0, lambda]`.
    pub lambda: f64,
    pub fidelity_target: f64,
    pub restarts: usize,
    pub seed: u64,
    /// Simplex iterations per restart.
    pub max_iters: usize,
    /// Simplex value spread at which a restart stops early.
    pub tolerance: f64,
}

impl OptimizationConfig {
    /// Defaults for `n` qubits with per-qubit budget `e_max`. The iteration
    /// budget grows with the `4ⁿ` search dimensions.
    pub fn new(n: usize, e_max: f64) -> Self {
        let params = 1usize.checked_shl(2 * n as u32).unwrap_or(usize::MAX);
        Self {
            n,
            lambda: n as f64 * e_max,
            fidelity_target: 0.999,
            restarts: 8,
            seed: 0,
            max_iters: params.saturating_mul(50).max(2000),
            tolerance: 1e-10,
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_qubit_count(self.n)?;
        if !(self.lambda > 0.0) || !self.lambda.is_finite() {
            return Err(invalid(format!("spectral budget {} must be positive", self.lambda)));
        }
        if !(self.fidelity_target > 0.0 && self.fidelity_target < 1.0) {
            return Err(invalid(format!("fidelity target {} outside (0, 1)", self.fidelity_target)));
        }
        if self.restarts == 0 {
            return Err(invalid("need at least one restart"));
        }
        if self.max_iters == 0 {
            return Err(invalid("need at least one iteration"));
        }
        if !(self.tolerance >= 0.0) {
            return Err(invalid("tolerance must be non-negative"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct OptimizationResult {
    pub hamiltonian: HermitianOperator,
    /// `None` when no restart reached the fidelity target.
    pub t_perp: Option<f64>,
    /// Fidelity at `t_perp`, or the best peak seen when the target was missed.
    pub achieved_fidelity: f64,
    pub restarts_used: usize,
    pub best_restart: usize,
    /// Best objective of the winning restart after each simplex iteration.
    /// Entries are charging times once the target is met and penalty values
    /// (above `8π/Λ`) before that.
    pub objective_history: Vec<(usize, f64)>,
    pub seed: u64,
    pub converged: bool,
}

impl OptimizationResult {
    /// `t_perp` in units of the single-qubit time `π/e_max`, `e_max = Λ/n`.
    pub fn normalized_time(&self, config: &OptimizationConfig) -> Option<f64> {
        let e_max = config.lambda / config.n as f64;
        self.t_perp.map(|t| t * e_max / PI)
    }
}

/// Affine map of the spectrum onto `[0, lambda]` keeping the eigenvectors;
/// a multiple of the identity maps to zero.
pub fn clamp_spectrum(h: &HermitianOperator, lambda: f64) -> HermitianOperator {
    clamp_eig(h.eig(), lambda).reconstruct()
}

fn clamp_eig(mut s: Spectrum, lambda: f64) -> Spectrum {
    let (lo, hi) = (s.min(), s.max());
    let scale = lo.abs().max(hi.abs()).max(f64::MIN_POSITIVE);
    if hi - lo <= FLAT_SPECTRUM * scale {
        s.eigenvalues.iter_mut().for_each(|l| *l = 0.0);
    } else {
        let k = lambda / (hi - lo);
        s.eigenvalues.iter_mut().for_each(|l| *l = (*l - lo) * k);
        // Pin the extremes against rounding in the affine map.
        let last = s.eigenvalues.len() - 1;
        s.eigenvalues[0] = 0.0;
        s.eigenvalues[last] = lambda;
    }
    s
}

/// First-lobe full-charging time and the fidelity there.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChargingTime {
    pub time: f64,
    pub fidelity: f64,
}

/// Time of the first fidelity peak reaching `fidelity_target` for
/// `|0…0⟩ → |1…1⟩` under `h`, searched over `(0, 4π/gap]`. `None` when the
/// target is never met in that window.
pub fn charging_time(h: &HermitianOperator, n: usize, fidelity_target: f64) -> Result<Option<ChargingTime>> {
    check_dim(h, n)?;
    Ok(scan(&Propagator::new(h), n, fidelity_target).hit)
}

fn check_dim(h: &HermitianOperator, n: usize) -> Result<()> {
    check_qubit_count(n)?;
    if h.dim() != 1 << n {
        return Err(Error::DimensionMismatch(h.dim(), 1 << n));
    }
    Ok(())
}

struct Scan {
    hit: Option<ChargingTime>,
    best_fidelity: f64,
}

fn scan(prop: &Propagator, n: usize, target: f64) -> Scan {
    let gap = prop.spectrum().gap();
    let (a, b) = (
        PureState::all_zeros(n).expect("qubit count checked"),
        PureState::all_ones(n).expect("qubit count checked"),
    );
    let amp = prop.transition(&a, &b).expect("dimensions checked");
    if gap <= 0.0 {
        return Scan {
            hit: None,
            best_fidelity: amp.fidelity(0.0),
        };
    }
    let peaks = amp.peak_scan(target, 4.0 * PI / gap);
    Scan {
        hit: peaks.first_hit.map(|time| ChargingTime {
            time,
            fidelity: amp.fidelity(time),
        }),
        best_fidelity: peaks.best_fidelity,
    }
}

/// `Λ|+⟩⟨+|` with `|+⟩ = (|0…0⟩ + |1…1⟩)/√2`, which charges in exactly `π/Λ`.
pub fn oracle_hamiltonian(n: usize, lambda: f64) -> Result<HermitianOperator> {
    check_qubit_count(n)?;
    let dim = 1 << n;
    let mut v = CVector::zeros(dim);
    v[0] = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    v[dim - 1] = v[0];
    Ok(HermitianOperator::hermitized(&v * v.adjoint() * C64::new(lambda, 0.0)))
}

fn to_params(h: &HermitianOperator) -> Vec<f64> {
    let m = h.matrix();
    let d = h.dim();
    let mut p: Vec<f64> = (0..d).map(|i| m[(i, i)].re).collect();
    for i in 0..d {
        for j in i + 1..d {
            p.push(m[(i, j)].re);
            p.push(m[(i, j)].im);
        }
    }
    p
}

fn from_params(p: &[f64], d: usize) -> HermitianOperator {
    let mut m = CMatrix::zeros(d, d);
    for i in 0..d {
        m[(i, i)] = C64::new(p[i], 0.0);
    }
    let mut k = d;
    for i in 0..d {
        for j in i + 1..d {
            let z = C64::new(p[k], p[k + 1]);
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
            k += 2;
        }
    }
    HermitianOperator::hermitized(m)
}

/// Charging time when the target is met, otherwise a penalty above `8π/Λ`
/// that falls as the best peak fidelity rises.
fn objective(params: &[f64], config: &OptimizationConfig) -> (f64, Scan, Spectrum) {
    let d = 1 << config.n;
    let spectrum = clamp_eig(from_params(params, d).eig(), config.lambda);
    let prop = Propagator::from_spectrum(spectrum);
    let s = scan(&prop, config.n, config.fidelity_target);
    let window = 4.0 * PI / config.lambda;
    let value = match s.hit {
        Some(hit) => hit.time,
        None => window * (2.0 + config.fidelity_target - s.best_fidelity),
    };
    (value, s, prop.spectrum().clone())
}

fn starting_point(config: &OptimizationConfig, restart: usize) -> Result<HermitianOperator> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(restart as u64);
    let d = 1 << config.n;
    // Entry scale chosen so the perturbation's spectral radius is about `size`.
    let noise = |size: f64, rng: &mut ChaCha8Rng| {
        let normal = Normal::new(0.0, size / (2.0 * (d as f64).sqrt())).expect("positive scale");
        let p: Vec<f64> = (0..d * d).map(|_| normal.sample(rng)).collect();
        from_params(&p, d)
    };
    Ok(match restart {
        0 => {
            let spec = ArraySpec::new(config.n, 1.0, config.lambda / config.n as f64)?;
            parallel_drive(&spec, 0.0)
        }
        r if r % 2 == 1 => &oracle_hamiltonian(config.n, config.lambda)? + &noise(0.1 * config.lambda, &mut rng),
        _ => noise(0.5 * config.lambda, &mut rng),
    })
}

struct RestartOutcome {
    value: f64,
    hamiltonian: HermitianOperator,
    hit: Option<ChargingTime>,
    best_fidelity: f64,
    history: Vec<f64>,
}

fn run_restart(config: &OptimizationConfig, restart: usize) -> Result<RestartOutcome> {
    let start = to_params(&starting_point(config, restart)?);
    let settings = nelder_mead::Settings {
        initial_step: 0.05 * config.lambda,
        max_iters: config.max_iters,
        tolerance: config.tolerance,
    };
    let min = nelder_mead::minimize(|p| objective(p, config).0, &start, &settings);
    let (value, s, spectrum) = objective(&min.x, config);
    Ok(RestartOutcome {
        value,
        hamiltonian: spectrum.reconstruct(),
        hit: s.hit,
        best_fidelity: s.best_fidelity,
        history: min.history,
    })
}

/// Multi-start minimization of the charging time.
///
/// Restart 0 starts from the parallel drive, odd restarts from the oracle
/// perturbed by Gaussian noise of scale `0.1·Λ`, the rest from random
/// Hermitians. Restart `k` seeds its generator with `config.seed` on stream
/// `k`, and ties between restarts go to the lowest index, so the outcome does
/// not depend on how many threads run them.
pub fn optimize(config: &OptimizationConfig) -> Result<OptimizationResult> {
    config.validate()?;
    let outcomes: Vec<RestartOutcome> = (0..config.restarts)
        .into_par_iter()
        .map(|r| run_restart(config, r))
        .collect::<Result<_>>()?;
    let (best_restart, best) = outcomes
        .into_iter()
        .enumerate()
        .min_by(|(i, a), (j, b)| a.value.total_cmp(&b.value).then(i.cmp(j)))
        .expect("at least one restart");

    // The returned operator is re-measured so the reported numbers match a
    // fresh simulation exactly.
    let hit = charging_time(&best.hamiltonian, config.n, config.fidelity_target)?;
    let (t_perp, achieved_fidelity) = match hit.or(best.hit) {
        Some(h) => (Some(h.time), h.fidelity),
        None => (None, best.best_fidelity),
    };
    Ok(OptimizationResult {
        hamiltonian: best.hamiltonian,
        t_perp,
        achieved_fidelity,
        restarts_used: config.restarts,
        best_restart,
        objective_history: best.history.into_iter().enumerate().collect(),
        seed: config.seed,
        converged: t_perp.is_some(),
    })
}

/// Entanglement entropy (bits) of the sites in `keep` along
/// `e^{−iht}|0…0⟩`.
pub fn entropy_trace(h: &HermitianOperator, n: usize, keep: &[usize], times: &[f64]) -> Result<Vec<(f64, f64)>> {
    check_dim(h, n)?;
    let mut distinct = keep.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    if distinct.len() >= n && distinct.len() == keep.len() {
        return Err(invalid("bipartition must leave at least one site traced out"));
    }
    let prop = Propagator::new(h);
    let start = PureState::all_zeros(n)?;
    times
        .iter()
        .map(|&t| {
            let psi = prop.evolve(t, &start)?;
            Ok((t, vn_entropy(&reduced_state(&psi, keep)?)))
        })
        .collect()
}

/// `samples` evenly spaced times covering `[0, t_end]`; a single sample is `t = 0`.
pub fn time_grid(t_end: f64, samples: usize) -> Vec<f64> {
    match samples {
        0 => Vec::new(),
        1 => vec![0.0],
        _ => (0..samples).map(|i| t_end * i as f64 / (samples - 1) as f64).collect(),
    }
}

/// Two-column CSV with a `t,value` header.
pub fn write_series<W: Write>(mut w: W, rows: impl IntoIterator<Item = (f64, f64)>) -> io::Result<()> {
    writeln!(w, "t,value")?;
    for (t, v) in rows {
        writeln!(w, "{t:?},{v:?}")?;
    }
    Ok(())
}
