//! Charging of `N`-qubit arrays: independent (parallel) drives against a
//! single collective (global) drive under the same total gap budget, plus the
//! path-length geometry and speed limits that explain the difference.
//!
//! Every qubit has levels `0` and `ε`. A parallel drive gives each site a gap
//! of `e_max`; the global drive couples `|0…0⟩` and `|1…1⟩` directly with the
//! summed budget `Λ = N·e_max`.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{invalid, Result};
use crate::quantum::{
    check_qubit_count, embed_local, fs_angle, path_length, reduced_state, tensor_power, vn_entropy,
    DensityMatrix, HermitianOperator, Propagator, PureState, Tensor, C64,
};

const FLAT_TOL: f64 = 1e-14;

/// Array size, level spacing and per-qubit drive budget.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ArraySpec {
    n: usize,
    eps: f64,
    e_max: f64,
}

impl ArraySpec {
    pub fn new(n: usize, eps: f64, e_max: f64) -> Result<Self> {
        check_qubit_count(n)?;
        if !(eps > 0.0) || !eps.is_finite() {
            return Err(invalid(format!("level spacing {eps} must be positive")));
        }
        if !(e_max > 0.0) || !e_max.is_finite() {
            return Err(invalid(format!("drive budget {e_max} must be positive")));
        }
        Ok(Self { n, eps, e_max })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn e_max(&self) -> f64 {
        self.e_max
    }

    /// Global budget `N·e_max`.
    pub fn lambda(&self) -> f64 {
        self.n as f64 * self.e_max
    }

    pub fn dim(&self) -> usize {
        1 << self.n
    }

    fn site_h0(&self) -> HermitianOperator {
        HermitianOperator::from_real_diagonal(&[0.0, self.eps])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Parallel,
    Global,
}

/// Whether `H₀` acts alongside the drive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase", tag = "kind")]
pub enum Propagation {
    /// Drive alone.
    Bare,
    /// `H₀ + drive`, optionally with a diagonal term removing the detuning
    /// between the two coupled levels.
    Total { compensate: bool },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "lowercase", tag = "kind")]
pub enum InitialState {
    Ground,
    /// Every qubit thermal at inverse temperature `beta` relative to `ε`.
    Thermal { beta: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChargingOutcome {
    pub duration: f64,
    pub work: f64,
    pub power_total: f64,
    pub power_per_qubit: f64,
    /// Population of `|1…1⟩` at the end of the drive.
    pub final_fidelity: f64,
    pub mode: Mode,
    pub propagation: Propagation,
    pub initial: InitialState,
    /// Set for mixed initial states, which go beyond the closed-form analysis.
    pub extrapolated: bool,
}

/// `Σ_k ε|1⟩⟨1|_k`, diagonal with `ε·popcount(i)`.
pub fn build_h0(spec: &ArraySpec) -> HermitianOperator {
    let diag: Vec<f64> = (0..spec.dim())
        .map(|i: usize| spec.eps * i.count_ones() as f64)
        .collect();
    HermitianOperator::from_real_diagonal(&diag)
}

/// One site's share of the parallel drive: `(e_max/2)(cosφ₀ σx − sinφ₀ σy)`.
pub fn site_drive(spec: &ArraySpec, phi0: f64) -> HermitianOperator {
    let amp = 0.5 * spec.e_max;
    let x = HermitianOperator::pauli_x().scaled(amp * phi0.cos());
    let y = HermitianOperator::pauli_y().scaled(-amp * phi0.sin());
    &x + &y
}

/// Sum of identical transverse drives, one per site.
pub fn parallel_drive(spec: &ArraySpec, phi0: f64) -> HermitianOperator {
    let local = site_drive(spec, phi0);
    (0..spec.n).fold(HermitianOperator::zeros(spec.dim()), |acc, k| {
        &acc + &embed_local(&local, k, spec.n).expect("site within register")
    })
}

/// `(Λ/2)(|0…0⟩⟨1…1| + h.c.)`.
pub fn global_drive(spec: &ArraySpec) -> HermitianOperator {
    HermitianOperator::basis_coupling(spec.dim(), 0, spec.dim() - 1, C64::new(0.5 * spec.lambda(), 0.0))
        .expect("corner indices within dimension")
}

/// `−Nε|1…1⟩⟨1…1|`, putting the coupled pair back on resonance.
fn global_compensation(spec: &ArraySpec) -> HermitianOperator {
    let mut diag = vec![0.0; spec.dim()];
    diag[spec.dim() - 1] = -(spec.n as f64) * spec.eps;
    HermitianOperator::from_real_diagonal(&diag)
}

fn site_hamiltonian(spec: &ArraySpec, propagation: Propagation) -> HermitianOperator {
    let drive = site_drive(spec, 0.0);
    match propagation {
        Propagation::Bare | Propagation::Total { compensate: true } => drive,
        Propagation::Total { compensate: false } => &drive + &spec.site_h0(),
    }
}

/// Full-register Hamiltonian generating the chosen protocol.
pub fn charging_hamiltonian(spec: &ArraySpec, mode: Mode, propagation: Propagation) -> HermitianOperator {
    let (drive, comp) = match mode {
        Mode::Parallel => (parallel_drive(spec, 0.0), build_h0(spec).scaled(-1.0)),
        Mode::Global => (global_drive(spec), global_compensation(spec)),
    };
    match propagation {
        Propagation::Bare => drive,
        Propagation::Total { compensate } => {
            let total = &drive + &build_h0(spec);
            if compensate {
                &total + &comp
            } else {
                total
            }
        }
    }
}

pub fn duration(spec: &ArraySpec, mode: Mode) -> f64 {
    match mode {
        Mode::Parallel => PI / spec.e_max,
        Mode::Global => PI / spec.lambda(),
    }
}

fn site_initial(spec: &ArraySpec, initial: InitialState) -> Result<DensityMatrix> {
    match initial {
        InitialState::Ground => Ok(PureState::basis(2, 0)?.to_density()),
        InitialState::Thermal { beta } => {
            if !(beta >= 0.0) {
                return Err(invalid(format!("inverse temperature {beta} must be non-negative")));
            }
            DensityMatrix::thermal(&spec.site_h0(), beta)
        }
    }
}

pub fn initial_state(spec: &ArraySpec, initial: InitialState) -> Result<DensityMatrix> {
    tensor_power(&site_initial(spec, initial)?, spec.n)
}

/// Ground-state charging.
pub fn charge(spec: &ArraySpec, mode: Mode, propagation: Propagation) -> Result<ChargingOutcome> {
    charge_from(spec, mode, propagation, InitialState::Ground)
}

pub fn charge_from(
    spec: &ArraySpec,
    mode: Mode,
    propagation: Propagation,
    initial: InitialState,
) -> Result<ChargingOutcome> {
    let t = duration(spec, mode);
    let site0 = site_initial(spec, initial)?;
    let (work, final_fidelity) = match mode {
        Mode::Parallel => {
            // Every term is local, so the register stays a product of identical qubits.
            let site_t = Propagator::new(&site_hamiltonian(spec, propagation)).evolve_density(t, &site0)?;
            let h0 = spec.site_h0();
            let dw = site_t.expectation(&h0)? - site0.expectation(&h0)?;
            (spec.n as f64 * dw, site_t.population(1).powi(spec.n as i32))
        }
        Mode::Global => {
            let prop = Propagator::new(&charging_hamiltonian(spec, mode, propagation));
            let h0 = build_h0(spec);
            let last = spec.dim() - 1;
            match initial {
                InitialState::Ground => {
                    let psi = prop.evolve(t, &PureState::all_zeros(spec.n)?)?;
                    (psi.expectation(&h0)?, psi.amplitudes()[last].norm_sqr())
                }
                InitialState::Thermal { .. } => {
                    let rho0 = tensor_power(&site0, spec.n)?;
                    let rho = prop.evolve_density(t, &rho0)?;
                    (rho.expectation(&h0)? - rho0.expectation(&h0)?, rho.population(last))
                }
            }
        }
    };
    let power_total = work / t;
    Ok(ChargingOutcome {
        duration: t,
        work,
        power_total,
        power_per_qubit: power_total / spec.n as f64,
        final_fidelity,
        mode,
        propagation,
        initial,
        extrapolated: !matches!(initial, InitialState::Ground),
    })
}

/// Global over parallel power per qubit under bare propagation.
pub fn power_advantage(spec: &ArraySpec) -> Result<f64> {
    let g = charge(spec, Mode::Global, Propagation::Bare)?;
    let p = charge(spec, Mode::Parallel, Propagation::Bare)?;
    Ok(g.power_per_qubit / p.power_per_qubit)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PathLengths {
    pub global: f64,
    pub parallel: f64,
}

/// Discretized Fubini-Study lengths of the bare ground-state trajectories,
/// each sampled at `samples + 1` evenly spaced times.
pub fn path_lengths(spec: &ArraySpec, samples: usize) -> Result<PathLengths> {
    if samples < 100 {
        return Err(invalid(format!("path sampling needs at least 100 steps, got {samples}")));
    }
    let start = PureState::all_zeros(spec.n)?;
    let times = |mode| {
        let t = duration(spec, mode);
        (0..=samples).map(move |i| t * i as f64 / samples as f64)
    };

    let global_prop = Propagator::new(&global_drive(spec));
    let global: Vec<PureState> = times(Mode::Global)
        .map(|t| global_prop.evolve(t, &start))
        .collect::<Result<_>>()?;

    let site_prop = Propagator::new(&site_drive(spec, 0.0));
    let site0 = PureState::basis(2, 0)?;
    let parallel: Vec<PureState> = times(Mode::Parallel)
        .map(|t| site_prop.evolve(t, &site0).and_then(|s| tensor_power(&s, spec.n)))
        .collect::<Result<_>>()?;

    Ok(PathLengths {
        global: path_length(&global)?,
        parallel: path_length(&parallel)?,
    })
}

/// Minimum transfer times implied by the energy spread and mean energy of the
/// initial state (`ħ = 1`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpeedLimits {
    /// `L/ΔE`.
    pub mt: f64,
    /// `max(0, π/2 − cos L·√(1 + π²/4)) / (⟨H⟩ − E₀)`, `π/(2(⟨H⟩ − E₀))` for orthogonal targets.
    pub ml: f64,
    /// Fubini-Study angle `L` between the two states.
    pub angle: f64,
    pub zero_variance: bool,
    pub zero_mean_energy: bool,
}

impl SpeedLimits {
    pub fn max(&self) -> f64 {
        self.mt.max(self.ml)
    }
}

/// Variance- and mean-energy-based lower bounds on the time for `h` to carry
/// `initial` into `target`. A vanishing denominator yields `+∞` with its flag
/// set, unless the states already coincide.
pub fn speed_limit_bounds(h: &HermitianOperator, initial: &PureState, target: &PureState) -> Result<SpeedLimits> {
    let angle = fs_angle(initial, target)?;
    let mean = initial.expectation(h)?;
    let spread = initial.variance(h)?.max(0.0).sqrt();
    let excitation = mean - h.eig().min();
    let zero_variance = spread <= FLAT_TOL;
    let zero_mean_energy = excitation <= FLAT_TOL;

    let ml_numerator = (PI / 2.0 - angle.cos() * (1.0 + PI * PI / 4.0).sqrt()).max(0.0);
    let bound = |num: f64, den: f64, flat: bool| {
        if num == 0.0 {
            0.0
        } else if flat {
            f64::INFINITY
        } else {
            num / den
        }
    };
    Ok(SpeedLimits {
        mt: bound(angle, spread, zero_variance),
        ml: bound(ml_numerator, excitation, zero_mean_energy),
        angle,
        zero_variance,
        zero_mean_energy,
    })
}

/// First time `e^{−iht}` carries `initial` to `target` with fidelity at least
/// `threshold`, taken at the peak of the first lobe that gets there. Searches
/// `[0, t_max]`.
pub fn arrival_time(
    h: &HermitianOperator,
    initial: &PureState,
    target: &PureState,
    threshold: f64,
    t_max: f64,
) -> Result<Option<f64>> {
    let amp = Propagator::new(h).transition(initial, target)?;
    Ok(amp.first_peak_above(threshold, t_max))
}

/// Von Neumann entropy of each single-qubit marginal.
pub fn marginal_entropies(psi: &PureState) -> Result<Vec<f64>> {
    let n = crate::quantum::qubit_count(psi.dim())?;
    (0..n)
        .map(|k| reduced_state(psi, &[k]).map(|r| vn_entropy(&r)))
        .collect()
}

/// Product of single-qubit states, site 0 first.
pub fn product_state(sites: &[PureState]) -> Result<PureState> {
    let (first, rest) = sites
        .split_first()
        .ok_or_else(|| invalid("product of zero states"))?;
    Ok(rest.iter().fold(first.clone(), |acc, s| acc.tensor(s)))
}
