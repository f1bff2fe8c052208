//! Power-optimal charging of a single qubit with `H₀ = |1⟩⟨1|`.
//!
//! States are written on the Bloch sphere as `ρ = (1 + a·σ)/2` with
//! `a = r(sinθ cosφ, sinθ sinφ, cosθ)`. The polar angle is measured from the
//! passive pole `|0⟩`, so the stored energy is `(1 − r cosθ)/2`.
//!
//! A control `v·σ` has spectral gap `2|v|` and precesses the Bloch vector at
//! angular speed `2|v|` (`da/dt = 2 v × a`). Under a gap budget `E_max` the
//! fastest energy gain therefore comes from a transverse control of amplitude
//! `E_max/2` perpendicular to the azimuth, which drives the state along a
//! meridian with `θ_t = θ₀ + E_max t`.
//!
//! The protocol lives in the frame co-rotating with `H₀`, where `H₀` only
//! advances the azimuth and does neither work nor change `θ`; see
//! [`lab_frame_control`] for the equivalent lab-frame field.

use std::f64::consts::{PI, TAU};

use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::quantum::{CMatrix, DensityMatrix, HermitianOperator, C64};

/// Qubit state in spherical Bloch coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BlochState {
    pub r: f64,
    pub theta: f64,
    pub phi: f64,
}

impl BlochState {
    /// Requires `r ∈ [0, 1]` and `θ ∈ [0, π]`; `φ` is wrapped into `[0, 2π)`.
    pub fn new(r: f64, theta: f64, phi: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&r) {
            return Err(invalid(format!("Bloch radius {r} outside [0, 1]")));
        }
        if !(0.0..=PI).contains(&theta) {
            return Err(invalid(format!("polar angle {theta} outside [0, π]")));
        }
        if !phi.is_finite() {
            return Err(invalid("azimuth must be finite"));
        }
        Ok(Self {
            r,
            theta,
            phi: phi.rem_euclid(TAU),
        })
    }

    /// Thermal state of `H₀ = |1⟩⟨1|` at inverse temperature `β`.
    pub fn thermal(beta: f64) -> Result<Self> {
        if !(beta >= 0.0) {
            return Err(invalid(format!("inverse temperature {beta} must be non-negative")));
        }
        Self::new((beta / 2.0).tanh(), 0.0, 0.0)
    }

    pub fn from_vector(a: [f64; 3]) -> Self {
        let r = (a[0] * a[0] + a[1] * a[1] + a[2] * a[2]).sqrt();
        let rho_xy = a[0].hypot(a[1]);
        Self {
            r,
            theta: rho_xy.atan2(a[2]),
            phi: a[1].atan2(a[0]).rem_euclid(TAU),
        }
    }

    pub fn from_density(rho: &DensityMatrix) -> Result<Self> {
        if rho.dim() != 2 {
            return Err(Error::DimensionMismatch(rho.dim(), 2));
        }
        let m = rho.matrix();
        let off = m[(0, 1)];
        Ok(Self::from_vector([2.0 * off.re, -2.0 * off.im, (m[(0, 0)] - m[(1, 1)]).re]))
    }

    pub fn vector(&self) -> [f64; 3] {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        [self.r * st * cp, self.r * st * sp, self.r * ct]
    }

    pub fn to_density(&self) -> DensityMatrix {
        let [x, y, z] = self.vector();
        let half = |re: f64, im: f64| C64::new(re / 2.0, im / 2.0);
        DensityMatrix::from_raw(CMatrix::from_row_slice(
            2,
            2,
            &[half(1.0 + z, 0.0), half(x, -y), half(x, y), half(1.0 - z, 0.0)],
        ))
    }

    /// `tr(ρ H₀)` for `H₀ = |1⟩⟨1|`.
    pub fn energy(&self) -> f64 {
        0.5 * (1.0 - self.r * self.theta.cos())
    }
}

/// Spectral-gap budget `λ⁺ − λ⁻ ≤ E_max` on the drive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DriveConstraint {
    e_max: f64,
}

impl DriveConstraint {
    pub fn new(e_max: f64) -> Result<Self> {
        if !(e_max > 0.0) || !e_max.is_finite() {
            return Err(invalid(format!("drive budget {e_max} must be positive and finite")));
        }
        Ok(Self { e_max })
    }

    pub fn e_max(&self) -> f64 {
        self.e_max
    }
}

/// Coefficients of `vx σx + vy σy + vz σz`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ControlVector {
    pub vx: f64,
    pub vy: f64,
    pub vz: f64,
}

impl ControlVector {
    pub fn norm(&self) -> f64 {
        (self.vx * self.vx + self.vy * self.vy + self.vz * self.vz).sqrt()
    }

    /// `λ⁺ − λ⁻ = 2|v|`.
    pub fn gap(&self) -> f64 {
        2.0 * self.norm()
    }

    pub fn to_operator(&self) -> HermitianOperator {
        let x = HermitianOperator::pauli_x().scaled(self.vx);
        let y = HermitianOperator::pauli_y().scaled(self.vy);
        let z = HermitianOperator::pauli_z().scaled(self.vz);
        &(&x + &y) + &z
    }

    fn as_array(&self) -> [f64; 3] {
        [self.vx, self.vy, self.vz]
    }
}

/// Rotating-frame optimal control `(E_max/2)(−sinφ₀, cosφ₀, 0)`; constant in
/// time because the azimuth is frozen in that frame.
pub fn optimal_control(state: &BlochState, c: &DriveConstraint, _t: f64) -> ControlVector {
    let (s, co) = state.phi.sin_cos();
    let amp = 0.5 * c.e_max;
    ControlVector {
        vx: -amp * s,
        vy: amp * co,
        vz: 0.0,
    }
}

/// The same drive seen in the lab frame, where `H₀ = ε|1⟩⟨1|` turns the
/// azimuth as `φ₀ − εt`. The total lab Hamiltonian is `H₀ + v_lab(t)·σ`.
pub fn lab_frame_control(state: &BlochState, c: &DriveConstraint, t: f64, eps: f64) -> ControlVector {
    let rotated = BlochState {
        phi: state.phi - eps * t,
        ..*state
    };
    optimal_control(&rotated, c, t)
}

/// `θ₀ + E_max t`, not wrapped.
pub fn theta_at(theta0: f64, c: &DriveConstraint, t: f64) -> f64 {
    theta0 + c.e_max * t
}

/// `cosθ₀ − cos(θ₀ + x)` without cancellation at small `x`.
fn cos_drop(theta0: f64, x: f64) -> f64 {
    2.0 * (theta0 + 0.5 * x).sin() * (0.5 * x).sin()
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(invalid(format!("alpha {alpha} outside [0, 1]")));
    }
    Ok(())
}

/// `F = ⟨W⟩/T^α = r [cosθ₀ − cos(θ₀ + E_max T)] / (2 T^α)`.
pub fn objective_f(theta0: f64, r: f64, c: &DriveConstraint, t: f64, alpha: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(invalid(format!("duration {t} must be positive")));
    }
    check_alpha(alpha)?;
    Ok(0.5 * r * cos_drop(theta0, c.e_max * t) / t.powf(alpha))
}

/// Objective sampled on `samples` durations evenly spaced over `(0, t_max]`.
pub fn objective_curve(
    theta0: f64,
    r: f64,
    c: &DriveConstraint,
    alpha: f64,
    t_max: f64,
    samples: usize,
) -> Result<Vec<(f64, f64)>> {
    if samples == 0 {
        return Err(invalid("need at least one sample"));
    }
    (1..=samples)
        .map(|i| {
            let t = t_max * i as f64 / samples as f64;
            objective_f(theta0, r, c, t, alpha).map(|f| (t, f))
        })
        .collect()
}

/// Outcome of maximizing `F` over the drive duration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProtocolResult {
    pub t_opt: f64,
    pub theta_final: f64,
    pub work: f64,
    pub power: f64,
    pub objective: f64,
    /// `F / r`, the shape factor independent of purity.
    pub objective_per_radius: f64,
    pub alpha: f64,
    /// `false` when the supremum is only approached as `T → 0⁺`.
    pub attained: bool,
    /// Stationarity residual `x sin(θ₀+x) − α(cosθ₀ − cos(θ₀+x))` at `x = E_max T`.
    pub residual: f64,
}

/// Stationarity of `F` in the rotation angle `x = E_max T`:
/// `x sin(θ₀+x) − α(cosθ₀ − cos(θ₀+x))`.
pub fn stationarity_residual(theta0: f64, x: f64, alpha: f64) -> f64 {
    x * (theta0 + x).sin() - alpha * cos_drop(theta0, x)
}

fn stationarity_slope(theta0: f64, x: f64, alpha: f64) -> f64 {
    (1.0 - alpha) * (theta0 + x).sin() + x * (theta0 + x).cos()
}

/// `x^{−α}(cosθ₀ − cos(θ₀+x))`, the objective at `r = 2`, `E_max = 1`.
fn shape(theta0: f64, x: f64, alpha: f64) -> f64 {
    cos_drop(theta0, x) / x.powf(alpha)
}

fn scan_grid() -> Vec<f64> {
    const UNIFORM: usize = 4096;
    let first = TAU / UNIFORM as f64;
    // Log-spaced points resolve stationary points hiding below the first uniform node.
    let mut xs: Vec<f64> = (0..48)
        .map(|k| 1e-9 * (first / 1e-9).powf(k as f64 / 48.0))
        .collect();
    xs.extend((1..=UNIFORM).map(|i| TAU * i as f64 / UNIFORM as f64));
    xs
}

fn polish_root(theta0: f64, alpha: f64, mut lo: f64, mut hi: f64) -> f64 {
    let s = |x| stationarity_residual(theta0, x, alpha);
    let mut s_lo = s(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let s_mid = s(mid);
        if s_mid == 0.0 {
            return mid;
        }
        if (s_mid > 0.0) == (s_lo > 0.0) {
            lo = mid;
            s_lo = s_mid;
        } else {
            hi = mid;
        }
    }
    let mut x = 0.5 * (lo + hi);
    for _ in 0..8 {
        let r = s(x);
        if r.abs() <= 1e-15 {
            break;
        }
        let d = stationarity_slope(theta0, x, alpha);
        if d == 0.0 {
            break;
        }
        let next = x - r / d;
        if !(next.is_finite()) || (s(next).abs() >= r.abs()) {
            break;
        }
        x = next;
    }
    x
}

/// Interior stationary points of `F` over `x ∈ (0, 2π]`.
pub fn stationary_points(theta0: f64, alpha: f64) -> Vec<f64> {
    let xs = scan_grid();
    let s: Vec<f64> = xs.iter().map(|&x| stationarity_residual(theta0, x, alpha)).collect();
    let mut roots = Vec::new();
    for i in 0..xs.len() - 1 {
        if s[i] == 0.0 {
            roots.push(xs[i]);
        } else if (s[i] > 0.0) != (s[i + 1] > 0.0) && s[i + 1] != 0.0 {
            roots.push(polish_root(theta0, alpha, xs[i], xs[i + 1]));
        }
    }
    roots
}

/// Duration maximizing `F = ⟨W⟩/T^α` for an initial state at polar angle
/// `θ₀` and radius `r`.
///
/// The global maximum over `x = E_max T ∈ (0, 2π]` is selected among the
/// stationary points of `F` and the `x → 0⁺` limit, which is only positive for
/// `α = 1` (`r E_max sinθ₀ / 2`). When that limit wins the result carries
/// `attained = false`, `t_opt = 0` and the limiting power.
pub fn optimal_time(theta0: f64, r: f64, c: &DriveConstraint, alpha: f64) -> Result<ProtocolResult> {
    if alpha == 0.0 {
        return Err(invalid(
            "alpha = 0 maximizes work alone; duration optimization needs alpha in (0, 1]",
        ));
    }
    check_alpha(alpha)?;
    if !(0.0..PI).contains(&theta0) {
        return Err(invalid(format!("initial polar angle {theta0} outside [0, π)")));
    }
    if !(0.0..=1.0).contains(&r) {
        return Err(invalid(format!("Bloch radius {r} outside [0, 1]")));
    }
    let e = c.e_max;
    let limit = if alpha == 1.0 { theta0.sin() } else { 0.0 };
    let best = stationary_points(theta0, alpha)
        .into_iter()
        .map(|x| (x, shape(theta0, x, alpha)))
        .max_by(|a, b| a.1.total_cmp(&b.1));

    match best {
        // Rounding can fake stationary points just above x = 0 for α = 1.
        Some((x, f)) if f > limit + 1e-12 => {
            let t = x / e;
            let work = 0.5 * r * cos_drop(theta0, x);
            let per_radius = 0.5 * f * e.powf(alpha);
            Ok(ProtocolResult {
                t_opt: t,
                theta_final: theta0 + x,
                work,
                power: work / t,
                objective: r * per_radius,
                objective_per_radius: per_radius,
                alpha,
                attained: true,
                residual: stationarity_residual(theta0, x, alpha),
            })
        }
        _ => {
            let per_radius = 0.5 * e * limit;
            Ok(ProtocolResult {
                t_opt: 0.0,
                theta_final: theta0,
                work: 0.0,
                power: r * per_radius,
                objective: r * per_radius,
                objective_per_radius: per_radius,
                alpha,
                attained: false,
                residual: 0.0,
            })
        }
    }
}

/// `Δz_T − (E_max T/α) p^{xy}_T` with `Δz_T = r(cosθ₀ − cosθ_T)` the height
/// descended towards the active pole and `p^{xy}_T = r sinθ_T` the projection
/// onto the equatorial plane. Equals `−(r/α)` times the stationarity residual.
pub fn geometric_residual(theta0: f64, r: f64, c: &DriveConstraint, t: f64, alpha: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(invalid(format!("duration {t} must be positive")));
    }
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(invalid(format!("alpha {alpha} outside (0, 1]")));
    }
    let x = c.e_max * t;
    let theta_t = theta0 + x;
    let dz = r * cos_drop(theta0, x);
    let pxy = r * theta_t.sin();
    Ok(dz - x / alpha * pxy)
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn axpy(a: [f64; 3], s: f64, b: [f64; 3]) -> [f64; 3] {
    [a[0] + s * b[0], a[1] + s * b[1], a[2] + s * b[2]]
}

/// Fixed-step RK4 for the Bloch equation `da/dt = 2 v(t) × a`.
pub fn integrate_bloch(
    a0: [f64; 3],
    field: impl Fn(f64) -> [f64; 3],
    duration: f64,
    steps: usize,
) -> Vec<(f64, [f64; 3])> {
    let h = duration / steps as f64;
    let rhs = |t: f64, a: [f64; 3]| {
        let v = field(t);
        let c = cross(v, a);
        [2.0 * c[0], 2.0 * c[1], 2.0 * c[2]]
    };
    let mut out = Vec::with_capacity(steps + 1);
    let mut a = a0;
    out.push((0.0, a));
    for i in 0..steps {
        let t = i as f64 * h;
        let k1 = rhs(t, a);
        let k2 = rhs(t + 0.5 * h, axpy(a, 0.5 * h, k1));
        let k3 = rhs(t + 0.5 * h, axpy(a, 0.5 * h, k2));
        let k4 = rhs(t + h, axpy(a, h, k3));
        a = [
            a[0] + h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
            a[1] + h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]),
            a[2] + h / 6.0 * (k1[2] + 2.0 * k2[2] + 2.0 * k3[2] + k4[2]),
        ];
        out.push((t + h, a));
    }
    out
}

/// Rotating-frame Bloch trajectory under [`optimal_control`].
pub fn bloch_trajectory(
    state: &BlochState,
    c: &DriveConstraint,
    duration: f64,
    steps: usize,
) -> Result<Vec<(f64, [f64; 3])>> {
    if steps < 100 {
        return Err(invalid(format!("integration needs at least 100 steps, got {steps}")));
    }
    if !(duration >= 0.0) {
        return Err(invalid(format!("duration {duration} must be non-negative")));
    }
    let v = optimal_control(state, c, 0.0).as_array();
    Ok(integrate_bloch(state.vector(), |_| v, duration, steps))
}

/// `θ` folded onto `[0, π]`, the range of a Bloch polar angle.
pub fn fold_polar(theta: f64) -> f64 {
    let t = theta.rem_euclid(TAU);
    if t > PI {
        TAU - t
    } else {
        t
    }
}

/// Integrates the rotating-frame Bloch equation under the optimal control and
/// returns `max_t |θ_numeric(t) − θ₀ − E_max t|` (angles folded onto `[0, π]`).
/// A zero Bloch vector has no polar angle and reports zero deviation.
pub fn validate_by_integration(
    state: &BlochState,
    c: &DriveConstraint,
    duration: f64,
    steps: usize,
) -> Result<f64> {
    let traj = bloch_trajectory(state, c, duration, steps)?;
    if state.r == 0.0 {
        return Ok(0.0);
    }
    Ok(traj
        .iter()
        .map(|&(t, a)| {
            let numeric = BlochState::from_vector(a).theta;
            (numeric - fold_polar(theta_at(state.theta, c, t))).abs()
        })
        .fold(0.0, f64::max))
}
