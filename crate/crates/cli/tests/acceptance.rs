//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any fails.

use std::f64::consts::PI;
use std::fs;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use qbattery::array::{self, arrival_time, speed_limit_bounds, ArraySpec, Mode, Propagation};
use qbattery::control::{self, clamp_spectrum, entropy_trace, oracle_hamiltonian, time_grid, OptimizationConfig};
use qbattery::ergotropy::{active_state, capacity, ergotropy, majorizes, passive_state, BatterySpec};
use qbattery::quantum::{binary_entropy, evolve, evolve_density, CMatrix, CVector, DensityMatrix, HermitianOperator, PureState, C64};
use qbattery::qubit::{objective_f, optimal_time, DriveConstraint};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 20240601;
const INSTANCES: usize = 1000;

struct Report {
    failed: usize,
}

impl Report {
    fn check(&mut self, id: u32, name: &str, limit: Duration, f: impl FnOnce() -> Result<String, String>) {
        let start = Instant::now();
        let outcome = f();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if elapsed > limit => Err(format!("{detail}; took {elapsed:.2?} > {limit:?}")),
            other => other,
        };
        match outcome {
            Ok(detail) => println!("PASS [{id}] {name}: {detail} ({elapsed:.2?})"),
            Err(detail) => {
                self.failed += 1;
                println!("FAIL [{id}] {name}: {detail} ({elapsed:.2?})");
            }
        }
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e<E: std::fmt::Display>(err: E) -> String {
    err.to_string()
}

fn random_matrix(rng: &mut ChaCha8Rng, d: usize) -> CMatrix {
    CMatrix::from_fn(d, d, |_, _| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
}

fn random_hermitian(rng: &mut ChaCha8Rng, d: usize) -> HermitianOperator {
    let a = random_matrix(rng, d);
    HermitianOperator::new((&a + a.adjoint()) * C64::new(0.5, 0.0)).unwrap()
}

fn random_density(rng: &mut ChaCha8Rng, d: usize) -> DensityMatrix {
    let a = random_matrix(rng, d);
    let p = &a * a.adjoint();
    let mut p = (&p + p.adjoint()) * C64::new(0.5, 0.0);
    let tr = p.trace().re;
    p.unscale_mut(tr);
    DensityMatrix::new(p).unwrap()
}

fn random_state(rng: &mut ChaCha8Rng, d: usize) -> PureState {
    let v = CVector::from_fn(d, |_, _| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
    PureState::normalized(v).unwrap()
}

fn random_probabilities(rng: &mut ChaCha8Rng, d: usize) -> Vec<f64> {
    let w: Vec<f64> = (0..d).map(|_| rng.random::<f64>().powi(3)).collect();
    let s: f64 = w.iter().sum();
    w.iter().map(|x| x / s).collect()
}

fn sorted(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v
}

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn dense_grid_max(theta0: f64, c: &DriveConstraint, alpha: f64, points: usize) -> (f64, f64) {
    let t_max = 2.0 * PI / c.e_max();
    (1..=points)
        .map(|k| {
            let t = t_max * k as f64 / points as f64;
            (t, objective_f(theta0, 1.0, c, t, alpha).unwrap())
        })
        .fold((0.0, f64::NEG_INFINITY), |best, p| if p.1 > best.1 { p } else { best })
}

fn criterion_1() -> Result<String, String> {
    let c = DriveConstraint::new(1.0).map_err(e)?;
    let res = optimal_time(0.0, 1.0, &c, 1.0).map_err(e)?;
    let ratio = res.theta_final / PI;
    ensure((ratio - 0.7420).abs() <= 0.0100, || format!("θ_T/π = {ratio}"))?;
    let (t_grid, f_grid) = dense_grid_max(0.0, &c, 1.0, 100_000);
    let gap = (res.objective - f_grid).abs();
    ensure(res.objective >= f_grid - 1e-12 && gap <= 1e-6, || {
        format!("solver F = {}, grid F = {f_grid}", res.objective)
    })?;
    Ok(format!(
        "θ_T/π = {ratio:.10}, |F_solver − F_grid| = {gap:.2e}, |T_solver − T_grid| = {:.2e}",
        (res.t_opt - t_grid).abs()
    ))
}

fn criterion_2() -> Result<String, String> {
    let c = DriveConstraint::new(1.0).map_err(e)?;
    let res = optimal_time(0.0, 1.0, &c, 0.5).map_err(e)?;
    let ratio = res.theta_final / PI;
    ensure((ratio - 0.887).abs() <= 0.010, || format!("θ_T/π = {ratio}"))?;
    Ok(format!("θ_T/π = {ratio:.10}"))
}

fn criterion_3() -> Result<String, String> {
    let e_max = 1.0;
    let mut worst_fid: f64 = 1.0;
    for n in 1..=8 {
        let spec = ArraySpec::new(n, 1.0, e_max).map_err(e)?;
        let adv = array::power_advantage(&spec).map_err(e)?;
        ensure((adv - n as f64).abs() <= 1e-9, || format!("n={n}: advantage {adv}"))?;
        let out = array::charge(&spec, Mode::Global, Propagation::Bare).map_err(e)?;
        let expected = PI / (n as f64 * e_max);
        ensure((out.duration - expected).abs() <= 1e-9, || format!("n={n}: duration {}", out.duration))?;
        ensure(out.final_fidelity >= 1.0 - 1e-9, || format!("n={n}: fidelity {}", out.final_fidelity))?;
        worst_fid = worst_fid.min(out.final_fidelity);
    }
    Ok(format!("advantage = n for n=1..8, min global fidelity {worst_fid:.15}"))
}

fn criterion_4() -> Result<String, String> {
    let mut parts = Vec::new();
    for n in [1, 2, 4, 9] {
        let spec = ArraySpec::new(n, 1.0, 1.0).map_err(e)?;
        let p = array::path_lengths(&spec, 1000).map_err(e)?;
        let want = (n as f64).sqrt() * PI / 2.0;
        ensure((p.global - PI / 2.0).abs() <= 1e-4, || format!("n={n}: global {}", p.global))?;
        ensure((p.parallel / want - 1.0).abs() <= 0.01, || format!("n={n}: parallel {}", p.parallel))?;
        parts.push(format!("n={n}: {:.6}/{:.6}", p.global, p.parallel));
    }
    Ok(format!("global/parallel {}", parts.join(", ")))
}

struct Sweep {
    n4: Option<HermitianOperator>,
    n4_time: Option<f64>,
}

fn criterion_5(sweep: &mut Sweep) -> Result<String, String> {
    let mut points = Vec::new();
    for n in 1..=4 {
        let mut cfg = OptimizationConfig::new(n, 1.0);
        cfg.restarts = 8;
        cfg.seed = SEED;
        let res = control::optimize(&cfg).map_err(e)?;
        let t = res.t_perp.ok_or_else(|| format!("n={n}: target missed, best fidelity {}", res.achieved_fidelity))?;
        let oracle = PI / n as f64;
        ensure((t / oracle - 1.0).abs() <= 0.05, || format!("n={n}: t_perp {t} vs {oracle}"))?;
        points.push((n as f64, t));
        if n == 4 {
            sweep.n4 = Some(res.hamiltonian.clone());
            sweep.n4_time = Some(t);
        }
    }
    let c = points.iter().map(|(n, t)| t / n).sum::<f64>() / points.iter().map(|(n, _)| 1.0 / (n * n)).sum::<f64>();
    let resid = points.iter().map(|(n, t)| (t - c / n).powi(2)).sum::<f64>().sqrt();
    let norm = points.iter().map(|(_, t)| t * t).sum::<f64>().sqrt();
    let rel = resid / norm;
    ensure(rel <= 0.05, || format!("fit residual {rel}"))?;
    let ratios: Vec<String> = points.iter().map(|(n, t)| format!("{:.5}", t * n / PI)).collect();
    Ok(format!("t_perp·n/π = [{}], c = {c:.6}, residual {rel:.2e}", ratios.join(", ")))
}

fn criterion_6(sweep: &Sweep) -> Result<String, String> {
    let (h, t_perp) = match (&sweep.n4, sweep.n4_time) {
        (Some(h), Some(t)) => (h, t),
        _ => return Err("no optimized n=4 Hamiltonian".into()),
    };
    let trace = entropy_trace(h, 4, &[0, 1], &time_grid(t_perp, 201)).map_err(e)?;
    let s0 = trace[0].1;
    let s_end = trace[trace.len() - 1].1;
    let s_max = trace.iter().map(|p| p.1).fold(0.0, f64::max);
    ensure(s0 <= 0.05 && s_end <= 0.05 && s_max >= 0.5, || {
        format!("S(0) = {s0}, S(t⊥) = {s_end}, max {s_max}")
    })?;

    let lambda = 4.0;
    let oracle = oracle_hamiltonian(4, lambda).map_err(e)?;
    let times = time_grid(PI / lambda, 201);
    let exact = entropy_trace(&oracle, 4, &[0, 1], &times).map_err(e)?;
    let dev = exact
        .iter()
        .map(|&(t, s)| (s - binary_entropy((lambda * t / 2.0).cos().powi(2))).abs())
        .fold(0.0, f64::max);
    ensure(dev <= 1e-9, || format!("oracle deviates by {dev}"))?;
    Ok(format!("S(0) = {s0:.2e}, S(t⊥) = {s_end:.2e}, max S = {s_max:.4}, oracle deviation {dev:.1e}"))
}

fn criterion_7() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let dims = [2, 3, 4, 6, 8];

    for i in 0..INSTANCES {
        let d = dims[i % dims.len()];
        let spec = BatterySpec::new(random_hermitian(&mut rng, d), random_density(&mut rng, d)).map_err(e)?;
        let w = ergotropy(&spec);
        ensure(w >= -1e-10, || format!("negative ergotropy {w}"))?;
        let passive = spec.with_state(passive_state(&spec)).map_err(e)?;
        ensure(ergotropy(&passive).abs() <= 1e-10, || format!("passive ergotropy {}", ergotropy(&passive)))?;
        let spectrum = sorted(spec.state().eigenvalues());
        for (label, s) in [("passive", passive_state(&spec)), ("active", active_state(&spec))] {
            let dev = max_diff(&spectrum, &sorted(s.eigenvalues()));
            ensure(dev <= 1e-10, || format!("{label} spectrum moved by {dev}"))?;
        }
    }

    let mut ordered = 0;
    for i in 0..INSTANCES {
        let d = dims[i % dims.len()];
        let p = random_probabilities(&mut rng, d);
        // A convex mix with a permutation of itself is majorized by p.
        let mut shuffled = p.clone();
        shuffled.rotate_left(1 + i % (d - 1));
        let mix = rng.random::<f64>();
        let q: Vec<f64> = p.iter().zip(&shuffled).map(|(a, b)| mix * a + (1.0 - mix) * b).collect();
        let levels: Vec<f64> = (0..d).map(|_| rng.random_range(0.0..3.0)).collect();
        let h0 = HermitianOperator::from_real_diagonal(&levels);
        let cap = |v: &[f64]| -> Result<f64, String> {
            let rho = DensityMatrix::from_populations(v).map_err(e)?;
            Ok(capacity(&BatterySpec::new(h0.clone(), rho).map_err(e)?))
        };
        for (a, b) in [(&p, &q), (&q, &p)] {
            if majorizes(a, b).map_err(e)? {
                ordered += 1;
                let (ca, cb) = (cap(a)?, cap(b)?);
                ensure(ca >= cb - 1e-10, || format!("capacity {ca} < {cb}"))?;
            }
        }
    }
    ensure(ordered >= INSTANCES, || format!("only {ordered} majorizing pairs"))?;

    let mut worst_unitary: f64 = 0.0;
    for i in 0..INSTANCES {
        let d = dims[i % dims.len()];
        let h = random_hermitian(&mut rng, d);
        let t = rng.random_range(0.0..10.0);
        let rho = random_density(&mut rng, d);
        let out = evolve_density(&h, t, &rho).map_err(e)?;
        let psi = random_state(&mut rng, d);
        let norm = evolve(&h, t, &psi).map_err(e)?.amplitudes().norm();
        let dev = [(out.trace() - rho.trace()).abs(), (out.purity() - rho.purity()).abs(), (norm - 1.0).abs()]
            .into_iter()
            .fold(0.0, f64::max);
        ensure(dev <= 1e-10, || format!("unitary invariant drift {dev}"))?;
        worst_unitary = worst_unitary.max(dev);
    }

    let mut arrivals = 0;
    for i in 0..INSTANCES {
        let d = [2, 4, 8][i % 3];
        let lambda = rng.random_range(0.5..3.0);
        let h = clamp_spectrum(&random_hermitian(&mut rng, d), lambda);
        let initial = random_state(&mut rng, d);
        let tau = rng.random_range(0.05..2.0) * PI / lambda;
        let target = evolve(&h, tau, &initial).map_err(e)?;
        let direct = speed_limit_bounds(&h, &initial, &target).map_err(e)?.max();
        ensure(tau >= direct - 1e-9, || format!("τ = {tau} beats bound {direct}"))?;
        let t = arrival_time(&h, &initial, &target, 1.0 - 1e-9, 1.1 * tau)
            .map_err(e)?
            .ok_or_else(|| format!("no arrival within 1.1τ (τ = {tau})"))?;
        let reached = evolve(&h, t, &initial).map_err(e)?;
        let bound = speed_limit_bounds(&h, &initial, &reached).map_err(e)?.max();
        ensure(t >= bound - 1e-9, || format!("arrival {t} beats bound {bound}"))?;
        arrivals += 1;
    }

    let mut attained = 0;
    let mut worst_fd: f64 = 0.0;
    for _ in 0..INSTANCES {
        let theta0 = rng.random_range(0.0..0.95 * PI);
        let r = rng.random_range(0.05..1.0);
        let alpha = rng.random_range(0.05..=1.0);
        let c = DriveConstraint::new(rng.random_range(0.2..3.0)).map_err(e)?;
        let res = optimal_time(theta0, r, &c, alpha).map_err(e)?;
        if !res.attained {
            continue;
        }
        attained += 1;
        let h = 1e-6 * res.t_opt;
        let f = |t: f64| objective_f(theta0, r, &c, t, alpha).unwrap();
        let slope = ((f(res.t_opt + h) - f(res.t_opt - h)) / (2.0 * h)).abs();
        ensure(slope <= 1e-6, || format!("FD slope {slope} at θ0={theta0}, α={alpha}"))?;
        worst_fd = worst_fd.max(slope);
    }
    ensure(attained > INSTANCES / 2, || format!("only {attained} attained optima"))?;

    Ok(format!(
        "{INSTANCES} instances per suite; {ordered} majorizing pairs, unitary drift {worst_unitary:.1e}, {arrivals} arrivals, {attained} optima with FD slope ≤ {worst_fd:.1e}"
    ))
}

fn criterion_8() -> Result<String, String> {
    let dir = std::env::temp_dir().join(format!("qbattery-acceptance-{}", std::process::id()));
    let run = |sub: &str| -> Result<(), String> {
        let status = Command::new(env!("CARGO_BIN_EXE_qbattery"))
            .args(["optimize", "--n", "3", "--seed", "11", "--restarts", "8", "--out"])
            .arg(dir.join(sub))
            .output()
            .map_err(e)?
            .status;
        ensure(status.success(), || format!("optimize exited with {status}"))
    };
    run("a")?;
    run("b")?;
    let files = ["result.json", "hamiltonian.json", "history.csv"];
    let mut identical = true;
    for f in files {
        identical &= fs::read(dir.join("a").join(f)).map_err(e)? == fs::read(dir.join("b").join(f)).map_err(e)?;
    }
    let _ = fs::remove_dir_all(&dir);
    ensure(identical, || "outputs differ".into())?;
    Ok(format!("{} identical across two runs", files.join(", ")))
}

fn main() -> ExitCode {
    let mut report = Report { failed: 0 };
    let mut sweep = Sweep { n4: None, n4_time: None };
    report.check(1, "qubit optimum at α=1", Duration::from_secs(1), criterion_1);
    report.check(2, "qubit optimum at α=1/2", Duration::from_secs(1), criterion_2);
    report.check(3, "N-fold power advantage", Duration::from_secs(5), criterion_3);
    report.check(4, "path-length geometry", Duration::from_secs(10), criterion_4);
    report.check(5, "optimized charging time scales as 1/n", Duration::from_secs(600), || criterion_5(&mut sweep));
    report.check(6, "entanglement along the optimized drive", Duration::from_secs(30), || criterion_6(&sweep));
    report.check(7, "seeded property suites", Duration::from_secs(120), criterion_7);
    report.check(8, "optimize determinism", Duration::from_secs(120), criterion_8);
    if report.failed == 0 {
        println!("all criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("{} criteria failed", report.failed);
        ExitCode::FAILURE
    }
}
