//! Nelder-Mead simplex search with dimension-adaptive coefficients
//! (reflection 1, expansion `1 + 2/n`, contraction `3/4 − 1/(2n)`, shrink
//! `1 − 1/n`), which keeps the simplex from collapsing in high dimension.

#[derive(Debug, Clone)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    /// Best value after each iteration, starting with the initial simplex.
    pub history: Vec<f64>,
    pub converged: bool,
}

pub struct Settings {
    pub initial_step: f64,
    pub max_iters: usize,
    /// Stop once the spread of simplex values falls below this.
    pub tolerance: f64,
}

pub fn minimize(mut f: impl FnMut(&[f64]) -> f64, x0: &[f64], settings: &Settings) -> Minimum {
    let n = x0.len();
    let nf = n as f64;
    let (rho, chi, gamma, sigma) = if n > 1 {
        (1.0, 1.0 + 2.0 / nf, 0.75 - 0.5 / nf, 1.0 - 1.0 / nf)
    } else {
        (1.0, 2.0, 0.5, 0.5)
    };

    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    simplex.push(x0.to_vec());
    for i in 0..n {
        let mut v = x0.to_vec();
        v[i] += settings.initial_step;
        simplex.push(v);
    }
    let mut values: Vec<f64> = simplex.iter().map(|v| f(v)).collect();
    let mut history = Vec::with_capacity(settings.max_iters + 1);
    let mut order: Vec<usize> = (0..=n).collect();
    let mut converged = false;
    let mut iterations = 0;

    let sort = |order: &mut Vec<usize>, values: &[f64]| {
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]).then(a.cmp(&b)));
    };
    sort(&mut order, &values);
    history.push(values[order[0]]);

    let point = |centroid: &[f64], worst: &[f64], coef: f64| -> Vec<f64> {
        centroid
            .iter()
            .zip(worst)
            .map(|(c, w)| c + coef * (c - w))
            .collect()
    };

    while iterations < settings.max_iters {
        if values[order[n]] - values[order[0]] <= settings.tolerance {
            converged = true;
            break;
        }
        iterations += 1;
        let worst = order[n];
        let mut centroid = vec![0.0; n];
        for &i in &order[..n] {
            for (c, x) in centroid.iter_mut().zip(&simplex[i]) {
                *c += x / nf;
            }
        }

        let xr = point(&centroid, &simplex[worst], rho);
        let fr = f(&xr);
        let (best_v, second_worst_v) = (values[order[0]], values[order[n - 1]]);

        if fr < best_v {
            let xe = point(&centroid, &simplex[worst], rho * chi);
            let fe = f(&xe);
            if fe < fr {
                simplex[worst] = xe;
                values[worst] = fe;
            } else {
                simplex[worst] = xr;
                values[worst] = fr;
            }
        } else if fr < second_worst_v {
            simplex[worst] = xr;
            values[worst] = fr;
        } else {
            let (xc, fc, accept) = if fr < values[worst] {
                let xc = point(&centroid, &simplex[worst], rho * gamma);
                let fc = f(&xc);
                (xc, fc, fc <= fr)
            } else {
                let xc = point(&centroid, &simplex[worst], -gamma);
                let fc = f(&xc);
                (xc, fc, fc < values[worst])
            };
            if accept {
                simplex[worst] = xc;
                values[worst] = fc;
            } else {
                let best = simplex[order[0]].clone();
                for &i in &order[1..] {
                    for (x, b) in simplex[i].iter_mut().zip(&best) {
                        *x = b + sigma * (*x - b);
                    }
                    values[i] = f(&simplex[i]);
                }
            }
        }
        sort(&mut order, &values);
        history.push(values[order[0]]);
    }

    Minimum {
        x: simplex[order[0]].clone(),
        value: values[order[0]],
        iterations,
        history,
        converged,
    }
}
