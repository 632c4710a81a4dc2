//! Derivative-free Nelder-Mead simplex minimizer.
//!
//! Uses the dimension-adaptive coefficients of Gao and Han, which keep the
//! method from stalling in the 11-parameter variational problem.

#[derive(Debug, Clone)]
pub struct SimplexOptions {
    /// Edge length of the initial simplex along each coordinate.
    pub initial_step: Vec<f64>,
    /// Stop when the spread of function values drops below this...
    pub ftol: f64,
    /// ...and the simplex diameter is below this.
    pub xtol: f64,
    pub max_evals: usize,
}

impl SimplexOptions {
    pub fn uniform(dim: usize, step: f64) -> Self {
        SimplexOptions {
            initial_step: vec![step; dim],
            ftol: 1e-14,
            xtol: 1e-9,
            max_evals: 20_000,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SimplexResult {
    pub x: Vec<f64>,
    pub fx: f64,
    pub evals: usize,
    pub converged: bool,
}

pub fn nelder_mead<F>(mut f: F, x0: &[f64], opts: &SimplexOptions) -> SimplexResult
where
    F: FnMut(&[f64]) -> f64,
{
    let n = x0.len();
    assert_eq!(opts.initial_step.len(), n, "step vector length mismatch");
    let nf = n as f64;
    let (alpha, gamma, rho, sigma) = if n > 1 {
        (1.0, 1.0 + 2.0 / nf, 0.75 - 0.5 / nf, 1.0 - 1.0 / nf)
    } else {
        (1.0, 2.0, 0.5, 0.5)
    };

    let mut evals = 0usize;
    let mut eval = |x: &[f64], evals: &mut usize| {
        *evals += 1;
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };

    let mut pts: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    let mut vals: Vec<f64> = Vec::with_capacity(n + 1);
    pts.push(x0.to_vec());
    vals.push(eval(x0, &mut evals));
    for i in 0..n {
        let mut x = x0.to_vec();
        x[i] += opts.initial_step[i];
        vals.push(eval(&x, &mut evals));
        pts.push(x);
    }

    let mut converged = false;
    let mut centroid = vec![0.0; n];
    let mut trial = vec![0.0; n];
    let mut trial2 = vec![0.0; n];

    loop {
        // order: best first
        let mut order: Vec<usize> = (0..=n).collect();
        order.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]));
        pts = order.iter().map(|&i| pts[i].clone()).collect();
        vals = order.iter().map(|&i| vals[i]).collect();

        let spread = vals[n] - vals[0];
        let diameter = pts[1..]
            .iter()
            .map(|p| {
                p.iter()
                    .zip(&pts[0])
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max)
            })
            .fold(0.0, f64::max);
        if spread.abs() <= opts.ftol && diameter <= opts.xtol {
            converged = true;
            break;
        }
        if evals >= opts.max_evals {
            break;
        }

        centroid.iter_mut().for_each(|c| *c = 0.0);
        for p in &pts[..n] {
            for (c, v) in centroid.iter_mut().zip(p) {
                *c += v / nf;
            }
        }
        let worst = &pts[n];

        for j in 0..n {
            trial[j] = centroid[j] + alpha * (centroid[j] - worst[j]);
        }
        let fr = eval(&trial, &mut evals);

        if fr < vals[0] {
            for j in 0..n {
                trial2[j] = centroid[j] + gamma * (trial[j] - centroid[j]);
            }
            let fe = eval(&trial2, &mut evals);
            if fe < fr {
                pts[n].copy_from_slice(&trial2);
                vals[n] = fe;
            } else {
                pts[n].copy_from_slice(&trial);
                vals[n] = fr;
            }
            continue;
        }
        if fr < vals[n - 1] {
            pts[n].copy_from_slice(&trial);
            vals[n] = fr;
            continue;
        }

        // contraction, outside if the reflection improved on the worst
        let outside = fr < vals[n];
        for j in 0..n {
            trial2[j] = if outside {
                centroid[j] + rho * (trial[j] - centroid[j])
            } else {
                centroid[j] + rho * (pts[n][j] - centroid[j])
            };
        }
        let fc = eval(&trial2, &mut evals);
        if (outside && fc <= fr) || (!outside && fc < vals[n]) {
            pts[n].copy_from_slice(&trial2);
            vals[n] = fc;
            continue;
        }

        // shrink toward the best vertex
        let best = pts[0].clone();
        for i in 1..=n {
            for j in 0..n {
                pts[i][j] = best[j] + sigma * (pts[i][j] - best[j]);
            }
            vals[i] = eval(&pts[i], &mut evals);
        }
    }

    let best = (0..=n)
        .min_by(|&a, &b| vals[a].total_cmp(&vals[b]))
        .unwrap_or(0);
    SimplexResult {
        x: pts[best].clone(),
        fx: vals[best],
        evals,
        converged,
    }
}
