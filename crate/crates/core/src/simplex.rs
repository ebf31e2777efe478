//! Deterministic Nelder–Mead minimizer used by the candidate searches.

/// Outcome of [`minimize`].
#[derive(Debug, Clone)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub evals: usize,
}

/// Minimize `f` from `x0` with initial simplex edge `step`.
///
/// Non-finite objective values are treated as `+∞`. Stops after `max_evals`
/// evaluations or when the simplex value spread falls below `ftol`.
pub fn minimize<F>(mut f: F, x0: &[f64], step: f64, max_evals: usize, ftol: f64) -> Minimum
where
    F: FnMut(&[f64]) -> f64,
{
    let n = x0.len();
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
    if n == 0 {
        let value = eval(x0, &mut evals);
        return Minimum { x: Vec::new(), value, evals };
    }
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    let v0 = eval(x0, &mut evals);
    simplex.push((x0.to_vec(), v0));
    for i in 0..n {
        let mut x = x0.to_vec();
        x[i] += step;
        let v = eval(&x, &mut evals);
        simplex.push((x, v));
    }
    let combine =
        |a: &[f64], b: &[f64], t: f64| -> Vec<f64> { a.iter().zip(b).map(|(x, y)| x + t * (y - x)).collect() };
    while evals < max_evals {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let best = simplex[0].1;
        let worst = simplex[n].1;
        if worst.is_finite() && (worst - best).abs() <= ftol {
            break;
        }
        let mut centroid = vec![0.0; n];
        for (x, _) in &simplex[..n] {
            for (c, xi) in centroid.iter_mut().zip(x) {
                *c += xi / n as f64;
            }
        }
        let reflected = combine(&centroid, &simplex[n].0, -1.0);
        let fr = eval(&reflected, &mut evals);
        if fr < best {
            let expanded = combine(&centroid, &simplex[n].0, -2.0);
            let fe = eval(&expanded, &mut evals);
            simplex[n] = if fe < fr { (expanded, fe) } else { (reflected, fr) };
        } else if fr < simplex[n - 1].1 {
            simplex[n] = (reflected, fr);
        } else {
            let (target, ft) = if fr < worst { (&reflected, fr) } else { (&simplex[n].0.clone(), worst) };
            let contracted = combine(&centroid, target, 0.5);
            let fc = eval(&contracted, &mut evals);
            if fc < ft {
                simplex[n] = (contracted, fc);
            } else {
                let x0 = simplex[0].0.clone();
                for item in simplex.iter_mut().skip(1) {
                    let x = combine(&x0, &item.0, 0.5);
                    let v = eval(&x, &mut evals);
                    *item = (x, v);
                }
            }
        }
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    let (x, value) = simplex.swap_remove(0);
    Minimum { x, value, evals }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_quadratic_minimum() {
        let m = minimize(|x| (x[0] - 1.0).powi(2) + 3.0 * (x[1] + 2.0).powi(2), &[0.0, 0.0], 0.5, 2000, 1e-14);
        assert!((m.x[0] - 1.0).abs() < 1e-5 && (m.x[1] + 2.0).abs() < 1e-5, "{m:?}");
    }

    #[test]
    fn rosenbrock_and_nan_handling() {
        let m = minimize(
            |x| {
                if x[0] > 5.0 {
                    f64::NAN
                } else {
                    (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2)
                }
            },
            &[-1.2, 1.0],
            0.3,
            10_000,
            1e-16,
        );
        assert!(m.value < 1e-8, "{m:?}");
    }

    #[test]
    fn deterministic() {
        let f = |x: &[f64]| x.iter().map(|v| v.sin() + v * v * 0.1).sum::<f64>();
        let a = minimize(f, &[1.0, 2.0, 3.0], 0.4, 500, 0.0);
        let b = minimize(f, &[1.0, 2.0, 3.0], 0.4, 500, 0.0);
        assert_eq!(a.x, b.x);
        assert_eq!(a.value, b.value);
    }
}
