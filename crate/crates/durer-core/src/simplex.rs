//! Deterministic Nelder–Mead downhill simplex.

use alloc::vec;
use alloc::vec::Vec;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SimplexConfig {
    pub max_evaluations: usize,
    pub reflection: f64,
    pub expansion: f64,
    pub contraction: f64,
    pub shrink: f64,
    /// Stop when `f_worst − f_best ≤ f_tol_abs + f_tol_rel · |f_best|` ...
    pub f_tol_abs: f64,
    pub f_tol_rel: f64,
    /// ... and every vertex lies within `x_tol` (max-norm) of the best one.
    pub x_tol: f64,
}

impl Default for SimplexConfig {
    fn default() -> Self {
        Self {
            max_evaluations: 20_000,
            reflection: 1.0,
            expansion: 2.0,
            contraction: 0.5,
            shrink: 0.5,
            f_tol_abs: 1e-20,
            f_tol_rel: 1e-14,
            x_tol: 1e-10,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimplexOutcome {
    pub best: Vec<f64>,
    pub value: f64,
    pub evaluations: usize,
    pub iterations: usize,
    /// Tolerance met before the evaluation budget ran out.
    pub converged: bool,
    /// Best value after each iteration; never increases.
    pub history: Vec<f64>,
}

fn lerp(from: &[f64], to: &[f64], t: f64) -> Vec<f64> {
    from.iter().zip(to).map(|(a, b)| a + t * (b - a)).collect()
}

/// Minimize `f` from `start`, with the initial simplex `start + steps[i]·eᵢ`.
pub fn minimize<F>(mut f: F, start: &[f64], steps: &[f64], config: &SimplexConfig) -> SimplexOutcome
where
    F: FnMut(&[f64]) -> f64,
{
    let n = start.len();
    assert_eq!(steps.len(), n, "one step per coordinate");
    let mut evaluations = 0usize;
    let mut eval = |x: &[f64], count: &mut usize| {
        *count += 1;
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };

    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    let mut values: Vec<f64> = Vec::with_capacity(n + 1);
    simplex.push(start.to_vec());
    values.push(eval(start, &mut evaluations));
    for i in 0..n {
        let mut x = start.to_vec();
        x[i] += steps[i];
        values.push(eval(&x, &mut evaluations));
        simplex.push(x);
    }

    let mut order: Vec<usize> = (0..=n).collect();
    let mut history = Vec::new();
    let mut iterations = 0usize;
    let mut converged = false;
    loop {
        // stable sort keeps ties in index order for determinism
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        let (best, worst, second) = (order[0], order[n], order[n - 1]);
        history.push(values[best]);

        let f_spread = values[worst] - values[best];
        let x_spread = simplex
            .iter()
            .flat_map(|v| v.iter().zip(&simplex[best]).map(|(a, b)| (a - b).abs()))
            .fold(0.0, f64::max);
        if f_spread <= config.f_tol_abs + config.f_tol_rel * values[best].abs() && x_spread <= config.x_tol {
            converged = true;
            break;
        }
        if evaluations + n + 2 > config.max_evaluations {
            break;
        }
        iterations += 1;

        let mut centroid = vec![0.0; n];
        for &idx in order.iter().take(n) {
            for (c, x) in centroid.iter_mut().zip(&simplex[idx]) {
                *c += x / n as f64;
            }
        }
        let reflected = lerp(&centroid, &simplex[worst], -config.reflection);
        let f_r = eval(&reflected, &mut evaluations);
        if f_r < values[best] {
            let expanded = lerp(&centroid, &simplex[worst], -config.reflection * config.expansion);
            let f_e = eval(&expanded, &mut evaluations);
            if f_e < f_r {
                simplex[worst] = expanded;
                values[worst] = f_e;
            } else {
                simplex[worst] = reflected;
                values[worst] = f_r;
            }
            continue;
        }
        if f_r < values[second] {
            simplex[worst] = reflected;
            values[worst] = f_r;
            continue;
        }
        let (contracted, f_c) = if f_r < values[worst] {
            let x = lerp(&centroid, &reflected, config.contraction);
            let v = eval(&x, &mut evaluations);
            (x, v)
        } else {
            let x = lerp(&centroid, &simplex[worst], config.contraction);
            let v = eval(&x, &mut evaluations);
            (x, v)
        };
        if f_c < values[worst].min(f_r) {
            simplex[worst] = contracted;
            values[worst] = f_c;
            continue;
        }
        for &idx in order.iter().skip(1) {
            let shrunk = lerp(&simplex[best], &simplex[idx], config.shrink);
            values[idx] = eval(&shrunk, &mut evaluations);
            simplex[idx] = shrunk;
        }
    }
    let best = order[0];
    SimplexOutcome {
        best: simplex[best].clone(),
        value: values[best],
        evaluations,
        iterations,
        converged,
        history,
    }
}
