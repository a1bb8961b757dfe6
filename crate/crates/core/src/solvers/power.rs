//! Projective Krasnoselskii-Mann iteration for the eigenproblem `F(X) = λX`.
//!
//! The iteration runs in log coordinates: with `x = log X` and
//! `f = log ∘ F ∘ exp`, one step is `x ← (x + f(x) − mean f(x)) / 2`, which
//! keeps `Σ x_d = 0`, i.e. `Π X_d = 1`.

use std::time::Instant;

use crate::error::Result;
use crate::game::EntropyGame;
use crate::operators::apply_log_operator;

use super::policy_iteration::eigen_residual;
use super::report::{Algorithm, SolveReport};

pub const DEFAULT_MAX_ITER: usize = 1_000_000;

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

/// Oscillation `max − min`; Hilbert's projective metric in log coordinates.
fn oscillation(v: impl Iterator<Item = f64>) -> f64 {
    let (lo, hi) = v.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), x| (lo.min(x), hi.max(x)));
    hi - lo
}

/// Runs until two successive iterates are within `eps` in Hilbert's metric.
///
/// Stops with `converged = false` after `max_iter` steps, or earlier when the
/// iterate drifts towards the boundary of the cone (no positive eigenvector).
pub fn km_power(g: &EntropyGame, eps: f64, max_iter: usize) -> Result<SolveReport> {
    let start = Instant::now();
    let n = g.n();
    // A positive eigenvector of an irreducible game satisfies
    // max X / min X <= (nW)^(n-1); allow generous room beyond that.
    let drift_limit = 4.0 * (n as f64) * ((n as f64) * g.max_weight().max(1.0)).ln().max(1.0) + 50.0;

    let fx = apply_log_operator(g, &vec![0.0; n])?;
    let m = mean(&fx);
    let mut x: Vec<f64> = fx.iter().map(|v| v - m).collect();
    let mut iterations = 0;
    let mut converged = false;
    loop {
        let fx = apply_log_operator(g, &x)?;
        let m = mean(&fx);
        let next: Vec<f64> = x.iter().zip(&fx).map(|(a, b)| 0.5 * (a + b - m)).collect();
        iterations += 1;
        let dist = oscillation(next.iter().zip(&x).map(|(a, b)| a - b));
        if dist <= eps {
            converged = true;
            break;
        }
        x = next;
        if iterations >= max_iter || !x.iter().all(|v| v.is_finite()) || oscillation(x.iter().cloned()) > drift_limit {
            break;
        }
    }

    let big_x: Vec<f64> = x.iter().map(|v| v.exp()).collect();
    let lambda = mean(&apply_log_operator(g, &x)?).exp();
    let mut r = SolveReport::new(Algorithm::KmPower, vec![lambda; n]);
    r.residual = eigen_residual(g, lambda, &big_x);
    r.eigenvector = Some(big_x);
    r.iterations = iterations;
    r.lambda_trace = vec![lambda];
    r.converged = converged;
    r.wall_time = start.elapsed().as_secs_f64();
    Ok(r)
}
