//! Recovering an optimal Tribune policy from an approximate solution
//! `(u, μ)` of the convex program.
//!
//! Tribune first plays greedily against `U = exp(u)`. A set `B′` of states
//! where that policy nearly attains `exp(μ)` while leaking little weight
//! outside `B′` is then shrunk until stable, and the remaining states are
//! steered into `B′`. The result is verified against a Collatz-Wielandt
//! upper bound on the game value.

use crate::error::{Error, Result};
use crate::game::{EntropyGame, TribunePolicy};
use crate::operators::{apply_operator, people_matrix};
use crate::solvers::power::{km_power, DEFAULT_MAX_ITER};
use crate::spectral::{matrix_state_values, perron_vector};

/// Relative gap allowed between the synthesized policy's value and the
/// upper bound on the game value.
pub const VERIFY_TOL: f64 = 1e-8;

#[derive(Clone, Debug)]
pub struct SynthesisOutcome {
    pub policy: TribunePolicy,
    /// Spectral radius of the policy matrix, verified to be the game value.
    pub value: f64,
    /// Sweeps of the `B′` refinement loop.
    pub sweeps: usize,
}

/// Thresholds `(λ_under, ε′)` of the refinement, computed in log form so
/// that large `n` saturates to `(−∞, +∞)` instead of overflowing to NaN.
fn thresholds(n: usize, w: f64, mu: f64, eps: f64) -> (f64, f64) {
    let nf = n as f64;
    let growth = (4.0 * eps).exp_m1();
    let log_pow = 2.0 * (nf - 1.0) * (std::f64::consts::E * nf * w).ln();
    // The value lies in [exp(μ − eps), exp(μ + eps)]; each threshold takes
    // the end that keeps it valid.
    let under_gap = growth * (nf - 1.0) * std::f64::consts::E * log_pow.exp();
    let leak = (mu + eps).exp() * growth * std::f64::consts::E * nf * log_pow.exp();
    ((mu - eps).exp() * (1.0 - under_gap), leak)
}

/// Synthesizes an optimal Tribune policy of an irreducible Despot-free game
/// from `(u, μ)` with `f(u) ≲ μ + u`. Ties go to the first arc; `B′` is
/// swept in ascending state order.
pub fn synthesize_tribune_policy(g: &EntropyGame, u: &[f64], mu: f64, eps: f64) -> Result<SynthesisOutcome> {
    let n = g.n();
    if u.len() != n {
        return Err(Error::Dimension { expected: n, got: u.len() });
    }
    let sigma = g.sigma().ok_or_else(|| Error::NotDespotFree(g.classify().significant.len()))?;
    let top = u.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let big_u: Vec<f64> = u.iter().map(|v| (v - top).exp()).collect();
    let (lambda_under, leak) = thresholds(n, g.max_weight().max(1.0), mu, eps);

    // Greedy policy: F(U) = M^τ U, first maximizing arc.
    let mut tau = TribunePolicy::first_actions(g);
    for t in 0..g.num_tribune() {
        let mut best = (f64::NEG_INFINITY, usize::MAX);
        for a in g.tribune_actions(t) {
            let v = g.people_dot(a.to, &big_u);
            if v > best.0 {
                best = (v, a.to);
            }
        }
        tau.set(t, best.1);
    }

    let mut in_b: Vec<bool> = (0..n).map(|d| g.people_dot(tau.get(sigma[d]), &big_u) >= lambda_under * big_u[d]).collect();
    let outside = |p: usize, in_b: &[bool]| -> f64 {
        g.people_row(p).iter().filter(|&&(e, _)| !in_b[e]).map(|&(e, w)| w * big_u[e]).sum()
    };
    // A People node is admissible for state d if it keeps both conditions.
    let admissible = |p: usize, d: usize, in_b: &[bool]| {
        g.people_dot(p, &big_u) >= lambda_under * big_u[d] && outside(p, in_b) <= leak * big_u[d]
    };

    let mut sweeps = 0;
    loop {
        sweeps += 1;
        let mut changed = false;
        for d in 0..n {
            if !in_b[d] || outside(tau.get(sigma[d]), &in_b) <= leak * big_u[d] {
                continue;
            }
            // The choice at σ(d) is shared by every state moving to σ(d).
            let t = sigma[d];
            let sharing: Vec<usize> = (0..n).filter(|&e| in_b[e] && sigma[e] == t).collect();
            let choice =
                g.tribune_actions(t).iter().find(|a| sharing.iter().all(|&e| admissible(a.to, e, &in_b)));
            match choice {
                Some(a) => tau.set(t, a.to),
                None => {
                    in_b[d] = false;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    if !in_b.iter().any(|&b| b) {
        return Err(Error::SynthesisFailed { rho: 0.0, expected: mu.exp() });
    }

    // Steer the other states into B′, only at Tribune nodes no state of B′
    // depends on.
    let mut fixed = vec![false; g.num_tribune()];
    for d in 0..n {
        if in_b[d] {
            fixed[sigma[d]] = true;
        }
    }
    let mut reached = in_b.clone();
    loop {
        let mut progress = false;
        for d in 0..n {
            if reached[d] {
                continue;
            }
            let t = sigma[d];
            let hits = |p: usize| g.people_row(p).iter().any(|&(e, _)| reached[e]);
            if fixed[t] {
                if hits(tau.get(t)) {
                    reached[d] = true;
                    progress = true;
                }
            } else if let Some(a) = g.tribune_actions(t).iter().find(|a| hits(a.to)) {
                tau.set(t, a.to);
                fixed[t] = true;
                reached[d] = true;
                progress = true;
            }
        }
        if !progress {
            break;
        }
    }

    let value = verify(g, &sigma, &tau)?;
    Ok(SynthesisOutcome { policy: tau, value, sweeps })
}

/// Checks that every state of `M^τ` has value within [`VERIFY_TOL`] of a
/// Collatz-Wielandt upper bound on the game value; returns `ρ(M^τ)`.
fn verify(g: &EntropyGame, sigma: &[usize], tau: &TribunePolicy) -> Result<f64> {
    let rows: Vec<usize> = sigma.iter().map(|&t| tau.get(t)).collect();
    let m = people_matrix(g, &rows);
    let values = matrix_state_values(&m)?;
    let lowest = values.iter().cloned().fold(f64::INFINITY, f64::min);
    let rho = values.iter().cloned().fold(0.0, f64::max);
    // A positive X gives λ* ≤ max_d F_d(X) / X_d.
    let x = match perron_vector(&m, None) {
        Ok(pv) => pv.vector,
        Err(Error::Reducible { .. }) => {
            km_power(g, 1e-13, DEFAULT_MAX_ITER)?.eigenvector.expect("power iteration returns a vector")
        }
        Err(e) => return Err(e),
    };
    let fx = apply_operator(g, &x)?;
    let upper = fx.iter().zip(&x).map(|(f, v)| f / v).fold(0.0, f64::max);
    if lowest < upper * (1.0 - VERIFY_TOL) {
        return Err(Error::SynthesisFailed { rho: lowest, expected: upper });
    }
    Ok(rho)
}
