//! Ellipsoid method on the convex program `min μ over K`, and the solver
//! built on it: ellipsoid, then policy synthesis from the approximate
//! optimum.

use std::time::Instant;

use crate::error::{Error, Result};
use crate::game::{DespotPolicy, EntropyGame};
use crate::operators::people_matrix;
use crate::solvers::policy_iteration::eigen_residual;
use crate::solvers::power::{km_power, DEFAULT_MAX_ITER};
use crate::solvers::report::{Algorithm, SolveReport};
use crate::spectral::perron_vector;

use super::separation::{ConvexPoint, ConvexProgram, SeparationResult};
use super::synthesis::{synthesize_tribune_policy, SynthesisOutcome};

/// Result of [`ellipsoid_solve`].
#[derive(Clone, Debug)]
pub struct EllipsoidResult {
    /// Best near-feasible center met.
    pub point: ConvexPoint,
    /// `μ` of `point`; `exp(mu_upper)` bounds the value from above up to
    /// the oracle precision.
    pub mu_upper: f64,
    /// Lowest `μ` of the final ellipsoid, a lower bound on `log λ*`.
    pub mu_lower: f64,
    pub iterations: usize,
    /// Whether `mu_upper − mu_lower ≤ eps` was reached within the budget.
    pub converged: bool,
}

/// Iteration budget `2(n+1)(n+2)·ln(R / (r·eps))`.
pub fn iteration_budget(k: &ConvexProgram, eps: f64) -> usize {
    let q = k.dim() as f64;
    let b = 2.0 * q * (q + 1.0) * (k.outer_radius / (k.inner_radius * eps)).ln();
    b.ceil().max(1.0) as usize
}

/// Minimizes `μ` over `K` with the central-cut ellipsoid method, using
/// deep cuts where the oracle provides them.
pub fn ellipsoid_solve(g: &EntropyGame, eps: f64) -> Result<EllipsoidResult> {
    assert!(eps > 0.0, "eps must be positive");
    let k = ConvexProgram::new(g)?;
    let budget = iteration_budget(&k, eps);
    let q = k.dim();
    let qf = q as f64;
    let mut y = k.center().to_vec();
    let mut p = vec![vec![0.0; q]; q];
    for (i, row) in p.iter_mut().enumerate() {
        row[i] = k.outer_radius * k.outer_radius;
    }
    // Slight inflation keeps the shape matrix safely positive definite.
    let scale = qf * qf / (qf * qf - 1.0).max(1.0) * (1.0 + 1.0 / (4.0 * qf * qf));
    let mu = q - 1;

    let mut best: Option<(f64, Vec<f64>)> = None;
    let mut iterations = 0;
    let mut converged = false;
    let mut mu_lower = f64::NEG_INFINITY;
    while iterations < budget {
        let point = ConvexPoint::from_slice(&y);
        let (c, offset) = match k.separate(g, &point, eps) {
            SeparationResult::Halfspace { c, offset } => (c, offset),
            SeparationResult::NearFeasible => {
                if best.as_ref().is_none_or(|(m, _)| y[mu] < *m) {
                    best = Some((y[mu], y.clone()));
                }
                // Objective cut: keep μ ≤ y_μ.
                let mut c = vec![0.0; q];
                c[mu] = 1.0;
                (c, y[mu])
            }
        };
        iterations += 1;
        let pc: Vec<f64> = p.iter().map(|row| row.iter().zip(&c).map(|(a, b)| a * b).sum()).collect();
        let cpc: f64 = c.iter().zip(&pc).map(|(a, b)| a * b).sum();
        if !(cpc > 0.0) || !cpc.is_finite() {
            break;
        }
        let root = cpc.sqrt();
        let cy: f64 = c.iter().zip(&y).map(|(a, b)| a * b).sum();
        // Depth of the cut in ellipsoid units, kept below 1/2 for stability.
        let alpha = ((cy - offset) / root).clamp(0.0, 0.5);
        let b: Vec<f64> = pc.iter().map(|v| v / root).collect();
        let step = (1.0 + qf * alpha) / (qf + 1.0);
        for i in 0..q {
            y[i] -= step * b[i];
        }
        let shrink = 2.0 * (1.0 + qf * alpha) / ((qf + 1.0) * (1.0 + alpha));
        let factor = scale * (1.0 - alpha * alpha);
        for i in 0..q {
            for j in 0..=i {
                let v = factor * (p[i][j] - shrink * b[i] * b[j]);
                p[i][j] = v;
                p[j][i] = v;
            }
        }

        mu_lower = y[mu] - p[mu][mu].max(0.0).sqrt();
        if let Some((m, _)) = &best {
            if m - mu_lower <= eps {
                converged = true;
                break;
            }
        }
    }

    let (mu_upper, point) = match best {
        Some((m, v)) => (m, ConvexPoint::from_slice(&v)),
        None => {
            // No near-feasible center met; report the current center.
            let pt = ConvexPoint::from_slice(&y);
            (pt.mu, pt)
        }
    };
    Ok(EllipsoidResult { point, mu_upper, mu_lower, iterations, converged })
}

const MAX_RETRIES: usize = 3;

/// Solves an irreducible Despot-free game through the convex program: the
/// ellipsoid gives an approximate optimum `(u, μ)` from which an optimal
/// Tribune policy is synthesized and verified. On verification failure the
/// ellipsoid is rerun with `eps / 10`, up to three times.
pub fn solve_ellipsoid(g: &EntropyGame, eps: f64) -> Result<SolveReport> {
    let start = Instant::now();
    let sigma = g.sigma().ok_or_else(|| Error::NotDespotFree(g.classify().significant.len()))?;
    let mut eps = eps;
    let mut total_iterations = 0;
    let mut attempt = 0;
    loop {
        let e = ellipsoid_solve(g, eps)?;
        total_iterations += e.iterations;
        match synthesize_tribune_policy(g, &e.point.u, e.mu_upper, eps) {
            Ok(SynthesisOutcome { policy, value, sweeps }) => {
                let rows: Vec<usize> = sigma.iter().map(|&t| policy.get(t)).collect();
                let m = people_matrix(g, &rows);
                // Eigenvector of the game: the policy's Perron vector when it
                // is positive, else the power iteration's.
                let x = match perron_vector(&m, None) {
                    Ok(pv) => pv.vector,
                    Err(Error::Reducible { .. }) => km_power(g, 1e-13, DEFAULT_MAX_ITER)?
                        .eigenvector
                        .expect("power iteration returns a vector"),
                    Err(err) => return Err(err),
                };
                let top = x.iter().cloned().fold(0.0, f64::max);
                let x: Vec<f64> = x.into_iter().map(|v| v / top).collect();
                let mut r = SolveReport::new(Algorithm::Ellipsoid, vec![value; g.n()]);
                r.residual = eigen_residual(g, value, &x);
                r.eigenvector = Some(x);
                r.despot_policy = Some(DespotPolicy::from_raw(sigma));
                r.tribune_policy = Some(policy);
                r.lambda_trace = vec![e.mu_upper.exp(), value];
                r.iterations = total_iterations;
                r.inner_iterations = sweeps;
                r.converged = e.converged;
                r.wall_time = start.elapsed().as_secs_f64();
                return Ok(r);
            }
            Err(Error::SynthesisFailed { .. }) if attempt < MAX_RETRIES => {
                attempt += 1;
                eps /= 10.0;
            }
            Err(err) => return Err(err),
        }
    }
}
