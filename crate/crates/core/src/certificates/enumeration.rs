//! Two-player games with few significant Despot states: enumerate Despot's
//! choices at those states and solve each resulting Despot-free game.

use std::time::Instant;

use crate::error::{Error, Result};
use crate::game::{DespotPolicy, EntropyGame};
use crate::solvers::decompose::{solve_with, InnerSolver};
use crate::solvers::report::{Algorithm, SolveReport};

/// Default cap on the number of significant Despot states.
pub const DEFAULT_SIGNIFICANT_CAP: usize = 8;

/// Per-state minimum over Despot policies of the Despot-free values.
///
/// Only states with at least two actions are enumerated. The returned Despot
/// policy attains the minimum at every state (up to the tolerance
/// `max(1e-9, eps)`); the Tribune policy is the best reply to it.
pub fn solve_by_despot_enumeration(g: &EntropyGame, inner: InnerSolver) -> Result<SolveReport> {
    solve_by_despot_enumeration_with_cap(g, inner, DEFAULT_SIGNIFICANT_CAP)
}

pub fn solve_by_despot_enumeration_with_cap(g: &EntropyGame, inner: InnerSolver, cap: usize) -> Result<SolveReport> {
    let start = Instant::now();
    let significant = g.classify().significant;
    if significant.len() > cap {
        return Err(Error::CapExceeded { count: significant.len() as f64, cap: cap as f64 });
    }
    let tol = match inner {
        InnerSolver::Ellipsoid { eps } => eps.max(1e-9),
        _ => 1e-9,
    };
    let n = g.n();
    let base: Vec<usize> = (0..n).map(|d| g.despot_actions(d)[0].to).collect();
    let radix: Vec<usize> = significant.iter().map(|&d| g.despot_actions(d).len()).collect();
    let mut digits = vec![0; significant.len()];

    let mut candidates: Vec<(DespotPolicy, SolveReport)> = Vec::new();
    let mut inner_iterations = 0;
    let mut converged = true;
    loop {
        let mut choice = base.clone();
        for (i, &d) in significant.iter().enumerate() {
            choice[d] = g.despot_actions(d)[digits[i]].to;
        }
        let delta = DespotPolicy::from_raw(choice);
        let rep = solve_with(&g.restrict_despot(&delta), inner, None)?;
        inner_iterations += rep.iterations;
        converged &= rep.converged;
        candidates.push((delta, rep));

        // Next assignment in mixed radix.
        let mut i = 0;
        while i < digits.len() {
            digits[i] += 1;
            if digits[i] < radix[i] {
                break;
            }
            digits[i] = 0;
            i += 1;
        }
        if i == digits.len() {
            break;
        }
    }

    let values: Vec<f64> =
        (0..n).map(|d| candidates.iter().map(|(_, r)| r.values[d]).fold(f64::INFINITY, f64::min)).collect();
    let deviation = |r: &SolveReport| {
        r.values.iter().zip(&values).map(|(a, b)| (a - b) / b.max(1.0)).fold(0.0, f64::max)
    };
    let pick = candidates
        .iter()
        .position(|(_, r)| deviation(r) <= tol)
        .unwrap_or_else(|| {
            (0..candidates.len())
                .min_by(|&a, &b| deviation(&candidates[a].1).total_cmp(&deviation(&candidates[b].1)))
                .expect("at least one candidate")
        });
    let count = candidates.len();
    let (delta, best) = candidates.swap_remove(pick);

    let mut r = SolveReport::new(Algorithm::DespotEnumeration, values);
    r.despot_policy = Some(delta);
    r.tribune_policy = best.tribune_policy;
    r.iterations = count;
    r.inner_iterations = inner_iterations;
    r.converged = converged;
    r.wall_time = start.elapsed().as_secs_f64();
    Ok(r)
}
