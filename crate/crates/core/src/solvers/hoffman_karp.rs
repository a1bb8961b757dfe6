//! Hoffman-Karp style policy iteration for two-player entropy games: Despot
//! improves its policy against the Perron vector of Tribune's best reply,
//! which is itself computed by one-player policy iteration.

use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::game::{DespotPolicy, EntropyGame, TribunePolicy};
use crate::operators::tribune_values;

use super::policy_iteration::{eigen_residual, policy_iteration, Mode, PiOptions, UpdateRule, IMPROVEMENT_GATE};
use super::report::{Algorithm, SolveReport};

const MAX_OUTER: usize = 100_000;

/// Two-player policy iteration. Every policy pair met along the way must
/// induce an irreducible matrix; a reducible one is reported as an error.
pub fn hoffman_karp(g: &EntropyGame, seed: Option<u64>) -> Result<SolveReport> {
    let start = Instant::now();
    let mut rng = seed.map(ChaCha8Rng::seed_from_u64);
    let (mut delta, mut tau) = match rng.as_mut() {
        Some(r) => (DespotPolicy::random(g, r), TribunePolicy::random(g, r)),
        None => (DespotPolicy::first_actions(g), TribunePolicy::first_actions(g)),
    };
    let mut trace = Vec::new();
    let mut inner = 0;
    let mut converged = false;
    let (lambda, x) = loop {
        let reduced = g.restrict_despot(&delta);
        let opts = PiOptions { start: Some(tau.as_slice().to_vec()), ..PiOptions::new(Mode::Max, UpdateRule::All) };
        let sol = policy_iteration(&reduced, &opts)?;
        inner += sol.evaluations;
        tau = sol.tribune_policy;
        let (lambda, x) = (sol.lambda, sol.eigenvector);
        trace.push(lambda);

        let ft = tribune_values(g, &x);
        let mut next = delta.as_slice().to_vec();
        let mut changed = false;
        for (d, slot) in next.iter_mut().enumerate() {
            let current = ft[*slot];
            let acts = g.despot_actions(d);
            let target = acts.iter().map(|a| ft[a.to]).fold(f64::INFINITY, f64::min);
            if current - target > IMPROVEMENT_GATE * (1.0 + lambda) * x[d] {
                *slot = acts.iter().find(|a| ft[a.to] == target).expect("target is attained").to;
                changed = true;
            }
        }
        if !changed {
            converged = true;
            break (lambda, x);
        }
        delta = DespotPolicy::from_raw(next);
        if trace.len() >= MAX_OUTER {
            break (lambda, x);
        }
    };

    let mut r = SolveReport::new(Algorithm::HoffmanKarp, vec![lambda; g.n()]);
    r.residual = eigen_residual(g, lambda, &x);
    r.eigenvector = Some(x);
    r.despot_policy = Some(delta);
    r.tribune_policy = Some(tau);
    r.iterations = trace.len();
    r.inner_iterations = inner;
    r.lambda_trace = trace;
    r.converged = converged;
    r.wall_time = start.elapsed().as_secs_f64();
    Ok(r)
}
