//! Multiplicative policy iteration for one-player entropy games, together
//! with its single-switch variants (spectral simplex, first-improvable or
//! steepest rule).
//!
//! Max mode solves Despot-free games: the decisions are Tribune choices at
//! the Tribune nodes Despot moves to. Min mode solves Tribune-free games: the
//! decisions are Despot choices.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::game::{DespotPolicy, EntropyGame, TribunePolicy};
use crate::matrix::sup_norm;
use crate::operators::{apply_operator, people_matrix};
use crate::spectral::perron_vector;

use super::report::{Algorithm, SolveReport};

/// An action change must improve `F_t(X) − λX_t` by more than this,
/// relative to `(1 + λ) X_t`.
pub const IMPROVEMENT_GATE: f64 = 1e-9;

const MAX_EVALUATIONS: usize = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Tribune maximizes (Despot-free games).
    Max,
    /// Despot minimizes (Tribune-free games).
    Min,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UpdateRule {
    /// Switch every improvable decision (policy iteration).
    All,
    /// Switch the first improvable decision in index order.
    First,
    /// Switch the decision with the largest improvement.
    Dantzig,
}

/// Options for [`policy_iteration`].
#[derive(Clone, Debug)]
pub struct PiOptions {
    pub mode: Mode,
    pub rule: UpdateRule,
    /// Random initial policy from this seed; first actions otherwise.
    pub seed: Option<u64>,
    /// Initial Tribune (max mode) or Despot (min mode) choice per node,
    /// overriding `seed` where it is a legal choice.
    pub start: Option<Vec<usize>>,
}

impl PiOptions {
    pub fn new(mode: Mode, rule: UpdateRule) -> Self {
        Self { mode, rule, seed: None, start: None }
    }
}

/// Result of a one-player solve.
#[derive(Clone, Debug)]
pub struct OnePlayerSolution {
    pub lambda: f64,
    /// Perron vector of the final policy matrix, largest entry 1.
    pub eigenvector: Vec<f64>,
    pub despot_policy: DespotPolicy,
    pub tribune_policy: TribunePolicy,
    pub trace: Vec<f64>,
    pub evaluations: usize,
    pub perron_iterations: usize,
    pub converged: bool,
}

struct Decisions {
    /// Decision point of every state.
    point_of: Vec<usize>,
    /// One state attached to each point.
    state_of: Vec<usize>,
    /// Node index of each point (Tribune node or Despot state).
    node_of: Vec<usize>,
    /// Options per point: (choice label, People row it induces).
    options: Vec<Vec<(usize, usize)>>,
}

fn decisions(g: &EntropyGame, mode: Mode) -> Result<Decisions> {
    match mode {
        Mode::Max => {
            let sigma = g.sigma().ok_or_else(|| Error::NotDespotFree(g.classify().significant.len()))?;
            let mut point_at = vec![usize::MAX; g.num_tribune()];
            let mut used: Vec<usize> = sigma.clone();
            used.sort_unstable();
            used.dedup();
            for (q, &t) in used.iter().enumerate() {
                point_at[t] = q;
            }
            let mut state_of = vec![0; used.len()];
            for (d, &t) in sigma.iter().enumerate().rev() {
                state_of[point_at[t]] = d;
            }
            Ok(Decisions {
                point_of: sigma.iter().map(|&t| point_at[t]).collect(),
                state_of,
                options: used
                    .iter()
                    .map(|&t| g.tribune_actions(t).iter().map(|a| (a.to, a.to)).collect())
                    .collect(),
                node_of: used,
            })
        }
        Mode::Min => {
            if !g.classify().tribune_free {
                return Err(Error::NotTribuneFree);
            }
            Ok(Decisions {
                point_of: (0..g.n()).collect(),
                state_of: (0..g.n()).collect(),
                node_of: (0..g.n()).collect(),
                options: (0..g.n())
                    .map(|d| {
                        g.despot_actions(d)
                            .iter()
                            .map(|a| (a.to, g.tribune_actions(a.to)[0].to))
                            .collect()
                    })
                    .collect(),
            })
        }
    }
}

/// Generic multiplicative policy iteration; see [`PiOptions`].
pub fn policy_iteration(g: &EntropyGame, opts: &PiOptions) -> Result<OnePlayerSolution> {
    let dec = decisions(g, opts.mode)?;
    let points = dec.options.len();
    let mut rng = opts.seed.map(ChaCha8Rng::seed_from_u64);
    // Option index chosen at every point.
    let mut choice: Vec<usize> = (0..points)
        .map(|q| {
            let opts_q = &dec.options[q];
            if let Some(start) = &opts.start {
                if let Some(k) = opts_q.iter().position(|o| Some(&o.0) == start.get(dec.node_of[q])) {
                    return k;
                }
            }
            match rng.as_mut() {
                Some(r) => r.gen_range(0..opts_q.len()),
                None => 0,
            }
        })
        .collect();

    let n = g.n();
    let mut warm: Option<Vec<f64>> = None;
    let mut trace = Vec::new();
    let mut perron_iterations = 0;
    let mut converged = false;
    let (lambda, x) = loop {
        let rows: Vec<usize> = (0..n).map(|d| dec.options[dec.point_of[d]][choice[dec.point_of[d]]].1).collect();
        let pv = perron_vector(&people_matrix(g, &rows), warm.as_deref())?;
        perron_iterations += pv.iterations;
        let (lambda, x) = (pv.rho, pv.vector);
        trace.push(lambda);

        let mut best_gain = 0.0;
        let mut switches: Vec<(usize, usize, f64)> = Vec::new();
        for q in 0..points {
            let xq = x[dec.state_of[q]];
            let current = g.people_dot(dec.options[q][choice[q]].1, &x);
            let values: Vec<f64> = dec.options[q].iter().map(|&(_, p)| g.people_dot(p, &x)).collect();
            let target = match opts.mode {
                Mode::Max => values.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
                Mode::Min => values.iter().cloned().fold(f64::INFINITY, f64::min),
            };
            let gain = (target - current).abs();
            if gain > IMPROVEMENT_GATE * (1.0 + lambda) * xq {
                let k = values.iter().position(|&v| v == target).expect("target is attained");
                switches.push((q, k, gain));
                if gain > best_gain {
                    best_gain = gain;
                }
            }
        }
        if switches.is_empty() {
            converged = true;
            break (lambda, x);
        }
        match opts.rule {
            UpdateRule::All => switches.iter().for_each(|&(q, k, _)| choice[q] = k),
            UpdateRule::First => choice[switches[0].0] = switches[0].1,
            UpdateRule::Dantzig => {
                let &(q, k, _) = switches.iter().find(|s| s.2 == best_gain).expect("max exists");
                choice[q] = k;
            }
        }
        if trace.len() >= MAX_EVALUATIONS {
            break (lambda, x);
        }
        warm = Some(x);
    };

    let (despot_policy, tribune_policy) = match opts.mode {
        Mode::Max => {
            let mut tau = TribunePolicy::first_actions(g);
            if let Some(start) = &opts.start {
                for (t, &p) in start.iter().enumerate().take(g.num_tribune()) {
                    if g.tribune_actions(t).iter().any(|a| a.to == p) {
                        tau.set(t, p);
                    }
                }
            }
            for q in 0..points {
                tau.set(dec.node_of[q], dec.options[q][choice[q]].0);
            }
            (DespotPolicy::first_actions(g), tau)
        }
        Mode::Min => (
            DespotPolicy::from_raw((0..n).map(|d| dec.options[d][choice[d]].0).collect()),
            TribunePolicy::first_actions(g),
        ),
    };
    Ok(OnePlayerSolution {
        lambda,
        eigenvector: x,
        despot_policy,
        tribune_policy,
        evaluations: trace.len(),
        trace,
        perron_iterations,
        converged,
    })
}

pub(crate) fn eigen_residual(g: &EntropyGame, lambda: f64, x: &[f64]) -> f64 {
    let fx = apply_operator(g, x).expect("length matches");
    let r = fx.iter().zip(x).map(|(a, b)| (a - lambda * b).abs()).fold(0.0, f64::max);
    r / sup_norm(x)
}

fn report(g: &EntropyGame, algorithm: Algorithm, sol: OnePlayerSolution, start: Instant) -> SolveReport {
    let mut r = SolveReport::new(algorithm, vec![sol.lambda; g.n()]);
    r.residual = eigen_residual(g, sol.lambda, &sol.eigenvector);
    r.eigenvector = Some(sol.eigenvector);
    r.despot_policy = Some(sol.despot_policy);
    r.tribune_policy = Some(sol.tribune_policy);
    r.iterations = sol.evaluations;
    r.inner_iterations = sol.perron_iterations;
    r.lambda_trace = sol.trace;
    r.converged = sol.converged;
    r.wall_time = start.elapsed().as_secs_f64();
    r
}

/// Policy iteration on a Despot-free (max mode) or Tribune-free (min mode)
/// game whose policy matrices are irreducible.
pub fn pi_despot_free(g: &EntropyGame, mode: Mode, seed: Option<u64>) -> Result<SolveReport> {
    let start = Instant::now();
    let opts = PiOptions { seed, ..PiOptions::new(mode, UpdateRule::All) };
    Ok(report(g, Algorithm::PolicyIteration, policy_iteration(g, &opts)?, start))
}

/// Pivot rule of the spectral simplex method.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SimplexRule {
    First,
    Dantzig,
}

/// Spectral simplex on a Despot-free game: one decision changes per
/// iteration.
pub fn spectral_simplex(g: &EntropyGame, rule: SimplexRule, seed: Option<u64>) -> Result<SolveReport> {
    let start = Instant::now();
    let (rule, tag) = match rule {
        SimplexRule::First => (UpdateRule::First, Algorithm::SimplexFirst),
        SimplexRule::Dantzig => (UpdateRule::Dantzig, Algorithm::SimplexDantzig),
    };
    let opts = PiOptions { seed, ..PiOptions::new(Mode::Max, rule) };
    Ok(report(g, tag, policy_iteration(g, &opts)?, start))
}
