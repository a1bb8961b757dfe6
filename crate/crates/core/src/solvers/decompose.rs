//! Reducible Despot-free games: solve every strongly connected component of
//! the projected graph on its own, then give each state the largest
//! component value it can reach.

use std::collections::VecDeque;
use std::time::Instant;

use crate::certificates::ellipsoid::solve_ellipsoid;
use crate::error::{Error, Result};
use crate::game::{DespotPolicy, EntropyGame, TribunePolicy};
use crate::graph::scc_condense;
use crate::operators::best_tribune_response;

use super::policy_iteration::{pi_despot_free, spectral_simplex, Mode, SimplexRule};
use super::power::{km_power, DEFAULT_MAX_ITER};
use super::report::{Algorithm, SolveReport};

/// Solver applied to each irreducible component.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum InnerSolver {
    PolicyIteration,
    SimplexFirst,
    SimplexDantzig,
    Ellipsoid { eps: f64 },
}

impl InnerSolver {
    pub fn algorithm(self) -> Algorithm {
        match self {
            InnerSolver::PolicyIteration => Algorithm::PolicyIteration,
            InnerSolver::SimplexFirst => Algorithm::SimplexFirst,
            InnerSolver::SimplexDantzig => Algorithm::SimplexDantzig,
            InnerSolver::Ellipsoid { .. } => Algorithm::Ellipsoid,
        }
    }
}

/// Relative tolerance for "two component values are equal".
const VALUE_TOL: f64 = 1e-9;

/// Solves an irreducible Despot-free game. When policy iteration meets a
/// reducible policy matrix, the power iteration's eigenvector and Tribune's
/// best reply to it are returned instead.
pub fn solve_irreducible(g: &EntropyGame, inner: InnerSolver, seed: Option<u64>) -> Result<SolveReport> {
    let r = match inner {
        InnerSolver::PolicyIteration => pi_despot_free(g, Mode::Max, seed),
        InnerSolver::SimplexFirst => spectral_simplex(g, SimplexRule::First, seed),
        InnerSolver::SimplexDantzig => spectral_simplex(g, SimplexRule::Dantzig, seed),
        InnerSolver::Ellipsoid { eps } => solve_ellipsoid(g, eps),
    };
    match r {
        Err(Error::Reducible { .. }) => {
            let mut km = km_power(g, 1e-13, DEFAULT_MAX_ITER)?;
            let x = km.eigenvector.as_ref().expect("power iteration returns a vector");
            km.tribune_policy = Some(best_tribune_response(g, x));
            km.despot_policy = Some(DespotPolicy::first_actions(g));
            km.algorithm = inner.algorithm();
            Ok(km)
        }
        other => other,
    }
}

/// Solves a Despot-free game with policy iteration on every component.
pub fn solve(g: &EntropyGame) -> Result<SolveReport> {
    solve_with(g, InnerSolver::PolicyIteration, None)
}

pub fn solve_with(g: &EntropyGame, inner: InnerSolver, seed: Option<u64>) -> Result<SolveReport> {
    let start = Instant::now();
    let sigma = g.sigma().ok_or_else(|| Error::NotDespotFree(g.classify().significant.len()))?;
    let h = g.projected_graph();
    let cond = scc_condense(&h);
    let k = cond.len();

    let mut roots = vec![0.0; k];
    let mut local: Vec<Option<(Vec<usize>, Vec<usize>)>> = vec![None; k];
    let mut single: Option<SolveReport> = None;
    let (mut iterations, mut inner_iterations, mut converged) = (0, 0, true);
    for c in 0..k {
        if cond.is_trivial(&h, c) {
            continue;
        }
        let (sub_game, tribune_map, people_map) = if k == 1 {
            (g.clone(), (0..g.num_tribune()).collect(), (0..g.num_people()).collect())
        } else {
            let s = g.subgame(&cond.components[c])?;
            (s.game, s.tribune_map, s.people_map)
        };
        let rep = solve_irreducible(&sub_game, inner, seed)?;
        roots[c] = rep.values[0];
        iterations += rep.iterations;
        inner_iterations += rep.inner_iterations;
        converged &= rep.converged;
        let tau = rep.tribune_policy.as_ref().expect("one-player solvers return a policy");
        // Map (full Tribune node, full People node) for this component.
        let mut choice = vec![usize::MAX; g.num_tribune()];
        for (i, &t) in tribune_map.iter().enumerate() {
            choice[t] = people_map[tau.get(i)];
        }
        local[c] = Some((choice, tribune_map));
        if k == 1 {
            single = Some(rep);
        }
    }

    let mut best = vec![0.0f64; k];
    for &c in &cond.sinks_first {
        best[c] = cond.dag.successors(c).iter().fold(roots[c], |m, &s| m.max(best[s]));
    }
    let values: Vec<f64> = (0..g.n()).map(|d| best[cond.component_of[d]]).collect();
    let same = |a: f64, b: f64| (a - b).abs() <= VALUE_TOL * a.abs().max(b.abs()).max(1.0);

    // States whose own component attains their value.
    let attaining: Vec<bool> = (0..g.n())
        .map(|d| {
            let c = cond.component_of[d];
            !cond.is_trivial(&h, c) && same(roots[c], best[c])
        })
        .collect();
    let mut tau = TribunePolicy::first_actions(g);
    let mut fixed = vec![false; g.num_tribune()];
    for d in 0..g.n() {
        if attaining[d] {
            let (choice, _) = local[cond.component_of[d]].as_ref().expect("solved component");
            tau.set(sigma[d], choice[sigma[d]]);
            fixed[sigma[d]] = true;
        }
    }

    // Other states steer towards an attaining state of the same value,
    // following shortest paths in the projected graph.
    let rev = h.reversed();
    let mut dist = vec![usize::MAX; g.n()];
    let mut queue: VecDeque<usize> = (0..g.n()).filter(|&d| attaining[d]).collect();
    for &d in &queue {
        dist[d] = 0;
    }
    while let Some(d) = queue.pop_front() {
        for &e in rev.successors(d) {
            if dist[e] == usize::MAX && same(values[e], values[d]) {
                dist[e] = dist[d] + 1;
                queue.push_back(e);
            }
        }
    }
    for d in 0..g.n() {
        let t = sigma[d];
        if attaining[d] || fixed[t] {
            continue;
        }
        let step = g.tribune_actions(t).iter().find(|a| {
            g.people_row(a.to)
                .iter()
                .any(|&(e, _)| same(values[e], values[d]) && dist[e] < dist[d])
        });
        let step = step.ok_or_else(|| Error::Certificate(format!("no path to an optimal component from state {d}")))?;
        tau.set(t, step.to);
        fixed[t] = true;
    }

    let mut r = SolveReport::new(inner.algorithm(), values);
    r.despot_policy = Some(DespotPolicy::from_raw(sigma));
    r.tribune_policy = Some(tau);
    r.iterations = iterations;
    r.inner_iterations = inner_iterations;
    r.converged = converged;
    if let Some(s) = single {
        r.eigenvector = s.eigenvector;
        r.lambda_trace = s.lambda_trace;
        r.residual = s.residual;
    }
    r.wall_time = start.elapsed().as_secs_f64();
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{fibonacci_game, GameBuilder, Weight};
    use crate::spectral::state_values;

    const PHI: f64 = 1.618_033_988_749_895;

    #[test]
    fn fibonacci_restricted_to_its_optimal_despot_policy() {
        // d1 -> t1 -> a -> d1 is closed; {d2, d3} grows like the golden mean.
        let g = fibonacci_game();
        let r = g.restrict_despot(&DespotPolicy::new(&g, vec![0, 1, 3]).unwrap());
        let rep = solve(&r).unwrap();
        for (v, e) in rep.values.iter().zip([1.0, PHI, PHI]) {
            assert!((v - e).abs() < 1e-9, "{:?}", rep.values);
        }
        let v = state_values(&r, rep.despot_policy.as_ref().unwrap(), rep.tribune_policy.as_ref().unwrap()).unwrap();
        for (a, b) in v.iter().zip(&rep.values) {
            assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn chain_into_stronger_loop() {
        // d0 loops with weight 2 and can also move to d1, which loops with 3.
        let mut b = GameBuilder::new();
        let d0 = b.despot("d0");
        let d1 = b.despot("d1");
        let t0 = b.tribune("t0");
        let t1 = b.tribune("t1");
        let stay = b.people("stay");
        let go = b.people("go");
        let p1 = b.people("p1");
        b.despot_arc(d0, t0).despot_arc(d1, t1);
        b.tribune_arc(t0, stay).tribune_arc(t0, go).tribune_arc(t1, p1);
        b.people_arc(stay, d0, Weight::Int(2)).people_arc(go, d1, Weight::Int(1));
        b.people_arc(p1, d1, Weight::Int(3));
        let g = b.build().unwrap();
        let rep = solve(&g).unwrap();
        assert_eq!(rep.values, vec![3.0, 3.0]);
        let tau = rep.tribune_policy.unwrap();
        assert_eq!(tau.as_slice(), &[1, 2]);
        let v = state_values(&g, rep.despot_policy.as_ref().unwrap(), &tau).unwrap();
        assert_eq!(v, vec![3.0, 3.0]);
    }

    #[test]
    fn weaker_downstream_loop_is_ignored() {
        let mut b = GameBuilder::new();
        let d0 = b.despot("d0");
        let d1 = b.despot("d1");
        let t0 = b.tribune("t0");
        let t1 = b.tribune("t1");
        let p0 = b.people("p0");
        let p1 = b.people("p1");
        b.despot_arc(d0, t0).despot_arc(d1, t1).tribune_arc(t0, p0).tribune_arc(t1, p1);
        b.people_arc(p0, d0, Weight::Int(4)).people_arc(p0, d1, Weight::Int(1));
        b.people_arc(p1, d1, Weight::Int(2));
        let g = b.build().unwrap();
        let rep = solve(&g).unwrap();
        assert_eq!(rep.values, vec![4.0, 2.0]);
    }

    #[test]
    fn two_player_input_is_rejected() {
        assert!(matches!(solve(&fibonacci_game()), Err(Error::NotDespotFree(2))));
    }
}
