//! Algorithm selection by tag, including the automatic choice.

use std::fmt;
use std::str::FromStr;

use crate::certificates::enumeration::{solve_by_despot_enumeration, DEFAULT_SIGNIFICANT_CAP};
use crate::error::{Error, Result};
use crate::game::EntropyGame;

use super::decompose::{solve_with, InnerSolver};
use super::hoffman_karp::hoffman_karp;
use super::oracle::{brute_force, DEFAULT_CAP};
use super::policy_iteration::{pi_despot_free, Mode};
use super::power::{km_power, DEFAULT_MAX_ITER};
use super::report::{Algorithm, SolveReport};

/// Default accuracy of the ellipsoid solver.
pub const DEFAULT_ELLIPSOID_EPS: f64 = 1e-4;
/// Default Hilbert-metric stopping distance of the power iteration.
pub const DEFAULT_POWER_EPS: f64 = 1e-10;

/// A fixed algorithm or the automatic choice.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AlgoChoice {
    Auto,
    Fixed(Algorithm),
}

impl FromStr for AlgoChoice {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        if s == "auto" {
            Ok(AlgoChoice::Auto)
        } else {
            s.parse().map(AlgoChoice::Fixed)
        }
    }
}

impl fmt::Display for AlgoChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlgoChoice::Auto => f.write_str("auto"),
            AlgoChoice::Fixed(a) => a.fmt(f),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct SolveOptions {
    /// Accuracy for the ellipsoid and power iteration; per-algorithm
    /// default when absent.
    pub eps: Option<f64>,
    /// Seed for a random initial policy.
    pub seed: Option<u64>,
}

/// Runs the chosen algorithm on `g`.
///
/// One-player algorithms run on every component of a Despot-free game
/// (`pi` also accepts Tribune-free games). `auto` uses component-wise policy
/// iteration on Despot-free games, Hoffman-Karp on two-player games, and
/// falls back to Despot enumeration or the exhaustive oracle when a
/// reducible policy pair stops Hoffman-Karp.
pub fn solve_game(g: &EntropyGame, choice: AlgoChoice, opts: &SolveOptions) -> Result<SolveReport> {
    let despot_free = g.sigma().is_some();
    let ellipsoid = InnerSolver::Ellipsoid { eps: opts.eps.unwrap_or(DEFAULT_ELLIPSOID_EPS) };
    let algo = match choice {
        AlgoChoice::Fixed(a) => a,
        AlgoChoice::Auto if despot_free => Algorithm::PolicyIteration,
        AlgoChoice::Auto => {
            return match hoffman_karp(g, opts.seed) {
                Err(Error::Reducible { .. }) => {
                    if g.classify().significant.len() <= DEFAULT_SIGNIFICANT_CAP {
                        solve_by_despot_enumeration(g, InnerSolver::PolicyIteration)
                    } else if g.despot_policy_count() * g.tribune_policy_count() <= DEFAULT_CAP {
                        brute_force(g)
                    } else {
                        Err(Error::Unsupported(
                            "reducible two-player game too large for enumeration and the exhaustive oracle".into(),
                        ))
                    }
                }
                other => other,
            };
        }
    };
    let one_player = |inner: InnerSolver| {
        if despot_free {
            solve_with(g, inner, opts.seed)
        } else {
            Err(Error::NotDespotFree(g.classify().significant.len()))
        }
    };
    match algo {
        Algorithm::PolicyIteration if !despot_free && g.classify().tribune_free => {
            pi_despot_free(g, Mode::Min, opts.seed)
        }
        Algorithm::PolicyIteration => one_player(InnerSolver::PolicyIteration),
        Algorithm::SimplexFirst => one_player(InnerSolver::SimplexFirst),
        Algorithm::SimplexDantzig => one_player(InnerSolver::SimplexDantzig),
        Algorithm::Ellipsoid => one_player(ellipsoid),
        Algorithm::HoffmanKarp => hoffman_karp(g, opts.seed),
        Algorithm::KmPower => km_power(g, opts.eps.unwrap_or(DEFAULT_POWER_EPS), DEFAULT_MAX_ITER),
        Algorithm::BruteForce => brute_force(g),
        Algorithm::DespotEnumeration => solve_by_despot_enumeration(
            g,
            if opts.eps.is_some() { ellipsoid } else { InnerSolver::PolicyIteration },
        ),
    }
}
