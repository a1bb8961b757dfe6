//! Iterative and exhaustive solvers. Every solver returns a [`SolveReport`].

pub mod decompose;
pub mod dispatch;
pub mod hoffman_karp;
pub mod oracle;
pub mod policy_iteration;
pub mod power;
pub mod report;

pub use dispatch::{solve_game, AlgoChoice, SolveOptions};
pub use decompose::{solve_irreducible, solve_with, InnerSolver};
pub use hoffman_karp::hoffman_karp;
pub use oracle::{brute_force, brute_force_with_cap};
pub use policy_iteration::{
    pi_despot_free, policy_iteration, spectral_simplex, Mode, OnePlayerSolution, PiOptions, SimplexRule, UpdateRule,
};
pub use power::km_power;
pub use report::{Algorithm, SolveReport};
