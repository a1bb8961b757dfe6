use std::fmt;
use std::str::FromStr;

use serde_json::{json, Map, Value};

use crate::error::Error;
use crate::game::{DespotPolicy, EntropyGame, TribunePolicy};

/// Which algorithm produced a report.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Algorithm {
    PolicyIteration,
    SimplexFirst,
    SimplexDantzig,
    HoffmanKarp,
    KmPower,
    BruteForce,
    DespotEnumeration,
    Ellipsoid,
}

impl Algorithm {
    pub const ALL: [Algorithm; 8] = [
        Algorithm::PolicyIteration,
        Algorithm::SimplexFirst,
        Algorithm::SimplexDantzig,
        Algorithm::HoffmanKarp,
        Algorithm::KmPower,
        Algorithm::BruteForce,
        Algorithm::DespotEnumeration,
        Algorithm::Ellipsoid,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Algorithm::PolicyIteration => "pi",
            Algorithm::SimplexFirst => "simplex",
            Algorithm::SimplexDantzig => "simplex-d",
            Algorithm::HoffmanKarp => "hk",
            Algorithm::KmPower => "km",
            Algorithm::BruteForce => "oracle",
            Algorithm::DespotEnumeration => "enum",
            Algorithm::Ellipsoid => "ellipsoid",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Algorithm {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.tag() == s)
            .ok_or_else(|| Error::Unsupported(format!("unknown algorithm `{s}`")))
    }
}

/// Outcome of a solve.
#[derive(Clone, Debug)]
pub struct SolveReport {
    pub algorithm: Algorithm,
    /// Value of the game from each Despot state.
    pub values: Vec<f64>,
    pub despot_policy: Option<DespotPolicy>,
    pub tribune_policy: Option<TribunePolicy>,
    /// Eigenvector `X` with `F(X) = λX`, when the game has a uniform value.
    pub eigenvector: Option<Vec<f64>>,
    /// Successive policy values (λ of each evaluated policy, outer loop).
    pub lambda_trace: Vec<f64>,
    /// Outer iterations (policy evaluations, candidates, or power steps).
    pub iterations: usize,
    /// Inner work: Perron solves or inner policy-iteration evaluations.
    pub inner_iterations: usize,
    pub wall_time: f64,
    pub converged: bool,
    /// `‖F(X) − λX‖∞ / ‖X‖∞` when an eigenvector is available, else 0.
    pub residual: f64,
}

impl SolveReport {
    pub(crate) fn new(algorithm: Algorithm, values: Vec<f64>) -> Self {
        Self {
            algorithm,
            values,
            despot_policy: None,
            tribune_policy: None,
            eigenvector: None,
            lambda_trace: Vec::new(),
            iterations: 0,
            inner_iterations: 0,
            wall_time: 0.0,
            converged: true,
            residual: 0.0,
        }
    }

    /// Value of the free-initial-state game: the largest state value.
    pub fn free_state_value(&self) -> f64 {
        self.values.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Machine-readable form with node ids.
    pub fn to_json(&self, g: &EntropyGame) -> Value {
        let named = |pairs: Vec<(String, String)>| {
            Value::Object(pairs.into_iter().map(|(k, v)| (k, Value::String(v))).collect::<Map<_, _>>())
        };
        json!({
            "algorithm": self.algorithm.tag(),
            "states": g.despot_ids(),
            "values": self.values,
            "free_state_value": self.free_state_value(),
            "despot_policy": self.despot_policy.as_ref().map(|d| named(d.named(g))),
            "tribune_policy": self.tribune_policy.as_ref().map(|t| named(t.named(g))),
            "eigenvector": self.eigenvector,
            "lambda_trace": self.lambda_trace,
            "iterations": self.iterations,
            "inner_iterations": self.inner_iterations,
            "wall_time": self.wall_time,
            "converged": self.converged,
            "residual": self.residual,
        })
    }
}
