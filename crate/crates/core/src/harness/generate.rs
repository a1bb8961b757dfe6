//! Seeded random entropy games.
//!
//! State `i` moves to Tribune node `t_i` (or to one of `despot_actions`
//! Tribune nodes in two-player mode); every Tribune node has `m` People
//! successors, and every People node reaches every state with a weight drawn
//! uniformly from `{1, …, W}`. The generator is ChaCha8 seeded with
//! `seed_from_u64(seed)`; draws happen in node order, People rows by state.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{EntropyGame, GameBuilder, Weight};

fn default_w() -> u64 {
    15
}

fn default_despot_actions() -> usize {
    2
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RandomSpec {
    pub n: usize,
    pub m: usize,
    #[serde(rename = "W", default = "default_w")]
    pub w: u64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub two_player: bool,
    /// Tribune successors of each Despot state in two-player mode.
    #[serde(default = "default_despot_actions")]
    pub despot_actions: usize,
}

impl RandomSpec {
    pub fn despot_free(n: usize, m: usize, w: u64, seed: u64) -> Self {
        Self { n, m, w, seed, two_player: false, despot_actions: 1 }
    }

    pub fn two_player(n: usize, m: usize, w: u64, seed: u64, despot_actions: usize) -> Self {
        Self { n, m, w, seed, two_player: true, despot_actions }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || self.m == 0 || self.w == 0 || (self.two_player && self.despot_actions == 0) {
            return Err(Error::Unsupported(format!("invalid random spec {self:?}: n, m, W and despot_actions must be >= 1")));
        }
        Ok(())
    }
}

/// Builds the random game described by `spec`.
pub fn generate(spec: &RandomSpec) -> Result<EntropyGame> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut b = GameBuilder::new();
    let states: Vec<usize> = (0..spec.n).map(|i| b.despot(format!("d{i}"))).collect();
    let branches = if spec.two_player { spec.despot_actions } else { 1 };
    for (i, &d) in states.iter().enumerate() {
        for k in 0..branches {
            let t = if spec.two_player { b.tribune(format!("t{i}_{k}")) } else { b.tribune(format!("t{i}")) };
            b.despot_arc(d, t);
            for a in 0..spec.m {
                let name = if spec.two_player { format!("p{i}_{k}_{a}") } else { format!("p{i}_{a}") };
                let p = b.people(name);
                b.tribune_arc(t, p);
                for &e in &states {
                    b.people_arc(p, e, Weight::Int(rng.gen_range(1..=spec.w)));
                }
            }
        }
    }
    b.build()
}
