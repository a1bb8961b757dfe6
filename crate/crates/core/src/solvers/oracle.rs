//! Exhaustive solver: evaluates every pair of positional policies and takes
//! per-state min-max, checking it against max-min.

use std::time::Instant;

use crate::error::{Error, Result};
use crate::game::{DespotPolicy, EntropyGame, TribunePolicy};
use crate::operators::people_matrix;
use crate::spectral::matrix_state_values;

use super::report::{Algorithm, SolveReport};

pub const DEFAULT_CAP: f64 = 1e6;
/// Tolerance of the min-max = max-min check, relative to `max(1, V_d)`.
pub const SADDLE_TOL: f64 = 1e-9;

/// Mixed-radix enumeration of one choice per slot.
struct Odometer {
    radix: Vec<usize>,
    digits: Vec<usize>,
    done: bool,
}

impl Odometer {
    fn new(radix: Vec<usize>) -> Self {
        let digits = vec![0; radix.len()];
        Self { radix, digits, done: false }
    }

    fn advance(&mut self) {
        for (d, &r) in self.digits.iter_mut().zip(&self.radix) {
            *d += 1;
            if *d < r {
                return;
            }
            *d = 0;
        }
        self.done = true;
    }
}

fn all_despot_policies(g: &EntropyGame) -> Vec<Vec<usize>> {
    let mut od = Odometer::new((0..g.n()).map(|d| g.despot_actions(d).len()).collect());
    let mut out = Vec::new();
    while !od.done {
        out.push(od.digits.iter().enumerate().map(|(d, &k)| g.despot_actions(d)[k].to).collect());
        od.advance();
    }
    out
}

/// Tribune policies varying only at Tribune nodes some Despot state can
/// move to; elsewhere the first action is kept.
fn all_tribune_policies(g: &EntropyGame) -> Vec<Vec<usize>> {
    let reachable = g.reachable_tribune();
    let slots: Vec<usize> = (0..g.num_tribune()).filter(|&t| reachable[t]).collect();
    let base = TribunePolicy::first_actions(g).as_slice().to_vec();
    let mut od = Odometer::new(slots.iter().map(|&t| g.tribune_actions(t).len()).collect());
    let mut out = Vec::new();
    while !od.done {
        let mut tau = base.clone();
        for (i, &t) in slots.iter().enumerate() {
            tau[t] = g.tribune_actions(t)[od.digits[i]].to;
        }
        out.push(tau);
        od.advance();
    }
    out
}

pub fn brute_force(g: &EntropyGame) -> Result<SolveReport> {
    brute_force_with_cap(g, DEFAULT_CAP)
}

pub fn brute_force_with_cap(g: &EntropyGame, cap: f64) -> Result<SolveReport> {
    let start = Instant::now();
    let count = g.despot_policy_count() * g.tribune_policy_count();
    if count > cap {
        return Err(Error::CapExceeded { count, cap });
    }
    let n = g.n();
    let deltas = all_despot_policies(g);
    let taus = all_tribune_policies(g);

    // For each δ the per-state max over τ; for each τ the per-state min over δ.
    let mut max_over_tau = vec![vec![f64::NEG_INFINITY; n]; deltas.len()];
    let mut min_over_delta = vec![vec![f64::INFINITY; n]; taus.len()];
    let mut perron = 0;
    for (i, delta) in deltas.iter().enumerate() {
        for (j, tau) in taus.iter().enumerate() {
            let rows: Vec<usize> = delta.iter().map(|&t| tau[t]).collect();
            let v = matrix_state_values(&people_matrix(g, &rows))?;
            perron += 1;
            for d in 0..n {
                max_over_tau[i][d] = max_over_tau[i][d].max(v[d]);
                min_over_delta[j][d] = min_over_delta[j][d].min(v[d]);
            }
        }
    }
    let values: Vec<f64> = (0..n)
        .map(|d| max_over_tau.iter().map(|v| v[d]).fold(f64::INFINITY, f64::min))
        .collect();
    for d in 0..n {
        let max_min = min_over_delta.iter().map(|v| v[d]).fold(f64::NEG_INFINITY, f64::max);
        if (max_min - values[d]).abs() > SADDLE_TOL * values[d].max(1.0) {
            return Err(Error::NoSaddlePoint { state: d, min_max: values[d], max_min });
        }
    }

    // A uniformly optimal pair exists; take the first one, falling back to
    // the closest when rounding hides it.
    let deviation = |v: &[f64]| {
        v.iter().zip(&values).map(|(a, b)| (a - b).abs() / b.max(1.0)).fold(0.0, f64::max)
    };
    let pick = |table: &[Vec<f64>]| {
        let mut best = (f64::INFINITY, 0);
        for (i, v) in table.iter().enumerate() {
            let dev = deviation(v);
            if dev <= SADDLE_TOL {
                return i;
            }
            if dev < best.0 {
                best = (dev, i);
            }
        }
        best.1
    };
    let i = pick(&max_over_tau);
    let j = pick(&min_over_delta);

    let mut r = SolveReport::new(Algorithm::BruteForce, values);
    r.despot_policy = Some(DespotPolicy::from_raw(deltas[i].clone()));
    r.tribune_policy = Some(TribunePolicy::from_raw(taus[j].clone()));
    r.iterations = deltas.len() * taus.len();
    r.inner_iterations = perron;
    r.wall_time = start.elapsed().as_secs_f64();
    Ok(r)
}
