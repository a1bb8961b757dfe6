//! The min-max dynamic programming operator of an entropy game, its
//! log-domain conjugate, its one-player restrictions and the matrix induced
//! by a pair of policies.
//!
//! Ties in every argmin/argmax go to the action listed first, i.e. the one
//! with the smallest arc index.

use crate::error::{Error, Result};
use crate::game::{DespotPolicy, EntropyGame, TribunePolicy};
use crate::matrix::Matrix;

/// Multiplicative value iteration stops with [`Error::Overflow`] past this.
pub const OVERFLOW_LIMIT: f64 = 1e300;

/// `max_{(t,p)} Σ m_{pd'} X_{d'}` for one Tribune node, with the first
/// maximizing People node.
pub fn tribune_best(g: &EntropyGame, t: usize, x: &[f64]) -> (f64, usize) {
    let acts = g.tribune_actions(t);
    let mut best = (g.people_dot(acts[0].to, x), acts[0].to);
    for a in &acts[1..] {
        let v = g.people_dot(a.to, x);
        if v > best.0 {
            best = (v, a.to);
        }
    }
    best
}

/// `F_t(X)` for every Tribune node.
pub fn tribune_values(g: &EntropyGame, x: &[f64]) -> Vec<f64> {
    (0..g.num_tribune()).map(|t| tribune_best(g, t, x).0).collect()
}

/// Tribune's best response to `X`: the first argmax at every Tribune node.
pub fn best_tribune_response(g: &EntropyGame, x: &[f64]) -> TribunePolicy {
    TribunePolicy::from_raw((0..g.num_tribune()).map(|t| tribune_best(g, t, x).1).collect())
}

/// Despot's best response to `X`: the first argmin of `F_t(X)`.
pub fn best_despot_response(g: &EntropyGame, x: &[f64]) -> DespotPolicy {
    let ft = tribune_values(g, x);
    DespotPolicy::from_raw(
        (0..g.n())
            .map(|d| {
                let acts = g.despot_actions(d);
                let mut best = acts[0].to;
                for a in &acts[1..] {
                    if ft[a.to] < ft[best] {
                        best = a.to;
                    }
                }
                best
            })
            .collect(),
    )
}

fn check_len(g: &EntropyGame, x: &[f64]) -> Result<()> {
    if x.len() != g.n() {
        return Err(Error::Dimension { expected: g.n(), got: x.len() });
    }
    Ok(())
}

/// `F_d(X) = min_{(d,t)} max_{(t,p)} Σ m_{pd'} X_{d'}`.
pub fn apply_operator(g: &EntropyGame, x: &[f64]) -> Result<Vec<f64>> {
    check_len(g, x)?;
    let ft = tribune_values(g, x);
    Ok((0..g.n())
        .map(|d| g.despot_actions(d).iter().map(|a| ft[a.to]).fold(f64::INFINITY, f64::min))
        .collect())
}

/// `F^δ`: Despot fixed to `δ`, Tribune still maximizes.
pub fn apply_despot_restricted(g: &EntropyGame, delta: &DespotPolicy, x: &[f64]) -> Result<Vec<f64>> {
    check_len(g, x)?;
    delta.validate(g)?;
    Ok((0..g.n()).map(|d| tribune_best(g, delta.get(d), x).0).collect())
}

/// `^τF`: Tribune fixed to `τ`, Despot still minimizes.
pub fn apply_tribune_restricted(g: &EntropyGame, tau: &TribunePolicy, x: &[f64]) -> Result<Vec<f64>> {
    check_len(g, x)?;
    tau.validate(g)?;
    Ok((0..g.n())
        .map(|d| {
            g.despot_actions(d)
                .iter()
                .map(|a| g.people_dot(tau.get(a.to), x))
                .fold(f64::INFINITY, f64::min)
        })
        .collect())
}

/// `log Σ m_{pd'} e^{x_{d'}}`, shifted by the row maximum.
pub fn people_log_dot(g: &EntropyGame, p: usize, x: &[f64]) -> f64 {
    let row = g.people_row(p);
    let shift = row.iter().map(|&(d, _)| x[d]).fold(f64::NEG_INFINITY, f64::max);
    if shift == f64::NEG_INFINITY {
        return shift;
    }
    let s: f64 = row.iter().map(|&(d, w)| w * (x[d] - shift).exp()).sum();
    shift + s.ln()
}

/// `f = log ∘ F ∘ exp`, evaluated without forming `exp(x)`.
pub fn apply_log_operator(g: &EntropyGame, x: &[f64]) -> Result<Vec<f64>> {
    check_len(g, x)?;
    let ft: Vec<f64> = (0..g.num_tribune())
        .map(|t| {
            g.tribune_actions(t)
                .iter()
                .map(|a| people_log_dot(g, a.to, x))
                .fold(f64::NEG_INFINITY, f64::max)
        })
        .collect();
    Ok((0..g.n())
        .map(|d| g.despot_actions(d).iter().map(|a| ft[a.to]).fold(f64::INFINITY, f64::min))
        .collect())
}

/// `M^{δ,τ}`: row `d` holds the weights leaving `τ(δ(d))`.
pub fn policy_matrix(g: &EntropyGame, delta: &DespotPolicy, tau: &TribunePolicy) -> Result<Matrix> {
    delta.validate(g)?;
    tau.validate(g)?;
    Ok(policy_matrix_unchecked(g, delta.as_slice(), tau.as_slice()))
}

/// The matrix whose row `d` is People node `rows[d]`.
pub fn people_matrix(g: &EntropyGame, rows: &[usize]) -> Matrix {
    let n = g.n();
    let mut m = Matrix::zeros(rows.len(), n);
    for (d, &p) in rows.iter().enumerate() {
        for &(d2, w) in g.people_row(p) {
            m[(d, d2)] = w;
        }
    }
    m
}

pub(crate) fn policy_matrix_unchecked(g: &EntropyGame, delta: &[usize], tau: &[usize]) -> Matrix {
    let rows: Vec<usize> = delta.iter().map(|&t| tau[t]).collect();
    people_matrix(g, &rows)
}

/// `V^k = F^k(e)` in double precision.
pub fn value_iterate(g: &EntropyGame, k: usize) -> Result<Vec<f64>> {
    let mut v = vec![1.0; g.n()];
    for step in 1..=k {
        v = apply_operator(g, &v)?;
        if v.iter().any(|&x| !(x <= OVERFLOW_LIMIT)) {
            return Err(Error::Overflow(step));
        }
    }
    Ok(v)
}

/// `v^k = log V^k`, iterated with the log-domain operator.
pub fn log_value_iterate(g: &EntropyGame, k: usize) -> Vec<f64> {
    let mut v = vec![0.0; g.n()];
    for _ in 0..k {
        v = apply_log_operator(g, &v).expect("length matches");
    }
    v
}
