//! Perron roots and eigenvectors of nonnegative matrices.
//!
//! Irreducible matrices are handled by power iteration on `M + I`, which is
//! primitive whenever `M` is irreducible. The iteration stops once the
//! Collatz-Wielandt bounds `min (Mx)_i/x_i <= ρ <= max (Mx)_i/x_i` are tight.

use crate::error::{Error, Result};
use crate::game::{DespotPolicy, EntropyGame, TribunePolicy};
use crate::graph::{scc_condense, Condensation};
use crate::matrix::{solve_linear, sup_norm, Matrix};
use crate::operators::policy_matrix;

/// Target Collatz-Wielandt gap, relative to `max(1, ρ)`.
pub const PERRON_TOL: f64 = 1e-12;
/// Gap still accepted when rounding stalls the iteration.
pub const PERRON_FALLBACK_TOL: f64 = 1e-9;
/// Relative tolerance for "class root equals ρ(M)".
pub const BASIC_TOL: f64 = 1e-9;

const MAX_ITER: usize = 200_000;
const STALL_WINDOW: usize = 200;

#[derive(Clone, Debug, PartialEq)]
pub struct PerronPair {
    pub rho: f64,
    /// Right eigenvector, largest entry 1.
    pub right: Vec<f64>,
    /// Left eigenvector, scaled so that `left · right = 1`.
    pub left: Vec<f64>,
    /// `‖M X − ρ X‖∞ / ‖X‖∞`.
    pub residual: f64,
    pub iterations: usize,
}

/// Right Perron vector only (what the policy-iteration solvers need).
#[derive(Clone, Debug, PartialEq)]
pub struct PerronVector {
    pub rho: f64,
    /// Largest entry 1.
    pub vector: Vec<f64>,
    pub residual: f64,
    pub iterations: usize,
}

fn check_irreducible(m: &Matrix) -> Result<()> {
    assert!(m.is_square(), "Perron computations need a square matrix");
    let c = scc_condense(&m.support_graph());
    if c.len() > 1 {
        // Name a class that cannot reach everything: the first sink class.
        let sink = c.sinks_first[0];
        return Err(Error::Reducible { classes: c.len(), witness: c.components[sink][0] });
    }
    Ok(())
}

/// Right Perron pair of an irreducible matrix, optionally warm-started.
pub fn perron_vector(m: &Matrix, start: Option<&[f64]>) -> Result<PerronVector> {
    check_irreducible(m)?;
    shifted_power(m, start)
}

/// Right and left Perron vectors of an irreducible matrix.
pub fn perron_pair(m: &Matrix) -> Result<PerronPair> {
    let right = perron_vector(m, None)?;
    let left = shifted_power(&m.transpose(), None)?;
    let scale = left.vector.iter().zip(&right.vector).map(|(a, b)| a * b).sum::<f64>();
    Ok(PerronPair {
        rho: right.rho,
        left: left.vector.iter().map(|v| v / scale).collect(),
        right: right.vector,
        residual: right.residual,
        iterations: right.iterations + left.iterations,
    })
}

fn shifted_power(m: &Matrix, start: Option<&[f64]>) -> Result<PerronVector> {
    let n = m.rows();
    let mut x: Vec<f64> = match start {
        Some(s) if s.len() == n && s.iter().all(|v| v.is_finite() && *v > 0.0) => s.to_vec(),
        _ => vec![1.0; n],
    };
    let top = x.iter().cloned().fold(0.0, f64::max);
    x.iter_mut().for_each(|v| *v /= top);

    let mut best: Option<(f64, f64, Vec<f64>)> = None; // (gap, rho, x)
    let mut since_best = 0;
    for it in 1..=MAX_ITER {
        let mx = m.mul_vec(&x);
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for (a, b) in mx.iter().zip(&x) {
            let r = if *b > 0.0 { a / b } else if *a > 0.0 { f64::INFINITY } else { 0.0 };
            lo = lo.min(r);
            hi = hi.max(r);
        }
        let rho = 0.5 * (lo + hi);
        let gap = hi - lo;
        if gap <= PERRON_TOL * rho.max(1.0) {
            if rho <= 0.0 {
                return Err(Error::ZeroSpectralRadius);
            }
            return Ok(finish(m, x, rho, it));
        }
        if best.as_ref().is_none_or(|b| gap < b.0) {
            best = Some((gap, rho, x.clone()));
            since_best = 0;
        } else {
            since_best += 1;
            if since_best >= STALL_WINDOW {
                break;
            }
        }
        let mut y: Vec<f64> = mx.iter().zip(&x).map(|(a, b)| a + b).collect();
        let top = y.iter().cloned().fold(0.0, f64::max);
        if !(top > 0.0 && top.is_finite()) {
            return Err(Error::ZeroSpectralRadius);
        }
        y.iter_mut().for_each(|v| *v /= top);
        x = y;
    }
    let (gap, rho, x) = best.expect("at least one iteration ran");
    if rho > 0.0 && gap <= PERRON_FALLBACK_TOL * rho.max(1.0) {
        return Ok(finish(m, x, rho, MAX_ITER.min(STALL_WINDOW)));
    }
    if rho <= 0.0 {
        return Err(Error::ZeroSpectralRadius);
    }
    Err(Error::PerronNotConverged { iterations: MAX_ITER, gap })
}

fn finish(m: &Matrix, x: Vec<f64>, rho: f64, iterations: usize) -> PerronVector {
    let mx = m.mul_vec(&x);
    let res = mx.iter().zip(&x).map(|(a, b)| (a - rho * b).abs()).fold(0.0, f64::max);
    let norm = sup_norm(&x);
    PerronVector { rho, residual: res / norm, vector: x, iterations }
}

/// Classes of a nonnegative matrix and the data describing its Perron root.
#[derive(Clone, Debug)]
pub struct ClassStructure {
    pub condensation: Condensation,
    /// Perron root of each class; 0 for a single state without self-loop.
    pub roots: Vec<f64>,
    pub basic: Vec<bool>,
    pub rho: f64,
    /// A basic class from which no other basic class is reachable.
    pub final_basic: usize,
    /// States reachable from the final basic class, ascending.
    pub support: Vec<usize>,
    /// Nonnegative left eigenvector for `rho` whose support is `support`
    /// (sum of entries 1).
    pub left: Vec<f64>,
}

impl ClassStructure {
    pub fn classes(&self) -> &[Vec<usize>] {
        &self.condensation.components
    }
}

fn class_root(m: &Matrix, class: &[usize]) -> Result<f64> {
    if class.len() == 1 {
        return Ok(m[(class[0], class[0])]);
    }
    Ok(perron_vector(&m.select(class, class), None)?.rho)
}

pub fn class_structure(m: &Matrix) -> Result<ClassStructure> {
    let n = m.rows();
    let graph = m.support_graph();
    let cond = scc_condense(&graph);
    let roots = cond.components.iter().map(|c| class_root(m, c)).collect::<Result<Vec<_>>>()?;
    let rho = roots.iter().cloned().fold(0.0, f64::max);
    let gate = BASIC_TOL * rho.max(1.0);
    let basic: Vec<bool> = roots.iter().map(|r| rho - r <= gate).collect();

    let final_basic = (0..cond.len())
        .find(|&c| {
            basic[c] && {
                let acc = cond.accessible_from(c);
                (0..cond.len()).all(|o| o == c || !basic[o] || !acc[o])
            }
        })
        .expect("a sink-most basic class exists");
    let b = &cond.components[final_basic];
    let reach = graph.reachable_from(b);
    let support: Vec<usize> = (0..n).filter(|&i| reach[i]).collect();

    let mut left = vec![0.0; n];
    if rho > 0.0 {
        let pi_b = if b.len() == 1 {
            vec![1.0]
        } else {
            shifted_power(&m.select(b, b).transpose(), None)?.vector
        };
        for (k, &i) in b.iter().enumerate() {
            left[i] = pi_b[k];
        }
        let rest: Vec<usize> = support.iter().copied().filter(|i| !b.contains(i)).collect();
        if !rest.is_empty() {
            // π_R (ρ I − M_RR) = π_B M_BR, solved in transposed form.
            let rhs = m.select(b, &rest).vec_mul(&pi_b);
            let mut a = m.select(&rest, &rest).transpose();
            for i in 0..rest.len() {
                for j in 0..rest.len() {
                    a[(i, j)] = if i == j { rho - a[(i, j)] } else { -a[(i, j)] };
                }
            }
            let pi_r = solve_linear(&a, &rhs)
                .ok_or_else(|| Error::Certificate("singular downstream block".into()))?;
            for (k, &i) in rest.iter().enumerate() {
                left[i] = pi_r[k].max(0.0);
            }
        }
    } else {
        for &i in b {
            left[i] = 1.0;
        }
    }
    let s: f64 = left.iter().sum();
    left.iter_mut().for_each(|v| *v /= s);
    Ok(ClassStructure { condensation: cond, roots, basic, rho, final_basic, support, left })
}

/// Per-state growth rate of a nonnegative matrix: the largest class root
/// over the classes reachable from each state.
pub fn matrix_state_values(m: &Matrix) -> Result<Vec<f64>> {
    let n = m.rows();
    if (0..n).all(|i| m.row(i).iter().all(|&v| v > 0.0)) {
        return Ok(vec![perron_vector(m, None)?.rho; n]);
    }
    let cond = scc_condense(&m.support_graph());
    let mut best = vec![0.0; cond.len()];
    for &c in &cond.sinks_first {
        let mut v = class_root(m, &cond.components[c])?;
        for &s in cond.dag.successors(c) {
            v = v.max(best[s]);
        }
        best[c] = v;
    }
    Ok((0..n).map(|i| best[cond.component_of[i]]).collect())
}

/// Value of every state when both players are committed to `(δ, τ)`.
pub fn state_values(g: &EntropyGame, delta: &DespotPolicy, tau: &TribunePolicy) -> Result<Vec<f64>> {
    matrix_state_values(&policy_matrix(g, delta, tau)?)
}
