//! Collatz-Wielandt certificates: a vector `X ≥ 0` and a scalar `λ` with
//! `F(X) ≤ λX`, `F(X) ≥ λX` or `F(X) = λX`.
//!
//! `F(X) ≤ λX` with `X > 0` bounds every state value from above by `λ`;
//! `F(X) ≥ λX` with `X ≠ 0` bounds the largest state value from below; `=`
//! does both for the states in the support of `X`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{DespotPolicy, EntropyGame};
use crate::graph::scc_condense;
use crate::matrix::{solve_linear, sup_norm, Matrix};
use crate::operators::{apply_operator, best_despot_response};
use crate::solvers::decompose::{solve_irreducible, InnerSolver};
use crate::solvers::report::SolveReport;

/// Default relative tolerance of derived certificates.
pub const DEFAULT_TOLERANCE: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    /// `F(X) ≤ λX`: upper bound.
    #[serde(rename = "<=")]
    Upper,
    /// `F(X) = λX`: exact value.
    #[serde(rename = "=")]
    Exact,
    /// `F(X) ≥ λX`: lower bound.
    #[serde(rename = ">=")]
    Lower,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CwCertificate {
    pub lambda: f64,
    #[serde(rename = "X")]
    pub x: Vec<f64>,
    pub direction: Direction,
    /// Allowed violation, relative to `max(1, λ)·‖X‖∞`; defaults to
    /// [`DEFAULT_TOLERANCE`] when absent from the JSON.
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
}

fn default_tolerance() -> f64 {
    DEFAULT_TOLERANCE
}

impl CwCertificate {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }
}

/// Outcome of [`check_cw`].
#[derive(Clone, Debug, PartialEq)]
pub enum CwVerdict {
    Pass,
    /// First state where the inequality fails: `F_d(X)` against `λX_d`.
    Violation { state: usize, fx: f64, lambda_x: f64 },
    /// An upper-bound certificate needs `X_d > 0` everywhere.
    NotPositive { state: usize },
    Malformed(String),
}

impl CwVerdict {
    pub fn passed(&self) -> bool {
        matches!(self, CwVerdict::Pass)
    }

    /// The offending state, if any.
    pub fn witness(&self) -> Option<usize> {
        match self {
            CwVerdict::Violation { state, .. } | CwVerdict::NotPositive { state } => Some(*state),
            _ => None,
        }
    }
}

/// Checks `F(X) ⋚ λX` entrywise.
pub fn check_cw(g: &EntropyGame, cert: &CwCertificate) -> CwVerdict {
    let n = g.n();
    if cert.x.len() != n {
        return CwVerdict::Malformed(format!("X has {} entries, the game has {n} states", cert.x.len()));
    }
    if !(cert.lambda.is_finite() && cert.lambda > 0.0) {
        return CwVerdict::Malformed(format!("lambda must be positive, got {}", cert.lambda));
    }
    if !(cert.tolerance.is_finite() && cert.tolerance >= 0.0) {
        return CwVerdict::Malformed("tolerance must be nonnegative".into());
    }
    if cert.x.iter().any(|v| !v.is_finite() || *v < 0.0) {
        return CwVerdict::Malformed("X must be finite and nonnegative".into());
    }
    if cert.x.iter().all(|&v| v == 0.0) {
        return CwVerdict::Malformed("X must not vanish".into());
    }
    if cert.direction == Direction::Upper {
        if let Some(d) = cert.x.iter().position(|&v| v <= 0.0) {
            return CwVerdict::NotPositive { state: d };
        }
    }
    let fx = match apply_operator(g, &cert.x) {
        Ok(v) => v,
        Err(e) => return CwVerdict::Malformed(e.to_string()),
    };
    let slack = cert.tolerance * cert.lambda.max(1.0) * sup_norm(&cert.x);
    for d in 0..n {
        let lx = cert.lambda * cert.x[d];
        let ok = match cert.direction {
            Direction::Upper => fx[d] <= lx + slack,
            Direction::Lower => fx[d] >= lx - slack,
            Direction::Exact => (fx[d] - lx).abs() <= slack,
        };
        if !ok {
            return CwVerdict::Violation { state: d, fx: fx[d], lambda_x: lx };
        }
    }
    CwVerdict::Pass
}

const VALUE_TOL: f64 = 1e-9;
const REPAIR_ROUNDS: usize = 64;

/// Turns a solver output into an exact certificate for its free-state value.
///
/// A report carrying an eigenvector is used as is. Otherwise an eigenvector
/// is built on the game restricted to the reported Despot policy: the Perron
/// vector of a top-value component that no other top-value component can
/// reach, extended to the states upstream of it, zero elsewhere.
pub fn certificate_from_report(g: &EntropyGame, report: &SolveReport) -> Result<CwCertificate> {
    if let Some(x) = &report.eigenvector {
        return Ok(CwCertificate {
            lambda: report.values[0],
            x: x.clone(),
            direction: Direction::Exact,
            tolerance: DEFAULT_TOLERANCE,
        });
    }
    let lambda = report.free_state_value();
    let mut delta = match (&report.despot_policy, g.sigma()) {
        (Some(d), _) => d.clone(),
        (None, Some(s)) => DespotPolicy::from_raw(s),
        (None, None) => return Err(Error::Certificate("report has neither eigenvector nor Despot policy".into())),
    };
    let mut x = eigenvector_under(g, &delta, lambda)?;
    for _ in 0..REPAIR_ROUNDS {
        // Despot may prefer another move against X; the values are
        // unchanged by optimality, so retry with that move.
        let fx = apply_operator(g, &x)?;
        let slack = DEFAULT_TOLERANCE * lambda.max(1.0) * sup_norm(&x);
        if fx.iter().zip(&x).all(|(f, v)| (f - lambda * v).abs() <= slack) {
            return Ok(CwCertificate { lambda, x, direction: Direction::Exact, tolerance: DEFAULT_TOLERANCE });
        }
        let better = best_despot_response(g, &x);
        if better == delta {
            break;
        }
        delta = better;
        x = eigenvector_under(g, &delta, lambda)?;
    }
    Err(Error::Certificate(format!("no eigenvector for lambda = {lambda} found")))
}

/// A nonnegative `X` with `F^δ(X) = λX`, where `λ` is the largest state
/// value of the game restricted to `δ`.
fn eigenvector_under(g: &EntropyGame, delta: &DespotPolicy, lambda: f64) -> Result<Vec<f64>> {
    let r = g.restrict_despot(delta);
    let h = r.projected_graph();
    let cond = scc_condense(&h);
    let same = |a: f64, b: f64| (a - b).abs() <= VALUE_TOL * a.max(b).max(1.0);

    // Sources first, so the first top-value component found is not reachable
    // from any other.
    let mut found = None;
    for &c in cond.sinks_first.iter().rev() {
        if cond.is_trivial(&h, c) {
            continue;
        }
        let sub = r.subgame(&cond.components[c])?;
        let rep = solve_irreducible(&sub.game, InnerSolver::PolicyIteration, None)?;
        if same(rep.values[0], lambda) {
            found = Some((c, sub.despot_map, rep));
            break;
        }
    }
    let (c, map, rep) = found.ok_or_else(|| Error::Certificate(format!("no component attains {lambda}")))?;
    let mut x = vec![0.0; g.n()];
    for (i, &d) in map.iter().enumerate() {
        x[d] = rep.eigenvector.as_ref().expect("one-player solve returns a vector")[i];
    }

    // States that reach the component, excluding it.
    let reach = h.reversed().reachable_from(&cond.components[c]);
    let upstream: Vec<usize> = (0..g.n()).filter(|&d| reach[d] && cond.component_of[d] != c).collect();
    if !upstream.is_empty() {
        solve_upstream(&r, &upstream, lambda, &mut x)?;
    }
    Ok(x)
}

/// Solves `X_U = F_U(X) / λ` on the upstream states by policy iteration over
/// Tribune's choices. All components there have root below `λ`, so every
/// linear system below is nonsingular.
fn solve_upstream(r: &EntropyGame, upstream: &[usize], lambda: f64, x: &mut [f64]) -> Result<()> {
    let sigma = r.sigma().expect("restricted game is Despot-free");
    let mut pos = vec![usize::MAX; r.n()];
    for (i, &d) in upstream.iter().enumerate() {
        pos[d] = i;
    }
    let mut rows: Vec<usize> = upstream.iter().map(|&d| r.tribune_actions(sigma[d])[0].to).collect();
    for _ in 0..=r.num_people() {
        // (λI − M_UU) X_U = M_U,rest X_rest.
        let k = upstream.len();
        let mut a = Matrix::zeros(k, k);
        let mut b = vec![0.0; k];
        for (i, &p) in rows.iter().enumerate() {
            a[(i, i)] += lambda;
            for &(e, w) in r.people_row(p) {
                if pos[e] == usize::MAX {
                    b[i] += w * x[e];
                } else {
                    a[(i, pos[e])] -= w;
                }
            }
        }
        let xu = solve_linear(&a, &b).ok_or_else(|| Error::Certificate("singular upstream system".into()))?;
        for (i, &d) in upstream.iter().enumerate() {
            x[d] = xu[i];
        }
        let mut changed = false;
        for (i, &d) in upstream.iter().enumerate() {
            let cur = r.people_dot(rows[i], x);
            let (best, p) = r
                .tribune_actions(sigma[d])
                .iter()
                .map(|a| (r.people_dot(a.to, x), a.to))
                .fold((f64::NEG_INFINITY, 0), |m, v| if v.0 > m.0 { v } else { m });
            if best > cur * (1.0 + 1e-12) {
                rows[i] = p;
                changed = true;
            }
        }
        if !changed {
            return Ok(());
        }
    }
    Err(Error::Certificate("upstream iteration did not settle".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{fibonacci_game, GameBuilder, Weight};
    use crate::operators::apply_operator;
    use crate::solvers::oracle::brute_force;

    const PHI: f64 = 1.618_033_988_749_895;

    fn cert(lambda: f64, x: Vec<f64>, direction: Direction) -> CwCertificate {
        CwCertificate { lambda, x, direction, tolerance: 1e-12 }
    }

    #[test]
    fn fibonacci_hand_certificate() {
        let g = fibonacci_game();
        assert!(check_cw(&g, &cert(PHI, vec![0.0, PHI, 1.0], Direction::Exact)).passed());
    }

    #[test]
    fn wrong_lambda_fails_at_second_state() {
        let g = fibonacci_game();
        let v = check_cw(&g, &cert(2.0, vec![0.0, PHI, 1.0], Direction::Exact));
        assert_eq!(v.witness(), Some(1));
    }

    #[test]
    fn max_of_f_at_ones_is_an_upper_bound() {
        let g = fibonacci_game();
        let ones = vec![1.0; 3];
        let lambda = apply_operator(&g, &ones).unwrap().into_iter().fold(0.0, f64::max);
        assert!(check_cw(&g, &cert(lambda, ones, Direction::Upper)).passed());
    }

    #[test]
    fn upper_bound_needs_positive_vector() {
        let g = fibonacci_game();
        let v = check_cw(&g, &cert(5.0, vec![0.0, 1.0, 1.0], Direction::Upper));
        assert_eq!(v, CwVerdict::NotPositive { state: 0 });
    }

    #[test]
    fn malformed_inputs() {
        let g = fibonacci_game();
        assert!(matches!(check_cw(&g, &cert(1.0, vec![1.0], Direction::Exact)), CwVerdict::Malformed(_)));
        assert!(matches!(check_cw(&g, &cert(1.0, vec![0.0; 3], Direction::Lower)), CwVerdict::Malformed(_)));
        assert!(matches!(check_cw(&g, &cert(-1.0, vec![1.0; 3], Direction::Lower)), CwVerdict::Malformed(_)));
    }

    #[test]
    fn json_roundtrip() {
        let c = cert(PHI, vec![0.0, PHI, 1.0], Direction::Lower);
        let text = c.to_json_string();
        assert!(text.contains("\">=\"") && text.contains("\"X\""));
        assert_eq!(CwCertificate::from_json(&text).unwrap(), c);
        assert!(CwCertificate::from_json(r#"{"lambda":1,"X":[1],"direction":"<","tolerance":0}"#).is_err());
        let c = CwCertificate::from_json(r#"{"lambda":1,"X":[1],"direction":">="}"#).unwrap();
        assert_eq!(c.tolerance, DEFAULT_TOLERANCE);
    }

    #[test]
    fn certificate_from_oracle_report() {
        let g = fibonacci_game();
        let rep = brute_force(&g).unwrap();
        let c = certificate_from_report(&g, &rep).unwrap();
        assert!((c.lambda - PHI).abs() < 1e-9);
        assert!(check_cw(&g, &c).passed());
        assert_eq!(c.x[0], 0.0);
    }

    #[test]
    fn certificate_covers_upstream_states() {
        // d0 (loop of weight 1) feeds d1 (loop of weight 3).
        let mut b = GameBuilder::new();
        let d0 = b.despot("d0");
        let d1 = b.despot("d1");
        let t0 = b.tribune("t0");
        let t1 = b.tribune("t1");
        let p0 = b.people("p0");
        let q0 = b.people("q0");
        let p1 = b.people("p1");
        b.despot_arc(d0, t0).despot_arc(d1, t1);
        b.tribune_arc(t0, p0).tribune_arc(t0, q0).tribune_arc(t1, p1);
        b.people_arc(p0, d0, Weight::Int(1)).people_arc(p0, d1, Weight::Int(1));
        b.people_arc(q0, d1, Weight::Int(2));
        b.people_arc(p1, d1, Weight::Int(3));
        let g = b.build().unwrap();
        let rep = brute_force(&g).unwrap();
        let c = certificate_from_report(&g, &rep).unwrap();
        assert!(check_cw(&g, &c).passed(), "{c:?}");
        assert!(c.x.iter().all(|&v| v > 0.0));
        // X_0 = max(X_0 + X_1, 2 X_1) / 3 with X_1 = 1 gives X_0 = 2/3.
        assert!((c.x[0] / c.x[1] - 2.0 / 3.0).abs() < 1e-12);
    }
}
