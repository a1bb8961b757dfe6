//! The conditioned convex program of an irreducible Despot-free game and a
//! weak separation oracle for its feasible set `K`.
//!
//! `K` is the set of `(u, μ)` with `f(u) ≤ μ·e + u` and box bounds on `u`
//! and `μ`. The game value is `exp(min μ over K)`.

use crate::error::{Error, Result};
use crate::game::EntropyGame;
use crate::operators::people_log_dot;

/// Natural log of the separation bound `η_sep(n, W)`: two distinct values
/// of policies in a game with `n` states and integer weights at most `W`
/// differ by at least `η_sep`.
///
/// `η_sep = 1 / (2 (2n)^(n+2) ((2⌈√n⌉W)^(2n) + 1)^(2n))`.
pub fn eta_sep_log(n: u64, w: u64) -> f64 {
    assert!(n >= 1 && w >= 1, "eta_sep_log needs n, W >= 1");
    let nf = n as f64;
    let a = 2.0 * ceil_sqrt(n) as f64 * w as f64;
    // ln(a^(2n) + 1) = 2n ln a + ln(1 + a^(-2n)).
    let inner = 2.0 * nf * a.ln() + (-2.0 * nf * a.ln()).exp().ln_1p();
    -(std::f64::consts::LN_2 + (nf + 2.0) * (2.0 * nf).ln() + 2.0 * nf * inner)
}

fn ceil_sqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r < n {
        r += 1;
    }
    while r > 0 && (r - 1) * (r - 1) >= n {
        r -= 1;
    }
    r
}

/// A candidate `(u, μ)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConvexPoint {
    pub u: Vec<f64>,
    pub mu: f64,
}

impl ConvexPoint {
    /// Coordinates `(u_1, …, u_n, μ)`.
    pub fn to_vec(&self) -> Vec<f64> {
        let mut v = self.u.clone();
        v.push(self.mu);
        v
    }

    pub fn from_slice(v: &[f64]) -> Self {
        let (mu, u) = v.split_last().expect("nonempty point");
        Self { u: u.to_vec(), mu: *mu }
    }
}

/// Outcome of the separation oracle.
#[derive(Clone, Debug, PartialEq)]
pub enum SeparationResult {
    /// The point is within `ν` of `K`.
    NearFeasible,
    /// `K ⊂ {x : c·x ≤ offset}`, with `offset ≤ c·y` and `‖c‖₂ ≥ 1`.
    Halfspace { c: Vec<f64>, offset: f64 },
}

/// Data of `K` for one game.
#[derive(Clone, Debug)]
pub struct ConvexProgram {
    n: usize,
    /// `⌈ln(nW)⌉`.
    log_bound: f64,
    /// Upper bound on every `u_d`.
    pub u_max: f64,
    /// Upper bound on `μ`.
    pub mu_max: f64,
    /// Radius of a ball around [`ConvexProgram::center`] inside `K`.
    pub inner_radius: f64,
    /// Radius of a ball around the center containing `K`.
    pub outer_radius: f64,
    /// Constraint rows: `(d, p)` for every People node `p` Tribune can pick
    /// after Despot state `d`.
    rows: Vec<(usize, usize)>,
}

impl ConvexProgram {
    pub fn new(g: &EntropyGame) -> Result<Self> {
        let sigma = g.sigma().ok_or_else(|| Error::NotDespotFree(g.classify().significant.len()))?;
        let cls = g.classify();
        if !cls.irreducible {
            let parts = crate::graph::scc_condense(&g.projected_graph()).len();
            return Err(Error::NotIrreducible(parts));
        }
        let n = g.n();
        let nf = n as f64;
        let w = g.max_weight().max(1.0);
        let log_bound = (nf * w).ln().ceil();
        let rows = (0..n)
            .flat_map(|d| g.tribune_actions(sigma[d]).iter().map(move |a| (d, a.to)))
            .collect();
        Ok(Self {
            n,
            log_bound,
            // For n = 1 the box would collapse to u = 0; keep it one wide so
            // the inner ball still fits.
            u_max: ((nf - 1.0) * log_bound).max(1.0),
            mu_max: log_bound + 2.0,
            inner_radius: 1.0 / 3.0,
            outer_radius: (nf + 1.0).sqrt() * ((nf - 1.0) * (nf * w).ln() + nf + 1.0),
            rows,
        })
    }

    pub fn dim(&self) -> usize {
        self.n + 1
    }

    /// `(e/2, ⌈ln(nW)⌉ + 3/2)`, deep inside `K`.
    pub fn center(&self) -> ConvexPoint {
        ConvexPoint { u: vec![0.5; self.n], mu: self.log_bound + 1.5 }
    }

    /// Largest violation of any constraint of `K` at `y` (≤ 0 inside).
    pub fn violation(&self, g: &EntropyGame, y: &ConvexPoint) -> f64 {
        let mut worst = f64::NEG_INFINITY;
        for &v in &y.u {
            worst = worst.max(-v).max(v - self.u_max);
        }
        worst = worst.max(-y.mu).max(y.mu - self.mu_max);
        for &(d, p) in &self.rows {
            worst = worst.max(people_log_dot(g, p, &y.u) - y.u[d] - y.mu);
        }
        worst
    }

    /// Internal precision used for accuracy `ν`.
    pub fn precision(&self, nu: f64) -> f64 {
        let nf = self.n as f64;
        let l = self.log_bound;
        let e1 = nu / ((5.0 + 2.0 * (nf - 1.0) * l) * (nf + 1.0).sqrt());
        let e2 = nu / (((nf - 1.0) * l + 3.0) * (nf + 1.0));
        e1.min(e2).min(1.0)
    }

    /// Weak separation oracle: either `y` is within `ν` of `K`, or a
    /// halfspace containing `K` and cutting off `y` is returned. Box
    /// violations are reported first, then the most violated nonlinear
    /// constraint, cut along its gradient.
    pub fn separate(&self, g: &EntropyGame, y: &ConvexPoint, nu: f64) -> SeparationResult {
        assert_eq!(y.u.len(), self.n, "point dimension");
        let eps = self.precision(nu);
        let q = self.dim();
        let unit = |i: usize, s: f64| {
            let mut c = vec![0.0; q];
            c[i] = s;
            c
        };
        for (d, &v) in y.u.iter().enumerate() {
            if v < -eps {
                return SeparationResult::Halfspace { c: unit(d, -1.0), offset: 0.0 };
            }
            if v > self.u_max + eps {
                return SeparationResult::Halfspace { c: unit(d, 1.0), offset: self.u_max };
            }
        }
        if y.mu < -eps {
            return SeparationResult::Halfspace { c: unit(self.n, -1.0), offset: 0.0 };
        }
        if y.mu > self.mu_max + eps {
            return SeparationResult::Halfspace { c: unit(self.n, 1.0), offset: self.mu_max };
        }

        let mut worst = (eps, None);
        for &(d, p) in &self.rows {
            let gv = people_log_dot(g, p, &y.u) - y.u[d] - y.mu;
            if gv > worst.0 {
                worst = (gv, Some((d, p)));
            }
        }
        let Some((d, p)) = worst.1 else {
            return SeparationResult::NearFeasible;
        };
        // Gradient of log Σ m e^u − u_d − μ: softmax weights, −1 at d and μ.
        let top = g.people_row(p).iter().map(|&(e, _)| y.u[e]).fold(f64::NEG_INFINITY, f64::max);
        let mut c = vec![0.0; q];
        let mut total = 0.0;
        for &(e, w) in g.people_row(p) {
            let s = w * (y.u[e] - top).exp();
            c[e] += s;
            total += s;
        }
        c.iter_mut().take(self.n).for_each(|v| *v /= total);
        c[d] -= 1.0;
        c[self.n] = -1.0;
        // Convexity: g(x) ≥ g(y) + c·(x − y), and g(x) ≤ 0 on K.
        let cy: f64 = c.iter().zip(y.to_vec()).map(|(a, b)| a * b).sum();
        SeparationResult::Halfspace { c, offset: cy - worst.0 }
    }
}

/// [`ConvexProgram::separate`] on a fresh program.
pub fn separation_oracle(g: &EntropyGame, y: &ConvexPoint, nu: f64) -> Result<SeparationResult> {
    Ok(ConvexProgram::new(g)?.separate(g, y, nu))
}
