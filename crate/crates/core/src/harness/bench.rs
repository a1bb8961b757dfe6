//! Benchmark runner: solves a grid of random instances with several
//! algorithms and records one CSV row per run, plus mean and median rows
//! per (spec, algorithm).

use std::io::Write;
use std::time::Instant;

use serde::Deserialize;

use crate::error::Result;
use crate::solvers::dispatch::{solve_game, AlgoChoice, SolveOptions};

use super::generate::{generate, RandomSpec};

pub const CSV_HEADER: [&str; 12] = [
    "n", "m", "W", "seed", "two_player", "algo", "rep", "wall_time_s", "outer_iters", "inner_solves", "value",
    "converged",
];

fn default_repetitions() -> usize {
    30
}

/// Grid, algorithms and repetition count. Repetition `r` of a spec solves
/// the instance generated from `seed + r`.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchConfig {
    pub grid: Vec<RandomSpec>,
    pub algorithms: Vec<AlgoTag>,
    #[serde(default = "default_repetitions")]
    pub repetitions: usize,
    #[serde(default)]
    pub eps: Option<f64>,
}

/// An algorithm tag as written in the config (`pi`, `simplex`, `auto`, …).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(try_from = "String")]
pub struct AlgoTag(pub AlgoChoice);

impl TryFrom<String> for AlgoTag {
    type Error = crate::error::Error;
    fn try_from(s: String) -> Result<Self> {
        Ok(AlgoTag(s.parse()?))
    }
}

impl BenchConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

/// Which repetition a row describes.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum RowKind {
    Rep(usize),
    Mean,
    Median,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchRecord {
    pub spec: RandomSpec,
    pub algo: AlgoChoice,
    pub kind: RowKind,
    pub wall_time_s: f64,
    pub outer_iters: f64,
    pub inner_solves: f64,
    /// Largest state value (NaN when the solve failed).
    pub value: f64,
    pub converged: bool,
}

impl BenchRecord {
    fn fields(&self) -> Vec<String> {
        let rep = match self.kind {
            RowKind::Rep(r) => r.to_string(),
            RowKind::Mean => "mean".into(),
            RowKind::Median => "median".into(),
        };
        let count = |v: f64| if matches!(self.kind, RowKind::Rep(_)) { format!("{}", v as u64) } else { format!("{v}") };
        vec![
            self.spec.n.to_string(),
            self.spec.m.to_string(),
            self.spec.w.to_string(),
            self.spec.seed.to_string(),
            self.spec.two_player.to_string(),
            self.algo.to_string(),
            rep,
            format!("{:e}", self.wall_time_s),
            count(self.outer_iters),
            count(self.inner_solves),
            format!("{}", self.value),
            self.converged.to_string(),
        ]
    }
}

fn median(mut v: Vec<f64>) -> f64 {
    if v.is_empty() {
        return f64::NAN;
    }
    v.sort_by(f64::total_cmp);
    let k = v.len();
    if k % 2 == 1 {
        v[k / 2]
    } else {
        0.5 * (v[k / 2 - 1] + v[k / 2])
    }
}

fn summary(rows: &[BenchRecord], kind: RowKind) -> BenchRecord {
    let agg = |f: fn(&BenchRecord) -> f64| {
        let v: Vec<f64> = rows.iter().map(f).collect();
        match kind {
            RowKind::Median => median(v),
            _ => v.iter().sum::<f64>() / v.len() as f64,
        }
    };
    BenchRecord {
        spec: rows[0].spec.clone(),
        algo: rows[0].algo,
        kind,
        wall_time_s: agg(|r| r.wall_time_s),
        outer_iters: agg(|r| r.outer_iters),
        inner_solves: agg(|r| r.inner_solves),
        value: agg(|r| r.value),
        converged: rows.iter().all(|r| r.converged),
    }
}

/// Runs the grid in order; a failed solve is recorded as a row with
/// `value = NaN` and `converged = false`. Rows for one (spec, algorithm)
/// are followed by their mean and median. Only the solve is timed.
pub fn run_bench(config: &BenchConfig) -> Result<Vec<BenchRecord>> {
    let opts = SolveOptions { eps: config.eps, seed: None };
    let mut out = Vec::new();
    for spec in &config.grid {
        spec.validate()?;
        let games = (0..config.repetitions)
            .map(|r| {
                let s = RandomSpec { seed: spec.seed.wrapping_add(r as u64), ..spec.clone() };
                generate(&s).map(|g| (s, g))
            })
            .collect::<Result<Vec<_>>>()?;
        for &AlgoTag(algo) in &config.algorithms {
            let mut rows = Vec::with_capacity(games.len());
            for (r, (s, g)) in games.iter().enumerate() {
                let start = Instant::now();
                let res = solve_game(g, algo, &opts);
                let wall = start.elapsed().as_secs_f64();
                let row = match res {
                    Ok(rep) => BenchRecord {
                        spec: s.clone(),
                        algo,
                        kind: RowKind::Rep(r),
                        wall_time_s: wall,
                        outer_iters: rep.iterations as f64,
                        inner_solves: rep.inner_iterations as f64,
                        value: rep.free_state_value(),
                        converged: rep.converged,
                    },
                    Err(_) => BenchRecord {
                        spec: s.clone(),
                        algo,
                        kind: RowKind::Rep(r),
                        wall_time_s: wall,
                        outer_iters: 0.0,
                        inner_solves: 0.0,
                        value: f64::NAN,
                        converged: false,
                    },
                };
                rows.push(row);
            }
            if !rows.is_empty() {
                let mean = summary(&rows, RowKind::Mean);
                let med = summary(&rows, RowKind::Median);
                out.extend(rows);
                out.push(mean);
                out.push(med);
            }
        }
    }
    Ok(out)
}

pub fn write_csv<W: Write>(records: &[BenchRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in records {
        w.write_record(r.fields())?;
    }
    w.flush()?;
    Ok(())
}

/// Largest relative disagreement in `value` between algorithms on the same
/// instance (per-repetition rows only).
pub fn max_disagreement(records: &[BenchRecord]) -> f64 {
    let mut worst: f64 = 0.0;
    for a in records {
        let RowKind::Rep(_) = a.kind else { continue };
        for b in records.iter().filter(|b| b.spec == a.spec && b.kind == a.kind) {
            if a.value.is_finite() && b.value.is_finite() {
                worst = worst.max((a.value - b.value).abs() / a.value.abs().max(1.0));
            }
        }
    }
    worst
}
