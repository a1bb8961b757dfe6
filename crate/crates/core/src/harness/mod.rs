//! Random instances and the benchmark runner.

pub mod bench;
pub mod generate;

pub use bench::{max_disagreement, run_bench, write_csv, AlgoTag, BenchConfig, BenchRecord, RowKind};
pub use generate::{generate, RandomSpec};
