use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use entropy_games::certificates::{certificate_from_report, check_cw, CwCertificate, CwVerdict};
use entropy_games::harness::{generate, run_bench, write_csv, BenchConfig, RandomSpec};
use entropy_games::operators::{log_value_iterate, value_iterate};
use entropy_games::solvers::{solve_game, AlgoChoice, SolveOptions, SolveReport};
use entropy_games::{parse_game, EntropyGame, Error};

#[derive(Parser)]
#[command(name = "entropy-games", version, about = "Solve and verify entropy games")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute state values and optimal policies.
    Solve {
        file: PathBuf,
        /// pi, simplex, simplex-d, hk, km, oracle, enum, ellipsoid or auto.
        #[arg(long, default_value = "auto")]
        algo: String,
        /// Accuracy of the ellipsoid and power iteration.
        #[arg(long)]
        eps: Option<f64>,
        /// Start from a random policy drawn with this seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Print the report as JSON.
        #[arg(long)]
        json: bool,
        /// Also write a certificate for the value to this file.
        #[arg(long)]
        certificate: Option<PathBuf>,
    },
    /// Check a Collatz-Wielandt certificate against a game.
    Verify { game: PathBuf, certificate: PathBuf },
    /// Generate a random game.
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long = "W", default_value_t = 15)]
        w: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        two_player: bool,
        /// Tribune successors per Despot state with --two-player.
        #[arg(long, default_value_t = 2)]
        despot_actions: usize,
        /// Output file; stdout when absent.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run a benchmark grid and write CSV.
    Bench {
        #[arg(long)]
        config: PathBuf,
        /// Output file; stdout when absent.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Finite-horizon values V^k from every state.
    ValueIterate {
        file: PathBuf,
        #[arg(long)]
        k: usize,
        /// Print log V^k instead (no overflow).
        #[arg(long)]
        log: bool,
    },
}

/// Failure with its exit code: 2 for bad input, 1 for a failed solve or a
/// rejected certificate.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(e: impl std::fmt::Display) -> Self {
        Self { code: 2, message: e.to_string() }
    }

    fn solve(e: impl std::fmt::Display) -> Self {
        Self { code: 1, message: e.to_string() }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn load_game(path: &Path) -> Result<EntropyGame, Failure> {
    parse_game(&read(path)?).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn write_out(output: Option<&Path>, text: &str) -> Result<(), Failure> {
    match output {
        Some(p) => fs::write(p, text).map_err(|e| Failure::input(format!("{}: {e}", p.display()))),
        None => match io::stdout().write_all(text.as_bytes()) {
            // A closed pipe (`| head`) is not an error.
            Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(Failure::input(e)),
            _ => Ok(()),
        },
    }
}

fn summary(g: &EntropyGame, report: &SolveReport) -> String {
    let mut s = format!("algorithm: {}\n", report.algorithm);
    for (id, v) in g.despot_ids().iter().zip(&report.values) {
        s += &format!("  {id}: {v:.12}\n");
    }
    s += &format!("free-state value: {:.12}\n", report.free_state_value());
    let moves = |pairs: Vec<(String, String)>| pairs.into_iter().map(|(a, b)| format!("{a}->{b}")).collect::<Vec<_>>().join(" ");
    if let Some(t) = &report.tribune_policy {
        s += &format!("tribune policy: {}\n", moves(t.named(g)));
    }
    if let Some(d) = &report.despot_policy {
        s += &format!("despot policy: {}\n", moves(d.named(g)));
    }
    s + &format!(
        "iterations: {} (inner {}), converged: {}, {:.3} ms\n",
        report.iterations,
        report.inner_iterations,
        report.converged,
        report.wall_time * 1e3
    )
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Solve { file, algo, eps, seed, json, certificate } => {
            let choice: AlgoChoice = algo.parse().map_err(Failure::input)?;
            if eps.is_some_and(|e| !(e > 0.0)) {
                return Err(Failure::input("--eps must be positive"));
            }
            let g = load_game(&file)?;
            let report = solve_game(&g, choice, &SolveOptions { eps, seed }).map_err(Failure::solve)?;
            if let Some(path) = certificate {
                let cert = certificate_from_report(&g, &report).map_err(Failure::solve)?;
                write_out(Some(&path), &cert.to_json_string())?;
            }
            if json {
                let text = serde_json::to_string_pretty(&report.to_json(&g)).expect("report serializes");
                write_out(None, &(text + "\n"))?;
            } else {
                write_out(None, &summary(&g, &report))?;
            }
            if report.converged {
                Ok(())
            } else {
                Err(Failure::solve("solver did not converge"))
            }
        }
        Command::Verify { game, certificate } => {
            let g = load_game(&game)?;
            let cert = CwCertificate::from_json(&read(&certificate)?).map_err(Failure::input)?;
            match check_cw(&g, &cert) {
                CwVerdict::Pass => write_out(None, "pass\n"),
                CwVerdict::Malformed(m) => Err(Failure::input(format!("malformed certificate: {m}"))),
                CwVerdict::NotPositive { state } => Err(Failure::solve(format!(
                    "fail: upper-bound certificate needs X > 0, X is zero at {}",
                    g.despot_ids()[state]
                ))),
                CwVerdict::Violation { state, fx, lambda_x } => Err(Failure::solve(format!(
                    "fail at {}: F(X) = {fx}, lambda X = {lambda_x}",
                    g.despot_ids()[state]
                ))),
            }
        }
        Command::Gen { n, m, w, seed, two_player, despot_actions, output } => {
            let spec = RandomSpec { n, m, w, seed, two_player, despot_actions };
            let g = generate(&spec).map_err(Failure::input)?;
            write_out(output.as_deref(), &(g.to_json_string() + "\n"))
        }
        Command::Bench { config, output } => {
            let cfg = BenchConfig::from_json(&read(&config)?).map_err(Failure::input)?;
            let rows = run_bench(&cfg).map_err(Failure::input)?;
            let mut buf = Vec::new();
            write_csv(&rows, &mut buf).map_err(Failure::input)?;
            write_out(output.as_deref(), &String::from_utf8(buf).expect("CSV is UTF-8"))
        }
        Command::ValueIterate { file, k, log } => {
            let g = load_game(&file)?;
            let v = if log {
                log_value_iterate(&g, k)
            } else {
                value_iterate(&g, k).map_err(|e| match e {
                    Error::Overflow(_) => Failure::solve(e),
                    e => Failure::input(e),
                })?
            };
            let text: String = g.despot_ids().iter().zip(v).map(|(id, x)| format!("{id}\t{x}\n")).collect();
            write_out(None, &text)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
