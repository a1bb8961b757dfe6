//! Solvers for entropy games: per-state values, optimal positional
//! policies and Collatz-Wielandt certificates.
//!
//! ```
//! use entropy_games::game::fibonacci_game;
//! use entropy_games::operators::value_iterate;
//!
//! let g = fibonacci_game();
//! assert_eq!(value_iterate(&g, 5).unwrap(), vec![1.0, 13.0, 8.0]);
//! ```

pub mod certificates;
pub mod error;
pub mod game;
pub mod graph;
pub mod harness;
pub mod matrix;
pub mod operators;
pub mod solvers;
pub mod spectral;

pub use error::{Error, Result};
pub use game::{parse_game, DespotPolicy, EntropyGame, TribunePolicy};
