//! Collatz-Wielandt certificates, the convex program of Despot-free games
//! with its separation oracle and ellipsoid solver, policy synthesis from
//! approximate solutions, and Despot enumeration.

pub mod cw;
pub mod ellipsoid;
pub mod enumeration;
pub mod separation;
pub mod synthesis;

pub use cw::{certificate_from_report, check_cw, CwCertificate, CwVerdict, Direction};
pub use ellipsoid::{ellipsoid_solve, solve_ellipsoid, EllipsoidResult};
pub use enumeration::solve_by_despot_enumeration;
pub use separation::{eta_sep_log, separation_oracle, ConvexPoint, ConvexProgram, SeparationResult};
pub use synthesis::{synthesize_tribune_policy, SynthesisOutcome};
