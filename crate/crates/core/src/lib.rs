//! Exact solver and brute-force verifier for discrete-time stopping games
//! whose payoff `U(s, t)` may depend on information up to the later of the
//! two stopping times.
//!
//! The inf-player uses Type II non-anticipative strategies and the
//! sup-player Type I ones; [`solver::solve`] reduces the game to a Dynkin
//! game and builds optimal strategies, and [`oracle::verify_theorem`]
//! checks the result against exhaustive enumeration on small spaces.

pub mod cli;
pub mod error;
pub mod oracle;
pub mod payoff;
pub mod random;
pub mod rational;
pub mod report;
pub mod scenario;
pub mod solver;
pub mod space;
pub mod stopping;

pub use error::{Error, Violation, ViolationCode};
pub use oracle::{verify_theorem, Caps, Comparison, GameValueReport, Verification};
pub use payoff::{BiPayoff, Mode, PayoffSpec};
pub use rational::Rational;
pub use solver::{solve, GameSolution};
pub use space::{AdaptedProcess, FilteredSpace, RandomVariable};
pub use stopping::{Kind, StoppingStrategy, StoppingTime, StoppingTimeSet};
