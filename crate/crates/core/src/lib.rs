//! Envy-free house allocation.
//!
//! Decides whether `n` agents with weak rankings over `m >= n` houses can
//! each receive a distinct house without anyone preferring another agent's
//! house, and finds such an assignment when it exists. Also ships an
//! exhaustive oracle for small instances and a Monte Carlo harness for
//! random strict preferences.

pub mod bigraph;
pub mod cli;
pub mod oracle;
pub mod prefs;
pub mod randmodel;
pub mod solver;

pub use bigraph::{BipartiteGraph, HallViolator, Matching};
pub use prefs::{parse_profile, PreferenceProfile};
pub use randmodel::{MonteCarloStats, UtilityMatrix};
pub use solver::{envy_free_assignment, verify_envy_free, Assignment, Solution, SolveReport};
