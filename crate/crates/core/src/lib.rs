//! Walks on the square lattice obeying two-step rules.
pub mod asymptotics;
pub mod classify;
pub mod dp;
pub mod genfun;
pub mod group;
pub mod guess;
pub mod rule;
pub use dp::{Enumeration, Plane};
pub use rule::{Dir, Rule, StepPerm, DIRS};
