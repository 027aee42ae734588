//! Executable constructions around equation satisfiability in finite
//! solvable groups.
//!
//! The crate is organised bottom-up:
//!
//! * [`group`]: finite groups as multiplication tables, subgroup algebra,
//!   commutator calculus, Fitting series and the `eta` descent operator.
//! * [`expr`]: expressions over a group, their evaluation and image sets,
//!   and builders for inducing and universally defining expressions.
//! * [`gprogram`]: G-programs and the divide-and-conquer AND construction.
//! * [`reduction`]: the `(K, H)` certificate search, the graph coloring
//!   to equation compiler, its exact decision procedure and the lifting
//!   transformations.
//! * [`solver`]: brute-force oracles used to check everything else.
//! * [`catalog`]: shipped groups and the applicability scan.

pub mod catalog;
pub mod config;
pub mod error;
pub mod expr;
pub mod gprogram;
pub mod group;
pub mod reduction;
pub mod solver;
pub mod verify;

pub use error::{Error, Result};
pub use group::{Elem, ElementSet, Group, Permutation, Subgroup};
