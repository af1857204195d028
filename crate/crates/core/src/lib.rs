//! Combinatorics of Springer fibers, cell invariants and centrally extended orbits.

pub mod assembler;
pub mod cli;
pub mod error;
pub mod euler;
pub mod f2alg;
pub mod interval_orbits;
pub mod invariants;
pub mod partitions;
pub mod solver;
pub mod springer_symbols;
pub mod verify;

pub use error::{CellError, Result};
