//! Skew corner-free sets in grids and triangular grids, trapezoid-free
//! triples in abelian groups, exact and heuristic searches for extremal
//! sets, and (S)TPP families with the exponent bounds they imply.

pub mod bitset;
pub mod constructions;
pub mod error;
pub mod grid_sets;
pub mod groups;
pub mod oracle;
pub mod render;
pub mod report;
pub mod repro;
pub mod search;
pub mod stpp;
pub mod textio;

pub use error::{Error, Result};
