//! Numerical toolkit around the Bohnenblust-Hille inequality on the Boolean cube
//! and on products of cyclic groups: low-degree learning, constant tracking,
//! quantum-to-classical reductions and Remez-type checks.

pub mod bh_core;
pub mod boolean_cube;
pub mod cli;
pub mod cyclic;
pub mod error;
pub mod learning;
pub mod limits;
pub mod linalg;
pub mod quantum;
pub mod report;
pub mod rng;
pub mod suite;

pub use error::{Error, Result};
