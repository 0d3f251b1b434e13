//! Causal base theories: bit functions and integer linear maps.

pub mod finset;
pub mod intlin;

pub use finset::{FinFun, FinSet};
pub use intlin::{IntLin, IntMat};
