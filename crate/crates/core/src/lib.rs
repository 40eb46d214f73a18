//! Coinductive uniform proofs for Horn clause theories with fixed-point
//! terms.

pub mod cli;
pub mod herbrand;
pub mod ifol;
pub mod kernel;
pub mod logic;
pub mod prover;
