//! Reference oracles and synthetic inputs for testing `influence-core`.
//!
//! Everything in [`dense`] and [`naive`] is written directly from the
//! definitions, without reusing any computation from the core crate: only
//! its data types are shared. Speed is not a goal here.
//!
//! Randomness comes from [`rand_chacha::ChaCha8Rng`] seeded with
//! `seed_from_u64`, which produces the same stream on every platform.

pub mod dense;
pub mod naive;
pub mod random;
pub mod synth;

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum TestkitError {
    #[error("graph has {0} nodes, dense oracles accept at most {max}", max = dense::MAX_DENSE_NODES)]
    TooLarge(usize),
    #[error("graph has no arcs")]
    EmptyGraph,
    #[error("graph has no nodes")]
    EmptyNodeSet,
    #[error("raw vector sums to zero")]
    Degenerate,
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
}
