//! Magic-gate accounting meets communication complexity.
//!
//! The crate turns Clifford+magic circuits computing Boolean functions into
//! classical protocols (non-adaptive parity decision trees, simultaneous
//! message protocols, two-way transcripts), implements the garden-hose model,
//! and converts quantum simultaneous-message protocols with a low T-depth
//! referee into private simultaneous-message protocols with classical
//! messages. Every construction is checked against the dense statevector
//! simulator in [`statevector`].
//!
//! Qubit `q` of a register corresponds to bit `q` of a basis-state index
//! (little-endian). Input bit `i` of a circuit is loaded on qubit `i`.

pub mod boolfun;
pub mod circuit;
pub mod error;
pub mod gardenhose;
pub mod linalg;
pub mod pauli;
pub mod pdt;
pub mod problems;
pub mod psm;
pub mod statevector;

pub use error::{Error, Result};
