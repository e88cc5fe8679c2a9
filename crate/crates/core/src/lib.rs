//! Energy-restricted distributed state discrimination.
//!
//! `n` distant parties each try to recover one bit of a message encoded into
//! a shared state whose non-vacuum weight is at most `omega`. The crate
//! evaluates the optimal success probabilities for entangled, fully
//! separable and partially separable preparations, builds strategies that
//! attain them, re-derives them by brute-force alternating optimization,
//! and turns an observed success probability into an entanglement-depth
//! certificate.

pub mod bounds;
pub mod certify;
pub mod cli;
pub mod constructions;
pub mod error;
pub mod game;
pub mod oracle;
pub mod partition;
pub mod qcore;

pub use error::{Error, Result};
