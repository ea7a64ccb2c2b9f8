//! Exact diagonalization of the open Ising chain in a tilted magnetic field,
//!
//! ```text
//! H(J, B, θ) = J Σ_{n<L} σᶻₙσᶻₙ₊₁ + B Σₙ (sin θ σˣₙ + cos θ σᶻₙ)
//! ```
//!
//! with the analysis pipeline built around it: bit-reversal symmetry
//! sectors, eigenstate entanglement (block entropy, concurrence, total
//! tangle, Meyer–Wallach Q), localization in the computational basis,
//! level-spacing statistics, avoided-crossing detection and exact unitary
//! time evolution.
//!
//! Basis convention: site 1 is the most significant bit of the basis index
//! and bit value 0 is the σᶻ = +1 state. Entanglement entropies are in bits,
//! localization measures (log PR, Shannon entropy) in nats.

pub mod chaostats;
pub mod cli;
pub mod dynamics;
pub mod entanglement;
mod error;
pub mod hamiltonian;
pub mod spectra;
pub mod state;

pub use error::{Error, Result};
pub use num_complex::Complex64;

/// Default upper bound on chain length for full-space work.
pub const DEFAULT_MAX_LEN: usize = 14;

/// Environment variable that overrides [`DEFAULT_MAX_LEN`].
pub const MAX_LEN_ENV: &str = "TILTED_ISING_MAX_L";

/// Largest chain length accepted by resource-guarded operations.
pub fn max_chain_len() -> usize {
    std::env::var(MAX_LEN_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_MAX_LEN)
}
