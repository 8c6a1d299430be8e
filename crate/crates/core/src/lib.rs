//! Classical simulation of the 1→M Gisin-Massar universal cloner.
//!
//! The crate builds the (2M−1)-qubit cloner output as a dense state vector,
//! reproduces it through a parity-classified bitstring preparation pipeline,
//! compiles it into a matrix-product state by a left-to-right sweep of
//! singular-value decompositions, and evaluates clone fidelities and
//! bond-dimension scaling.
//!
//! Conventions shared by every module:
//!
//! - Qubit 1 is the leftmost symbol of a ket and the most significant bit of a
//!   basis index.
//! - Clones occupy positions `1..=M`, anticlones positions `M+1..=2M−1`.
//! - States are compared through the overlap modulus `|⟨a|b⟩|`; no module
//!   fixes a global phase.

pub mod analysis;
pub mod error;
pub mod export;
pub mod gm;
pub mod mps;
pub mod prep;
pub mod qubit;
pub mod state;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;

/// Binomial coefficient as a float, exact for the register sizes used here.
pub(crate) fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as f64
}
