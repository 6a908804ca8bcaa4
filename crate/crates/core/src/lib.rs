//! Dicke-state preparation in all-to-all Ising-coupled qubit arrays driven by
//! global transverse control pulses.
//!
//! The dynamics live in the (N+1)-dimensional permutation-symmetric sector
//! ([`symsector`]); [`fullspace`] re-derives everything on the 2^N-dimensional
//! tensor-product space as an independent check.

pub mod error;
pub mod fullspace;
pub mod linalg;
pub mod optimizer;
pub mod parity;
pub mod platform;
pub mod pulseseq;
pub mod robustness;
pub mod symsector;

pub use error::{Error, Result};
pub use pulseseq::PulseSequence;
