//! Conversion of dimensionless results to SI units for Rydberg-atom arrays.
//!
//! The Ising coupling J is an energy in joules. Rates quoted as `J/hbar` are
//! angular frequencies in s^-1 (no factor 2 pi is applied anywhere).

use crate::error::{Error, Result};
use crate::pulseseq::{total_duration, PulseSequence};

/// Reduced Planck constant, J s (CODATA 2018, exact).
pub const HBAR: f64 = 1.054_571_817e-34;

/// Van der Waals coefficient and interatomic spacing, SI units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlatformParams {
    /// J m^6
    c6: f64,
    /// m
    r: f64,
}

impl PlatformParams {
    pub fn new(c6: f64, r: f64) -> Result<Self> {
        if !(c6.is_finite() && c6 > 0.0) {
            return Err(Error::InvalidPlatform("c6 must be positive and finite"));
        }
        if !(r.is_finite() && r > 0.0) {
            return Err(Error::InvalidPlatform("r must be positive and finite"));
        }
        Ok(Self { c6, r })
    }

    pub fn c6(&self) -> f64 {
        self.c6
    }

    pub fn r(&self) -> f64 {
        self.r
    }
}

/// Effective Ising coupling `J = C6 / (4 R^6)`, joules.
pub fn vdw_coupling(p: &PlatformParams) -> f64 {
    p.c6 / (4.0 * p.r.powi(6))
}

/// `J` from an angular frequency `J/hbar` in s^-1.
pub fn coupling_from_rate(rate: f64) -> Result<f64> {
    if !(rate.is_finite() && rate > 0.0) {
        return Err(Error::InvalidPlatform("coupling rate must be positive and finite"));
    }
    Ok(rate * HBAR)
}

/// `J/hbar` in s^-1.
pub fn coupling_rate(coupling: f64) -> f64 {
    coupling / HBAR
}

/// Wall-clock duration in seconds: `(xi1 + xi2) hbar / J`.
pub fn physical_duration(seq: &PulseSequence, coupling: f64) -> Result<f64> {
    if !(coupling.is_finite() && coupling > 0.0) {
        return Err(Error::InvalidPlatform("coupling must be positive and finite"));
    }
    Ok(total_duration(seq) * HBAR / coupling)
}
