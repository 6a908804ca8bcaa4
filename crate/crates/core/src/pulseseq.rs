//! Five-stage pulse sequences: three instantaneous global rotations separated
//! by two free Ising evolutions,
//!
//! ```text
//! U = U_C(alpha3, phi3) U_ZZ(xi2) U_C(alpha2, phi2) U_ZZ(xi1) U_C(alpha1, phi1)
//! ```
//!
//! acting on `|D^N_0> = |0...0>`.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, TAU};

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, ZERO, ONE};
use crate::symsector::{self, SymmetricSector, SymmetricState};

/// Number of free parameters: (xi1, xi2, alpha1, alpha2, alpha3, phi1, phi2, phi3).
pub const N_PARAMS: usize = 8;

/// Wraps `phi` into `[0, pi)`, flipping the sign of `alpha` when the axis is
/// reversed. `U_C(alpha, phi + pi) = U_C(-alpha, phi)`.
pub fn canonical_axis(alpha: f64, phi: f64) -> (f64, f64) {
    let mut w = phi.rem_euclid(TAU);
    if w >= TAU {
        w = 0.0;
    }
    if w >= PI {
        let reduced = w - PI;
        (-alpha, if reduced >= PI { 0.0 } else { reduced })
    } else {
        (alpha, w)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SequenceRecord", into = "SequenceRecord")]
pub struct PulseSequence {
    n_qubits: usize,
    target: usize,
    xi: [f64; 2],
    alpha: [f64; 3],
    phi: [f64; 3],
}

/// Wire form: `{"n", "target", "xi", "alpha", "phi"}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
struct SequenceRecord {
    n: usize,
    target: usize,
    xi: [f64; 2],
    alpha: [f64; 3],
    phi: [f64; 3],
}

impl TryFrom<SequenceRecord> for PulseSequence {
    type Error = Error;

    fn try_from(r: SequenceRecord) -> Result<Self> {
        PulseSequence::new(r.n, r.target, r.xi, r.alpha, r.phi)
    }
}

impl From<PulseSequence> for SequenceRecord {
    fn from(s: PulseSequence) -> Self {
        SequenceRecord { n: s.n_qubits, target: s.target, xi: s.xi, alpha: s.alpha, phi: s.phi }
    }
}

impl PulseSequence {
    /// Validates and canonicalizes the axis azimuths into `[0, pi)`.
    pub fn new(
        n_qubits: usize,
        target: usize,
        xi: [f64; 2],
        alpha: [f64; 3],
        phi: [f64; 3],
    ) -> Result<Self> {
        let mut seq = Self::with_raw_axes(n_qubits, target, xi, alpha, phi)?;
        for j in 0..3 {
            let (a, p) = canonical_axis(seq.alpha[j], seq.phi[j]);
            seq.alpha[j] = a;
            seq.phi[j] = p;
        }
        Ok(seq)
    }

    /// Validates but keeps the azimuths exactly as given (perturbed sequences
    /// may leave `[0, pi)`).
    pub fn with_raw_axes(
        n_qubits: usize,
        target: usize,
        xi: [f64; 2],
        alpha: [f64; 3],
        phi: [f64; 3],
    ) -> Result<Self> {
        if n_qubits < 2 {
            return Err(Error::TooFewQubits { min: 2, got: n_qubits });
        }
        if target > n_qubits {
            return Err(Error::TargetOutOfRange { target, n_qubits });
        }
        let named = [
            ("xi", &xi[..]),
            ("alpha", &alpha[..]),
            ("phi", &phi[..]),
        ];
        for (name, values) in named {
            if let Some(&value) = values.iter().find(|v| !v.is_finite()) {
                return Err(Error::NonFinite { name, value });
            }
        }
        if let Some(&bad) = xi.iter().find(|x| **x < 0.0) {
            return Err(Error::NegativeDuration(bad));
        }
        Ok(Self { n_qubits, target, xi, alpha, phi })
    }

    /// All durations and angles zero: the identity sequence.
    pub fn zero(n_qubits: usize, target: usize) -> Result<Self> {
        Self::new(n_qubits, target, [0.0; 2], [0.0; 3], [0.0; 3])
    }

    /// Closed-form optimum preparing `|D^3_2>` from `|000>`:
    /// y-rotation by 3pi/2, x-rotation by -arccos(1/3)/2, y-rotation by pi/2,
    /// with equal Ising gaps `(pi - arccos(1/3))/4`.
    pub fn d3_2_reference() -> Self {
        let c = (1.0f64 / 3.0).acos();
        let gap = (PI - c) / 4.0;
        Self::new(
            3,
            2,
            [gap, gap],
            [3.0 * FRAC_PI_4, -c / 4.0, FRAC_PI_4],
            [FRAC_PI_2, 0.0, FRAC_PI_2],
        )
        .expect("reference sequence is valid")
    }

    /// Numerical optimum for `|D^4_2>` from `|0000>`, rounded to three decimals.
    pub fn d4_2_reference() -> Self {
        Self::new(
            4,
            2,
            [0.285, 0.702],
            [FRAC_PI_4, -1.162, -2.484],
            [FRAC_PI_2, 0.0, 0.0],
        )
        .expect("reference sequence is valid")
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn xi(&self) -> [f64; 2] {
        self.xi
    }

    pub fn alpha(&self) -> [f64; 3] {
        self.alpha
    }

    pub fn phi(&self) -> [f64; 3] {
        self.phi
    }

    /// `[xi1, xi2, alpha1, alpha2, alpha3, phi1, phi2, phi3]`.
    pub fn to_params(&self) -> [f64; N_PARAMS] {
        [
            self.xi[0], self.xi[1],
            self.alpha[0], self.alpha[1], self.alpha[2],
            self.phi[0], self.phi[1], self.phi[2],
        ]
    }

    pub fn from_params(n_qubits: usize, target: usize, p: &[f64; N_PARAMS]) -> Result<Self> {
        Self::new(n_qubits, target, [p[0], p[1]], [p[2], p[3], p[4]], [p[5], p[6], p[7]])
    }
}

/// Total propagator of the sequence in the symmetric sector.
pub fn compose(seq: &PulseSequence) -> ComplexMatrix {
    let n = seq.n_qubits;
    let stage = |alpha: f64, phi: f64| symsector::u_c(n, alpha, phi).expect("validated sequence");
    let wait = |xi: f64| symsector::u_zz(n, xi).expect("validated sequence");
    stage(seq.alpha[2], seq.phi[2])
        * wait(seq.xi[1])
        * stage(seq.alpha[1], seq.phi[1])
        * wait(seq.xi[0])
        * stage(seq.alpha[0], seq.phi[0])
}

/// Evaluates sequences for a fixed `(N, target)` without rebuilding the
/// sector eigenbasis each time.
#[derive(Debug, Clone)]
pub struct SequenceEvaluator {
    sector: SymmetricSector,
    target: usize,
}

impl SequenceEvaluator {
    pub fn new(n_qubits: usize, target: usize) -> Result<Self> {
        if target > n_qubits {
            return Err(Error::TargetOutOfRange { target, n_qubits });
        }
        Ok(Self { sector: SymmetricSector::new(n_qubits)?, target })
    }

    pub fn n_qubits(&self) -> usize {
        self.sector.n_qubits()
    }

    pub fn target(&self) -> usize {
        self.target
    }

    /// State after the sequence, starting from `|D^N_0>`. `xi` enters as
    /// given, so negative values mean backwards evolution.
    pub fn final_amplitudes(&self, p: &[f64; N_PARAMS]) -> Vec<C64> {
        let s = &self.sector;
        let mut psi = vec![ZERO; s.dim()];
        psi[0] = ONE;
        s.apply_u_c(p[2], p[5], &mut psi);
        s.apply_u_zz(p[0], &mut psi);
        s.apply_u_c(p[3], p[6], &mut psi);
        s.apply_u_zz(p[1], &mut psi);
        s.apply_u_c(p[4], p[7], &mut psi);
        psi
    }

    pub fn fidelity_params(&self, p: &[f64; N_PARAMS]) -> f64 {
        self.final_amplitudes(p)[self.target].norm().min(1.0)
    }

    pub fn fidelity(&self, seq: &PulseSequence) -> f64 {
        self.fidelity_params(&seq.to_params())
    }

    pub fn infidelity(&self, seq: &PulseSequence) -> f64 {
        1.0 - self.fidelity(seq)
    }
}

/// `|<D^N_target| U |D^N_0>|`, in `[0, 1]`.
pub fn fidelity(seq: &PulseSequence) -> f64 {
    SequenceEvaluator::new(seq.n_qubits, seq.target)
        .expect("validated sequence")
        .fidelity(seq)
}

pub fn final_state(seq: &PulseSequence) -> SymmetricState {
    let eval = SequenceEvaluator::new(seq.n_qubits, seq.target).expect("validated sequence");
    let mut amps = eval.final_amplitudes(&seq.to_params());
    let norm = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    amps.iter_mut().for_each(|z| *z /= norm);
    SymmetricState::new(seq.n_qubits, amps).expect("unitary evolution preserves the norm")
}

/// `xi1 + xi2` in units of hbar/J; control pulses take no time.
pub fn total_duration(seq: &PulseSequence) -> f64 {
    seq.xi[0] + seq.xi[1]
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ControlPulse {
    /// Units of 1/J.
    pub time: f64,
    pub azimuth: f64,
    pub half_angle: f64,
}

impl ControlPulse {
    /// Delta-function weights `(h_x, h_y)` in units of J:
    /// `h(t) = half_angle (cos azimuth, sin azimuth) delta(t - time)`.
    pub fn field_weights(&self) -> (f64, f64) {
        let (s, c) = self.azimuth.sin_cos();
        (self.half_angle * c, self.half_angle * s)
    }
}

/// Delta-pulse schedule of the transverse control field. Pulse times are
/// non-decreasing and start at 0 (they coincide only for zero-length gaps).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WaveformDescription {
    pub pulses: Vec<ControlPulse>,
    pub gaps: Vec<f64>,
}

pub fn export_waveform(seq: &PulseSequence) -> WaveformDescription {
    let times = [0.0, seq.xi[0], seq.xi[0] + seq.xi[1]];
    let pulses = (0..3)
        .map(|j| ControlPulse { time: times[j], azimuth: seq.phi[j], half_angle: seq.alpha[j] })
        .collect();
    WaveformDescription { pulses, gaps: seq.xi.to_vec() }
}
