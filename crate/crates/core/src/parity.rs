//! Parity block diagonalization of the symmetric sector and the Bloch-sphere
//! picture of the three-qubit sequence.
//!
//! `X_p = X^{⊗N}` maps `|D_a>` to `|D_{N-a}>`, and `Y_p = Y^{⊗N}` maps it to
//! `i^N (-1)^a |D_{N-a}>`. Both commute with `H_ZZ`; `X_p` also commutes with
//! the `phi = 0` control generator, `Y_p` with the `phi = pi/2` one.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt::{self, Write as _};

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::linalg::{hermiticity_defect, ComplexMatrix, ComplexVector, I, ONE, ZERO};
use crate::pulseseq::PulseSequence;
use crate::symsector::{self, SymmetricState};

const ORTHONORMAL_TOL: f64 = 1e-10;
const LEAKAGE_TOL: f64 = 1e-9;
const HERMITIAN_TOL: f64 = 1e-12;
/// Below this Bloch-vector length (relative to the matrix scale) the input is
/// treated as proportional to the identity.
const AXIS_TOL: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParityKind {
    X,
    Y,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParityBasis {
    pub n_qubits: usize,
    pub kind: ParityKind,
    /// Eigenvalue +1 block.
    pub plus: Vec<SymmetricState>,
    /// Eigenvalue -1 block.
    pub minus: Vec<SymmetricState>,
}

impl ParityBasis {
    pub fn block(&self, eigenvalue: i8) -> &[SymmetricState] {
        if eigenvalue >= 0 { &self.plus } else { &self.minus }
    }
}

/// `c_k (|D_{k-1}> + s |D_{N-k+1}>)`, with `c_k = 1/sqrt 2` for a pair and
/// `1` when the two indices coincide.
fn paired(n: usize, k: usize, s: C64) -> SymmetricState {
    let (lo, hi) = (k - 1, n + 1 - k);
    let mut amps = vec![ZERO; n + 1];
    if lo == hi {
        amps[lo] = ONE;
    } else {
        amps[lo] = C64::new(FRAC_1_SQRT_2, 0.0);
        amps[hi] = s * FRAC_1_SQRT_2;
    }
    SymmetricState::new(n, amps).expect("unit vector by construction")
}

/// Builds both blocks from the +1 pairing phase `phase(k)`; the -1 block
/// uses `-phase(k)` and omits the self-paired index of even `N`.
fn basis(n_qubits: usize, kind: ParityKind, phase: impl Fn(usize) -> C64) -> Result<ParityBasis> {
    if n_qubits < 2 {
        return Err(Error::TooFewQubits { min: 2, got: n_qubits });
    }
    let n = n_qubits;
    let mut plus = Vec::new();
    let mut minus = Vec::new();
    for k in 1..=n / 2 + 1 {
        if k - 1 > n + 1 - k {
            break;
        }
        plus.push(paired(n, k, phase(k)));
        if k - 1 != n + 1 - k {
            minus.push(paired(n, k, -phase(k)));
        }
    }
    Ok(ParityBasis { n_qubits, kind, plus, minus })
}

/// `|v_k^±> = c_k (|D_{k-1}> ± |D_{N-k+1}>)`, `k = 1 ..= N/2 + 1`.
pub fn x_parity_basis(n_qubits: usize) -> Result<ParityBasis> {
    basis(n_qubits, ParityKind::X, |_| ONE)
}

/// Eigenvectors of `Y_p`: `c_k (|D_{k-1}> ± i^N (-1)^{k-1} |D_{N-k+1}>)`,
/// upper sign for eigenvalue +1. The even-`N` self-paired vector is in the
/// +1 block.
pub fn y_parity_basis(n_qubits: usize) -> Result<ParityBasis> {
    let i_pow_n = I.powu(n_qubits as u32);
    basis(n_qubits, ParityKind::Y, |k| if k % 2 == 1 { i_pow_n } else { -i_pow_n })
}

/// Columns are the block vectors.
pub fn block_matrix(block: &[SymmetricState]) -> Result<ComplexMatrix> {
    let dim = block.first().map_or(0, |v| v.amplitudes().len());
    let mut b = ComplexMatrix::zeros(dim, block.len());
    for (j, v) in block.iter().enumerate() {
        if v.amplitudes().len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: v.amplitudes().len() });
        }
        b.set_column(j, &ComplexVector::from_column_slice(v.amplitudes()));
    }
    Ok(b)
}

/// `B† op B` for the block `B`.
pub fn project_operator(op: &ComplexMatrix, block: &[SymmetricState]) -> Result<ComplexMatrix> {
    let b = block_matrix(block)?;
    if op.nrows() != b.nrows() || op.ncols() != b.nrows() {
        return Err(Error::DimensionMismatch { expected: b.nrows(), got: op.nrows() });
    }
    let gram = b.adjoint() * &b;
    let defect = (gram - ComplexMatrix::identity(block.len(), block.len()))
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max);
    if defect > ORTHONORMAL_TOL {
        return Err(Error::NonOrthonormalBlock(defect));
    }
    Ok(b.adjoint() * op * b)
}

/// `h = offset 1 + rate (axis · σ)` for a 2×2 Hermitian `h`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisDecomposition {
    pub offset: f64,
    /// `None` when `h` is proportional to the identity.
    pub axis: Option<[f64; 3]>,
    pub rate: f64,
}

impl AxisDecomposition {
    pub fn reconstruct(&self) -> ComplexMatrix {
        let [x, y, z] = self.axis.unwrap_or([0.0; 3]).map(|c| c * self.rate);
        let c = self.offset;
        ComplexMatrix::from_row_slice(
            2,
            2,
            &[C64::new(c + z, 0.0), C64::new(x, -y), C64::new(x, y), C64::new(c - z, 0.0)],
        )
    }
}

pub fn rotation_axis_decomposition(h: &ComplexMatrix) -> Result<AxisDecomposition> {
    if h.nrows() != 2 || h.ncols() != 2 {
        return Err(Error::NotHermitian2x2);
    }
    let scale = h.iter().map(|z| z.norm()).fold(1.0, f64::max);
    if hermiticity_defect(h) > HERMITIAN_TOL * scale {
        return Err(Error::NotHermitian2x2);
    }
    let (h00, h11, h01) = (h[(0, 0)].re, h[(1, 1)].re, h[(0, 1)]);
    let r = [h01.re, -h01.im, (h00 - h11) / 2.0];
    let rate = r.iter().map(|c| c * c).sum::<f64>().sqrt();
    let offset = (h00 + h11) / 2.0;
    if rate <= AXIS_TOL * scale {
        return Ok(AxisDecomposition { offset, axis: None, rate: 0.0 });
    }
    Ok(AxisDecomposition { offset, axis: Some(r.map(|c| c / rate)), rate })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochPoint {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl BlochPoint {
    /// Pole convention: `c3` is the `|v_3>` (north) amplitude, `c4` the
    /// `|v_4>` (south) one.
    pub fn from_amplitudes(c3: C64, c4: C64) -> Self {
        let m = c3.conj() * c4;
        Self { x: 2.0 * m.re, y: 2.0 * m.im, z: c3.norm_sqr() - c4.norm_sqr() }
    }

    pub fn norm(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    pub fn distance(&self, other: &BlochPoint) -> f64 {
        let (dx, dy, dz) = (self.x - other.x, self.y - other.y, self.z - other.z);
        (dx * dx + dy * dy + dz * dz).sqrt()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    /// First Ising evolution.
    AB,
    /// Second control pulse.
    BC,
    /// Second Ising evolution.
    CD,
}

impl Stage {
    pub fn label(self) -> &'static str {
        match self {
            Stage::AB => "A-B",
            Stage::BC => "B-C",
            Stage::CD => "C-D",
        }
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectorySample {
    pub stage: Stage,
    /// Elapsed Ising time in units of 1/J; control pulses take none.
    pub t: f64,
    pub point: BlochPoint,
}

/// Bloch-sphere path of a three-qubit sequence between its first and last
/// control pulses, in the -1 `X_p` block with `|v_3> = (|D_0> - |D_3>)/sqrt 2`
/// at the north pole and `|v_4> = (|D_1> - |D_2>)/sqrt 2` at the south pole.
///
/// Each stage is sampled at fractions `i / (samples - 1)` of its evolution,
/// endpoints included; `samples = 1` yields only the start of each stage.
/// Fails if any sample leaves the block by more than 1e-9.
pub fn bloch_trajectory(seq: &PulseSequence, samples: usize) -> Result<Vec<TrajectorySample>> {
    if seq.n_qubits() != 3 {
        return Err(Error::BlochRequiresThreeQubits(seq.n_qubits()));
    }
    if samples == 0 {
        return Err(Error::ZeroSamples);
    }
    let minus = x_parity_basis(3)?.minus;
    let (v3, v4) = (&minus[0], &minus[1]);
    let (xi, alpha, phi) = (seq.xi(), seq.alpha(), seq.phi());

    let locate = |psi: &SymmetricState, stage: Stage| -> Result<BlochPoint> {
        let (c3, c4) = (v3.overlap(psi), v4.overlap(psi));
        let leakage = psi
            .amplitudes()
            .iter()
            .zip(v3.amplitudes().iter().zip(v4.amplitudes()))
            .map(|(p, (a, b))| (p - c3 * a - c4 * b).norm_sqr())
            .sum::<f64>()
            .sqrt();
        if leakage > LEAKAGE_TOL {
            return Err(Error::ParityLeakage { stage: stage.label().to_string(), leakage });
        }
        Ok(BlochPoint::from_amplitudes(c3, c4))
    };
    let fraction = |i: usize| if samples == 1 { 0.0 } else { i as f64 / (samples - 1) as f64 };

    let a = SymmetricState::dicke(3, 0)?.evolve(&symsector::u_c(3, alpha[0], phi[0])?)?;
    let b = a.evolve(&symsector::u_zz(3, xi[0])?)?;
    let c = b.evolve(&symsector::u_c(3, alpha[1], phi[1])?)?;

    let mut out = Vec::with_capacity(3 * samples);
    for i in 0..samples {
        let s = fraction(i);
        let psi = a.evolve(&symsector::u_zz(3, s * xi[0])?)?;
        out.push(TrajectorySample { stage: Stage::AB, t: s * xi[0], point: locate(&psi, Stage::AB)? });
    }
    for i in 0..samples {
        let psi = b.evolve(&symsector::u_c(3, fraction(i) * alpha[1], phi[1])?)?;
        out.push(TrajectorySample { stage: Stage::BC, t: xi[0], point: locate(&psi, Stage::BC)? });
    }
    for i in 0..samples {
        let s = fraction(i);
        let psi = c.evolve(&symsector::u_zz(3, s * xi[1])?)?;
        out.push(TrajectorySample { stage: Stage::CD, t: xi[0] + s * xi[1], point: locate(&psi, Stage::CD)? });
    }
    Ok(out)
}

/// `stage,t,x,y,z` rows at 17 significant digits, LF line endings.
pub fn trajectory_csv(samples: &[TrajectorySample]) -> String {
    let mut out = String::from("stage,t,x,y,z\n");
    for s in samples {
        let p = s.point;
        let _ = writeln!(out, "{},{:.16e},{:.16e},{:.16e},{:.16e}", s.stage, s.t, p.x, p.y, p.z);
    }
    out
}
