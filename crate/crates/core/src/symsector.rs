//! Hamiltonians and propagators in the (N+1)-dimensional permutation-symmetric
//! sector, expressed over the Dicke basis `|D^N_a>` (a = number of qubits in
//! `|1>`).
//!
//! Energies are in units of the Ising coupling J and times in units of 1/J
//! (hbar = 1). A control pulse of half-angle `alpha` about the in-plane axis
//! `(cos phi, sin phi, 0)` is `exp(-i alpha S1(phi))` with
//! `S1(phi) = cos(phi) X + sin(phi) Y` summed over all qubits.
//!
//! Phase convention: `<D_a| S1 |D_{a+1}> = e^{-i phi} sqrt((a+1)(N-a))`, which
//! is what the standard Pauli Y gives on the full tensor-product space.

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::linalg::{self, binomial, ComplexMatrix, ONE, ZERO};

const NORM_TOL: f64 = 1e-12;

/// Pure state of the symmetric sector, amplitudes over `|D^N_0> .. |D^N_N>`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricState {
    n_qubits: usize,
    amplitudes: Vec<C64>,
}

impl SymmetricState {
    pub fn new(n_qubits: usize, amplitudes: Vec<C64>) -> Result<Self> {
        if n_qubits == 0 {
            return Err(Error::TooFewQubits { min: 1, got: 0 });
        }
        if amplitudes.len() != n_qubits + 1 {
            return Err(Error::DimensionMismatch {
                expected: n_qubits + 1,
                got: amplitudes.len(),
            });
        }
        let norm = linalg::norm_sqr(&amplitudes);
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(norm));
        }
        Ok(Self { n_qubits, amplitudes })
    }

    /// The Dicke basis state `|D^N_a>`.
    pub fn dicke(n_qubits: usize, a: usize) -> Result<Self> {
        if a > n_qubits {
            return Err(Error::ExcitationOutOfRange { a, n_qubits });
        }
        let mut amplitudes = vec![ZERO; n_qubits + 1];
        amplitudes[a] = ONE;
        Self::new(n_qubits, amplitudes)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    /// `<self|other>`.
    pub fn overlap(&self, other: &SymmetricState) -> C64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Applies a sector operator. The result is not renormalized.
    pub fn evolve(&self, op: &ComplexMatrix) -> Result<Self> {
        let dim = self.amplitudes.len();
        if op.nrows() != dim || op.ncols() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: op.nrows() });
        }
        let v = op * linalg::ComplexVector::from_column_slice(&self.amplitudes);
        Ok(Self { n_qubits: self.n_qubits, amplitudes: v.iter().copied().collect() })
    }
}

fn require_interacting(n_qubits: usize) -> Result<()> {
    if n_qubits < 2 {
        Err(Error::TooFewQubits { min: 2, got: n_qubits })
    } else {
        Ok(())
    }
}

fn require_finite(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(Error::NonFinite { name, value })
    }
}

/// `2 (a - N/2)^2 - N/2`, computed in integers as `((2a - N)^2 - N) / 2`.
fn hzz_doubled(n_qubits: usize, a: usize) -> i64 {
    let d = 2 * a as i64 - n_qubits as i64;
    d * d - n_qubits as i64
}

/// Diagonal of `H_ZZ / J` in the Dicke basis.
pub fn hzz_diagonal(n_qubits: usize) -> Result<Vec<f64>> {
    require_interacting(n_qubits)?;
    Ok((0..=n_qubits)
        .map(|a| hzz_doubled(n_qubits, a) as f64 / 2.0)
        .collect())
}

/// Smallest `P > 0` with `U_ZZ(xi + P) = e^{i theta} U_ZZ(xi)` for every `xi`.
///
/// All eigenvalue gaps of `H_ZZ / J` are even integers; the period is
/// `2 pi / gcd(gaps)`.
pub fn ising_period(n_qubits: usize) -> Result<f64> {
    require_interacting(n_qubits)?;
    fn gcd(a: i64, b: i64) -> i64 {
        if b == 0 { a.abs() } else { gcd(b, a % b) }
    }
    let base = hzz_doubled(n_qubits, 0);
    let g = (1..=n_qubits)
        .map(|a| (hzz_doubled(n_qubits, a) - base).abs())
        .fold(0, gcd);
    // gaps are g/2 in units of J
    Ok(if g == 0 {
        f64::INFINITY
    } else {
        2.0 * std::f64::consts::PI / (g as f64 / 2.0)
    })
}

/// `exp(-i xi H_ZZ / J)`, diagonal in the Dicke basis. Negative `xi` is time
/// reversal.
pub fn u_zz(n_qubits: usize, xi: f64) -> Result<ComplexMatrix> {
    require_finite("xi", xi)?;
    let diag: Vec<C64> = hzz_diagonal(n_qubits)?
        .into_iter()
        .map(|e| C64::from_polar(1.0, -xi * e))
        .collect();
    Ok(linalg::diagonal(&diag))
}

fn s1_coupling(n_qubits: usize, a: usize) -> f64 {
    (((a + 1) * (n_qubits - a)) as f64).sqrt()
}

/// `S1(phi) = cos(phi) X + sin(phi) Y` restricted to the symmetric sector.
pub fn s1_matrix(n_qubits: usize, phi: f64) -> Result<ComplexMatrix> {
    if n_qubits == 0 {
        return Err(Error::TooFewQubits { min: 1, got: 0 });
    }
    require_finite("phi", phi)?;
    let dim = n_qubits + 1;
    let lowering = C64::from_polar(1.0, -phi);
    let mut m = ComplexMatrix::zeros(dim, dim);
    for a in 0..n_qubits {
        let c = s1_coupling(n_qubits, a);
        m[(a, a + 1)] = lowering * c;
        m[(a + 1, a)] = lowering.conj() * c;
    }
    Ok(m)
}

/// Control-pulse propagator `exp(-i alpha S1(phi))`.
pub fn u_c(n_qubits: usize, alpha: f64, phi: f64) -> Result<ComplexMatrix> {
    require_finite("alpha", alpha)?;
    let s1 = s1_matrix(n_qubits, phi)?;
    if alpha == 0.0 {
        return Ok(ComplexMatrix::identity(n_qubits + 1, n_qubits + 1));
    }
    Ok(linalg::expm_hermitian(&s1, alpha))
}

/// Symmetric-sector image of the elementary symmetric operator
/// `S_m = sum_{n_1 < .. < n_m} A_{n_1} .. A_{n_m}`, where `A_n` flips qubit n
/// with phase `e^{-i phi}` on `|1> -> |0>` and `e^{i phi}` on `|0> -> |1>`.
///
/// Flipping `m` qubits of a weight-`b` bitstring, `j` of them ones, lands on
/// weight `a = b + m - 2j`; counting such pairs gives
/// `<D_a|S_m|D_b> = e^{i phi (a-b)} C(N,b) C(b,j) C(N-b,m-j) / sqrt(C(N,a) C(N,b))`.
fn elementary_symmetric(n_qubits: usize, m: usize, phi: f64) -> ComplexMatrix {
    let dim = n_qubits + 1;
    let mut out = ComplexMatrix::zeros(dim, dim);
    for b in 0..dim {
        for j in 0..=m.min(b) {
            if m - j > n_qubits - b {
                continue;
            }
            let a = b + m - 2 * j;
            let count = binomial(n_qubits, b) * binomial(b, j) * binomial(n_qubits - b, m - j);
            let norm = (binomial(n_qubits, a) * binomial(n_qubits, b)).sqrt();
            let phase = C64::from_polar(1.0, phi * (a as f64 - b as f64));
            out[(a, b)] += phase * (count / norm);
        }
    }
    out
}

fn require_closed_form(n_qubits: usize) -> Result<()> {
    if n_qubits == 3 || n_qubits == 4 {
        Ok(())
    } else {
        Err(Error::UnsupportedQubitCount(n_qubits))
    }
}

/// `P_S S_m P_S†` for N = 3 or 4.
pub fn s_m_matrix(n_qubits: usize, m: usize, phi: f64) -> Result<ComplexMatrix> {
    require_closed_form(n_qubits)?;
    if m > n_qubits {
        return Err(Error::OrderOutOfRange { m, n_qubits });
    }
    require_finite("phi", phi)?;
    Ok(elementary_symmetric(n_qubits, m, phi))
}

/// Control propagator from the binomial expansion
/// `U_C = sum_m cos^{N-m}(alpha) (-i sin alpha)^m S_m`, for N = 3 or 4.
pub fn u_c_closed_form(n_qubits: usize, alpha: f64, phi: f64) -> Result<ComplexMatrix> {
    require_closed_form(n_qubits)?;
    require_finite("alpha", alpha)?;
    require_finite("phi", phi)?;
    let (sin, cos) = alpha.sin_cos();
    let minus_i_sin = C64::new(0.0, -sin);
    let dim = n_qubits + 1;
    let mut out = ComplexMatrix::zeros(dim, dim);
    for m in 0..=n_qubits {
        let weight = minus_i_sin.powu(m as u32) * cos.powi((n_qubits - m) as i32);
        out += elementary_symmetric(n_qubits, m, phi) * weight;
    }
    Ok(out)
}

/// Cached propagator factory for one qubit count.
///
/// `S1(phi) = D(phi) S1(0) D(phi)†` with `D = diag(e^{i a phi})`, so a single
/// real-symmetric eigendecomposition of `S1(0)` serves every control pulse.
#[derive(Debug, Clone)]
pub struct SymmetricSector {
    n_qubits: usize,
    hzz: Vec<f64>,
    s1_eigenvalues: Vec<f64>,
    s1_eigenvectors: DMatrix<f64>,
}

impl SymmetricSector {
    pub fn new(n_qubits: usize) -> Result<Self> {
        let hzz = hzz_diagonal(n_qubits)?;
        let dim = n_qubits + 1;
        let mut s1 = DMatrix::<f64>::zeros(dim, dim);
        for a in 0..n_qubits {
            let c = s1_coupling(n_qubits, a);
            s1[(a, a + 1)] = c;
            s1[(a + 1, a)] = c;
        }
        let eig = s1.symmetric_eigen();
        Ok(Self {
            n_qubits,
            hzz,
            s1_eigenvalues: eig.eigenvalues.iter().copied().collect(),
            s1_eigenvectors: eig.eigenvectors,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.n_qubits + 1
    }

    pub fn hzz_diagonal(&self) -> &[f64] {
        &self.hzz
    }

    pub fn u_zz(&self, xi: f64) -> ComplexMatrix {
        let diag: Vec<C64> = self.hzz.iter().map(|e| C64::from_polar(1.0, -xi * e)).collect();
        linalg::diagonal(&diag)
    }

    pub fn u_c(&self, alpha: f64, phi: f64) -> ComplexMatrix {
        let dim = self.dim();
        let w = &self.s1_eigenvectors;
        let phases: Vec<C64> = self
            .s1_eigenvalues
            .iter()
            .map(|l| C64::from_polar(1.0, -alpha * l))
            .collect();
        let mut u = ComplexMatrix::zeros(dim, dim);
        for r in 0..dim {
            for c in 0..dim {
                let core: C64 = (0..dim).map(|k| phases[k] * (w[(r, k)] * w[(c, k)])).sum();
                u[(r, c)] = core * C64::from_polar(1.0, phi * (r as f64 - c as f64));
            }
        }
        u
    }

    pub fn apply_u_zz(&self, xi: f64, state: &mut [C64]) {
        for (amp, e) in state.iter_mut().zip(&self.hzz) {
            *amp *= C64::from_polar(1.0, -xi * e);
        }
    }

    /// In-place `state <- U_C(alpha, phi) state` in O(dim^2).
    pub fn apply_u_c(&self, alpha: f64, phi: f64, state: &mut [C64]) {
        if alpha == 0.0 {
            return;
        }
        let dim = self.dim();
        debug_assert_eq!(state.len(), dim);
        let w = &self.s1_eigenvectors;
        // D† state
        for (a, amp) in state.iter_mut().enumerate() {
            *amp *= C64::from_polar(1.0, -phi * a as f64);
        }
        let mut coeffs = vec![ZERO; dim];
        for (k, coeff) in coeffs.iter_mut().enumerate() {
            let proj: C64 = (0..dim).map(|a| state[a] * w[(a, k)]).sum();
            *coeff = proj * C64::from_polar(1.0, -alpha * self.s1_eigenvalues[k]);
        }
        for (a, amp) in state.iter_mut().enumerate() {
            let v: C64 = (0..dim).map(|k| coeffs[k] * w[(a, k)]).sum();
            *amp = v * C64::from_polar(1.0, phi * a as f64);
        }
    }
}
