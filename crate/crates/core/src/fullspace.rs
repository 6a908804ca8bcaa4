//! Brute-force reference dynamics on the full 2^N-dimensional Hilbert space.
//!
//! Used only to validate the symmetric-sector code. Basis index bits are read
//! with qubit 1 as the most significant bit and `|0>` before `|1>`, so index 0
//! is `|0...0>`.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::linalg::{self, ComplexMatrix, ComplexVector, I, ONE, ZERO};
use crate::pulseseq::PulseSequence;

pub const MAX_QUBITS: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pauli {
    X,
    Y,
    Z,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FullState {
    n_qubits: usize,
    amplitudes: Vec<C64>,
}

impl FullState {
    pub fn new(n_qubits: usize, amplitudes: Vec<C64>) -> Result<Self> {
        check_cap(n_qubits, 1)?;
        let dim = 1usize << n_qubits;
        if amplitudes.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: amplitudes.len() });
        }
        let norm = linalg::norm_sqr(&amplitudes);
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::NotNormalized(norm));
        }
        Ok(Self { n_qubits, amplitudes })
    }

    /// Computational basis state from a bitstring such as `"110"`.
    pub fn basis(bits: &str) -> Result<Self> {
        let n = bits.len();
        check_cap(n, 1)?;
        let index = usize::from_str_radix(bits, 2).map_err(|_| Error::DimensionMismatch {
            expected: n,
            got: 0,
        })?;
        let mut amps = vec![ZERO; 1 << n];
        amps[index] = ONE;
        Self::new(n, amps)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn overlap(&self, other: &FullState) -> C64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }
}

fn check_cap(n_qubits: usize, min: usize) -> Result<()> {
    if n_qubits < min {
        Err(Error::TooFewQubits { min, got: n_qubits })
    } else if n_qubits > MAX_QUBITS {
        Err(Error::DimensionCap { cap: MAX_QUBITS, got: n_qubits })
    } else {
        Ok(())
    }
}

#[inline]
fn bit_mask(n_qubits: usize, qubit: usize) -> usize {
    1 << (n_qubits - qubit)
}

/// Pauli operator on one qubit (1-based), identity elsewhere.
pub fn pauli_on_qubit(n_qubits: usize, qubit: usize, which: Pauli) -> Result<ComplexMatrix> {
    check_cap(n_qubits, 1)?;
    if qubit == 0 || qubit > n_qubits {
        return Err(Error::QubitIndexOutOfRange { index: qubit, n_qubits });
    }
    let dim = 1 << n_qubits;
    let mask = bit_mask(n_qubits, qubit);
    let mut m = ComplexMatrix::zeros(dim, dim);
    for i in 0..dim {
        let is_one = i & mask != 0;
        match which {
            Pauli::X => m[(i ^ mask, i)] = ONE,
            Pauli::Y => m[(i ^ mask, i)] = if is_one { -I } else { I },
            Pauli::Z => m[(i, i)] = if is_one { -ONE } else { ONE },
        }
    }
    Ok(m)
}

/// Diagonal of `sum_{n<n'} Z_n Z_n'` over the computational basis.
pub fn full_hzz_diagonal(n_qubits: usize) -> Result<Vec<f64>> {
    check_cap(n_qubits, 2)?;
    Ok((0..1usize << n_qubits)
        .map(|i| {
            let z: Vec<f64> = (1..=n_qubits)
                .map(|q| if i & bit_mask(n_qubits, q) != 0 { -1.0 } else { 1.0 })
                .collect();
            let mut e = 0.0;
            for a in 0..n_qubits {
                for b in a + 1..n_qubits {
                    e += z[a] * z[b];
                }
            }
            e
        })
        .collect())
}

/// `H_ZZ / J` as a dense 2^N matrix.
pub fn full_hzz(n_qubits: usize) -> Result<ComplexMatrix> {
    let diag: Vec<C64> = full_hzz_diagonal(n_qubits)?
        .into_iter()
        .map(|e| C64::new(e, 0.0))
        .collect();
    Ok(linalg::diagonal(&diag))
}

/// `cos(phi) sum_n X_n + sin(phi) sum_n Y_n`.
pub fn full_control_generator(n_qubits: usize, phi: f64) -> Result<ComplexMatrix> {
    check_cap(n_qubits, 2)?;
    let (s, c) = phi.sin_cos();
    let mut total = ComplexMatrix::zeros(1 << n_qubits, 1 << n_qubits);
    for q in 1..=n_qubits {
        total += pauli_on_qubit(n_qubits, q, Pauli::X)? * C64::new(c, 0.0);
        total += pauli_on_qubit(n_qubits, q, Pauli::Y)? * C64::new(s, 0.0);
    }
    Ok(total)
}

/// `X^{(x)N}` or `Y^{(x)N}`.
pub fn parity_operator(n_qubits: usize, which: Pauli) -> Result<ComplexMatrix> {
    check_cap(n_qubits, 1)?;
    let dim = 1usize << n_qubits;
    let mut m = ComplexMatrix::identity(dim, dim);
    for q in 1..=n_qubits {
        m = pauli_on_qubit(n_qubits, q, which)? * m;
    }
    Ok(m)
}

/// Equal-weight superposition of all bitstrings of Hamming weight `a`.
pub fn dicke_state_full(n_qubits: usize, a: usize) -> Result<FullState> {
    check_cap(n_qubits, 1)?;
    if a > n_qubits {
        return Err(Error::ExcitationOutOfRange { a, n_qubits });
    }
    let amp = C64::new(linalg::binomial(n_qubits, a).sqrt().recip(), 0.0);
    let amplitudes = (0..1usize << n_qubits)
        .map(|i| if i.count_ones() as usize == a { amp } else { ZERO })
        .collect();
    FullState::new(n_qubits, amplitudes)
}

/// `P_S`: the (N+1) x 2^N isometry whose rows are the Dicke states.
pub fn symmetric_isometry(n_qubits: usize) -> Result<ComplexMatrix> {
    check_cap(n_qubits, 2)?;
    let dim = 1usize << n_qubits;
    let mut p = ComplexMatrix::zeros(n_qubits + 1, dim);
    for a in 0..=n_qubits {
        let d = dicke_state_full(n_qubits, a)?;
        for (i, z) in d.amplitudes.iter().enumerate() {
            p[(a, i)] = z.conj();
        }
    }
    Ok(p)
}

/// `P_S op P_S†`.
pub fn project_to_sector(op: &ComplexMatrix, n_qubits: usize) -> Result<ComplexMatrix> {
    let p = symmetric_isometry(n_qubits)?;
    if op.nrows() != p.ncols() {
        return Err(Error::DimensionMismatch { expected: p.ncols(), got: op.nrows() });
    }
    Ok(&p * op * p.adjoint())
}

/// Sector amplitudes `P_S |psi>`.
pub fn sector_amplitudes(state: &FullState) -> Result<Vec<C64>> {
    let p = symmetric_isometry(state.n_qubits)?;
    let v = p * ComplexVector::from_column_slice(&state.amplitudes);
    Ok(v.iter().copied().collect())
}

/// `|| (I - P_S† P_S) |psi> ||`.
pub fn sector_leakage(state: &FullState) -> Result<f64> {
    let p = symmetric_isometry(state.n_qubits)?;
    let psi = ComplexVector::from_column_slice(&state.amplitudes);
    let inside = p.adjoint() * (&p * &psi);
    Ok((psi - inside).norm())
}

/// In-place single-qubit gate on every qubit.
fn apply_to_every_qubit(n_qubits: usize, gate: &ComplexMatrix, amps: &mut [C64]) {
    for q in 1..=n_qubits {
        let mask = bit_mask(n_qubits, q);
        for i in 0..amps.len() {
            if i & mask == 0 {
                let j = i | mask;
                let (a0, a1) = (amps[i], amps[j]);
                amps[i] = gate[(0, 0)] * a0 + gate[(0, 1)] * a1;
                amps[j] = gate[(1, 0)] * a0 + gate[(1, 1)] * a1;
            }
        }
    }
}

/// Runs the five-stage sequence on an arbitrary full-space state.
///
/// The global control `exp(-i alpha sum_n A_n)` factorizes into the
/// commuting single-qubit exponentials `exp(-i alpha A_n)`; each is taken
/// from the 2x2 Hermitian eigendecomposition of `A = cos(phi) X + sin(phi) Y`.
pub fn evolve_full(seq: &PulseSequence, initial: &FullState) -> Result<FullState> {
    let n = seq.n_qubits();
    if initial.n_qubits != n {
        return Err(Error::DimensionMismatch { expected: n, got: initial.n_qubits });
    }
    check_cap(n, 2)?;
    let energies = full_hzz_diagonal(n)?;
    let mut amps = initial.amplitudes.clone();

    let control = |alpha: f64, phi: f64, amps: &mut [C64]| {
        let (s, c) = phi.sin_cos();
        let generator = ComplexMatrix::from_row_slice(
            2,
            2,
            &[ZERO, C64::new(c, -s), C64::new(c, s), ZERO],
        );
        let gate = linalg::expm_hermitian(&generator, alpha);
        apply_to_every_qubit(n, &gate, amps);
    };
    let ising = |xi: f64, amps: &mut [C64]| {
        for (z, e) in amps.iter_mut().zip(&energies) {
            *z *= C64::from_polar(1.0, -xi * e);
        }
    };

    let (xi, alpha, phi) = (seq.xi(), seq.alpha(), seq.phi());
    control(alpha[0], phi[0], &mut amps);
    ising(xi[0], &mut amps);
    control(alpha[1], phi[1], &mut amps);
    ising(xi[1], &mut amps);
    control(alpha[2], phi[2], &mut amps);

    Ok(FullState { n_qubits: n, amplitudes: amps })
}

/// Dense 2^N propagator of the sequence, exponentiating the full generators.
pub fn full_propagator(seq: &PulseSequence) -> Result<ComplexMatrix> {
    let n = seq.n_qubits();
    let hzz = full_hzz(n)?;
    let (xi, alpha, phi) = (seq.xi(), seq.alpha(), seq.phi());
    let stage = |j: usize| -> Result<ComplexMatrix> {
        Ok(linalg::expm_hermitian(&full_control_generator(n, phi[j])?, alpha[j]))
    };
    Ok(stage(2)?
        * linalg::expm_hermitian(&hzz, xi[1])
        * stage(1)?
        * linalg::expm_hermitian(&hzz, xi[0])
        * stage(0)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{hermiticity_defect, max_abs_diff};

    fn hzz_eigen_on(bits: &str) -> f64 {
        let n = bits.len();
        let idx = usize::from_str_radix(bits, 2).unwrap();
        full_hzz_diagonal(n).unwrap()[idx]
    }

    #[test]
    fn pauli_examples() {
        let z = pauli_on_qubit(1, 1, Pauli::Z).unwrap();
        assert_eq!(z, linalg::diagonal(&[ONE, -ONE]));

        let x2 = pauli_on_qubit(2, 2, Pauli::X).unwrap();
        // I (x) X swaps |00>,|01> and |10>,|11>
        let mut expected = ComplexMatrix::zeros(4, 4);
        for (r, c) in [(0, 1), (1, 0), (2, 3), (3, 2)] {
            expected[(r, c)] = ONE;
        }
        assert_eq!(x2, expected);

        let y = pauli_on_qubit(3, 2, Pauli::Y).unwrap();
        assert!(max_abs_diff(&(&y * &y), &ComplexMatrix::identity(8, 8)) < 1e-15);
    }

    #[test]
    fn paulis_are_hermitian_involutory_traceless() {
        for n in 1..=4 {
            for q in 1..=n {
                for which in [Pauli::X, Pauli::Y, Pauli::Z] {
                    let m = pauli_on_qubit(n, q, which).unwrap();
                    let dim = 1 << n;
                    assert_eq!(hermiticity_defect(&m), 0.0);
                    assert_eq!(&m * &m, ComplexMatrix::identity(dim, dim));
                    assert_eq!(m.trace(), ZERO);
                }
            }
        }
    }

    #[test]
    fn pauli_argument_errors() {
        assert_eq!(
            pauli_on_qubit(3, 4, Pauli::X),
            Err(Error::QubitIndexOutOfRange { index: 4, n_qubits: 3 })
        );
        assert_eq!(
            pauli_on_qubit(3, 0, Pauli::X),
            Err(Error::QubitIndexOutOfRange { index: 0, n_qubits: 3 })
        );
        assert_eq!(pauli_on_qubit(13, 1, Pauli::Z), Err(Error::DimensionCap { cap: 12, got: 13 }));
    }

    #[test]
    fn hzz_eigenvalues() {
        assert_eq!(hzz_eigen_on("000"), 3.0);
        assert_eq!(hzz_eigen_on("110"), -1.0);
        assert_eq!(hzz_eigen_on("01"), -1.0);
        for n in 2..=8 {
            let diag = full_hzz_diagonal(n).unwrap();
            for (i, e) in diag.iter().enumerate() {
                let a = i.count_ones() as f64;
                let half = n as f64 / 2.0;
                assert_eq!(*e, 2.0 * (a - half).powi(2) - half);
            }
        }
    }

    #[test]
    fn hzz_matches_pauli_products() {
        let n = 3;
        let mut h = ComplexMatrix::zeros(8, 8);
        for a in 1..=n {
            for b in a + 1..=n {
                h += pauli_on_qubit(n, a, Pauli::Z).unwrap() * pauli_on_qubit(n, b, Pauli::Z).unwrap();
            }
        }
        assert_eq!(h, full_hzz(3).unwrap());
    }

    #[test]
    fn control_generator_examples() {
        let mut xsum = ComplexMatrix::zeros(8, 8);
        let mut ysum = ComplexMatrix::zeros(8, 8);
        for q in 1..=3 {
            xsum += pauli_on_qubit(3, q, Pauli::X).unwrap();
            ysum += pauli_on_qubit(3, q, Pauli::Y).unwrap();
        }
        assert!(max_abs_diff(&full_control_generator(3, 0.0).unwrap(), &xsum) < 1e-15);
        assert!(max_abs_diff(&full_control_generator(3, std::f64::consts::FRAC_PI_2).unwrap(), &ysum) < 1e-15);

        let eig = full_control_generator(2, 0.0).unwrap().symmetric_eigen();
        let mut vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
        vals.sort_by(f64::total_cmp);
        for (v, e) in vals.iter().zip([-2.0, 0.0, 0.0, 2.0]) {
            assert!((v - e).abs() < 1e-12);
        }
    }

    #[test]
    fn control_generator_commutes_with_qubit_swaps() {
        // swap of qubits 1 and 3 in a 3-qubit register
        let n = 3;
        let mut swap = ComplexMatrix::zeros(8, 8);
        for i in 0..8usize {
            let b1 = (i >> 2) & 1;
            let b3 = i & 1;
            let j = (i & 0b010) | (b3 << 2) | b1;
            swap[(j, i)] = ONE;
        }
        let g = full_control_generator(n, 0.77).unwrap();
        assert!(max_abs_diff(&(&swap * &g), &(&g * &swap)) < 1e-14);
    }

    #[test]
    fn dicke_states() {
        let d = dicke_state_full(3, 2).unwrap();
        let r = 1.0 / 3f64.sqrt();
        for (i, z) in d.amplitudes().iter().enumerate() {
            let expected = if [0b110, 0b101, 0b011].contains(&i) { r } else { 0.0 };
            assert!((z.re - expected).abs() < 1e-15 && z.im == 0.0);
        }
        assert_eq!(dicke_state_full(3, 0).unwrap(), FullState::basis("000").unwrap());
        let d42 = dicke_state_full(4, 2).unwrap();
        let support: Vec<_> = d42.amplitudes().iter().filter(|z| z.norm() > 0.0).collect();
        assert_eq!(support.len(), 6);
        assert!(support.iter().all(|z| (z.re - 1.0 / 6f64.sqrt()).abs() < 1e-15));
        assert!(dicke_state_full(3, 4).is_err());
    }

    #[test]
    fn isometry_is_orthonormal() {
        for n in 2..=8 {
            let p = symmetric_isometry(n).unwrap();
            assert_eq!(p.shape(), (n + 1, 1 << n));
            let gram = &p * p.adjoint();
            assert!(max_abs_diff(&gram, &ComplexMatrix::identity(n + 1, n + 1)) <= 1e-12);
        }
        let projected = project_to_sector(&full_hzz(3).unwrap(), 3).unwrap();
        let expected = linalg::diagonal(&[3.0, -1.0, -1.0, 3.0].map(|x| C64::new(x, 0.0)));
        assert!(max_abs_diff(&projected, &expected) < 1e-14);
    }

    #[test]
    fn product_route_matches_dense_route() {
        let seq = PulseSequence::new(4, 2, [0.31, 0.77], [0.4, -1.2, 2.2], [0.3, 1.9, 0.1]).unwrap();
        let initial = FullState::basis("0110").unwrap();
        let by_product = evolve_full(&seq, &initial).unwrap();
        let dense = full_propagator(&seq).unwrap()
            * ComplexVector::from_column_slice(initial.amplitudes());
        for (a, b) in by_product.amplitudes().iter().zip(dense.iter()) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn evolve_full_identity_and_mismatch() {
        let zero = PulseSequence::zero(3, 0).unwrap();
        let start = FullState::basis("000").unwrap();
        let out = evolve_full(&zero, &start).unwrap();
        assert!(max_abs_diff(
            &ComplexMatrix::from_column_slice(8, 1, out.amplitudes()),
            &ComplexMatrix::from_column_slice(8, 1, start.amplitudes()),
        ) < 1e-14);
        let wrong = FullState::basis("0000").unwrap();
        assert!(matches!(evolve_full(&zero, &wrong), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn reference_sequence_in_full_space() {
        let seq = PulseSequence::d3_2_reference();
        let out = evolve_full(&seq, &FullState::basis("000").unwrap()).unwrap();
        let target = dicke_state_full(3, 2).unwrap();
        assert!((target.overlap(&out).norm() - 1.0).abs() <= 1e-9);
    }
}
