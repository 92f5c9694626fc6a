//! Unsharp basis measurements, their Lüders instruments, and complete sets of
//! mutually unbiased bases.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{check_dimension, check_unit_interval, Error, Result};
use crate::qcore::{
    identity, kron, max_abs_diff, projector, swap_operator, unitarity_error, ComplexMatrix,
    ComplexVector, ONE, UNITARY_TOL, ZERO,
};

/// A measurement along an orthonormal basis mixed with white noise:
/// `B_b = η |φ_b><φ_b| + (1 - η) 1/d`.
///
/// Column `b` of `basis` is `|φ_b>`.
#[derive(Debug, Clone, PartialEq)]
pub struct NoisyBasisMeasurement {
    basis: ComplexMatrix,
    eta: f64,
}

impl NoisyBasisMeasurement {
    pub fn new(basis: ComplexMatrix, eta: f64) -> Result<Self> {
        check_unit_interval("eta", eta)?;
        check_dimension(basis.nrows())?;
        let err = unitarity_error(&basis);
        if err > UNITARY_TOL {
            return Err(Error::NotUnitary(err));
        }
        Ok(Self { basis, eta })
    }

    /// Measurement in the computational basis.
    pub fn computational(d: usize, eta: f64) -> Result<Self> {
        Self::new(identity(d), eta)
    }

    pub fn d(&self) -> usize {
        self.basis.nrows()
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn basis(&self) -> &ComplexMatrix {
        &self.basis
    }

    fn basis_projector(&self, b: usize) -> ComplexMatrix {
        projector(&self.basis.column(b).into_owned())
    }

    pub fn povm_elements(&self) -> Vec<ComplexMatrix> {
        let d = self.d();
        let noise = identity(d).scale((1.0 - self.eta) / d as f64);
        (0..d)
            .map(|b| self.basis_projector(b).scale(self.eta) + &noise)
            .collect()
    }

    /// Lüders Kraus operators `K_b = √B_b`.
    pub fn luders_kraus(&self) -> KrausSet {
        let d = self.d();
        let (on, off) = luders_coefficients(d, self.eta);
        let diag = |b: usize| {
            ComplexMatrix::from_fn(d, d, |i, j| match (i == j, i == b) {
                (true, true) => Complex64::new(on, 0.0),
                (true, false) => Complex64::new(off, 0.0),
                _ => ZERO,
            })
        };
        let operators = (0..d)
            .map(|b| &self.basis * diag(b) * self.basis.adjoint())
            .collect();
        KrausSet { operators }
    }
}

/// Eigenvalues of a Lüders operator: `√((1 + (d-1)η)/d)` on its own basis
/// vector and `√((1 - η)/d)` on the orthogonal complement.
pub fn luders_coefficients(d: usize, eta: f64) -> (f64, f64) {
    let df = d as f64;
    let on = ((1.0 + (df - 1.0) * eta) / df).sqrt();
    let off = ((1.0 - eta) / df).sqrt();
    (on, off)
}

/// One Kraus operator per outcome.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausSet {
    pub operators: Vec<ComplexMatrix>,
}

impl KrausSet {
    pub fn d(&self) -> usize {
        self.operators.first().map_or(0, |k| k.nrows())
    }

    /// `max |Σ K_b^dag K_b - 1|` entrywise.
    pub fn completeness_error(&self) -> f64 {
        let d = self.d();
        let sum = self
            .operators
            .iter()
            .fold(ComplexMatrix::zeros(d, d), |acc, k| acc + k.adjoint() * k);
        max_abs_diff(&sum, &identity(d))
    }

    /// Conjugate every operator by `u`: `K_b -> U K_b U^dag`.
    pub fn rotated(&self, u: &ComplexMatrix) -> KrausSet {
        KrausSet {
            operators: self.operators.iter().map(|k| u * k * u.adjoint()).collect(),
        }
    }
}

/// Fidelity `F` and measurement strength `G` of the qubit Lüders instrument.
pub fn qubit_merit(eta: f64) -> Result<(f64, f64)> {
    check_unit_interval("eta", eta)?;
    Ok(((1.0 - eta * eta).sqrt(), eta))
}

/// `d + 1` pairwise mutually unbiased bases in dimension `d`.
#[derive(Debug, Clone, PartialEq)]
pub struct MubSet {
    d: usize,
    bases: Vec<ComplexMatrix>,
}

impl MubSet {
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn bases(&self) -> &[ComplexMatrix] {
        &self.bases
    }

    /// All `d(d+1)` basis vectors.
    pub fn vectors(&self) -> Vec<ComplexVector> {
        self.bases
            .iter()
            .flat_map(|u| u.column_iter().map(|c| c.into_owned()))
            .collect()
    }

    /// Largest deviation of `|<φ|ψ>|²` from `1/d` over vectors from distinct
    /// bases.
    pub fn unbiasedness_error(&self) -> f64 {
        let target = 1.0 / self.d as f64;
        let mut worst: f64 = 0.0;
        for (i, a) in self.bases.iter().enumerate() {
            for b in &self.bases[i + 1..] {
                let overlaps = a.adjoint() * b;
                for z in overlaps.iter() {
                    worst = worst.max((z.norm_sqr() - target).abs());
                }
            }
        }
        worst
    }
}

fn is_prime(n: usize) -> bool {
    n >= 2
        && (2..)
            .take_while(|k| k * k <= n)
            .all(|k| !n.is_multiple_of(k))
}

/// Complete set of MUBs for prime `d` or `d = 4`.
///
/// `d = 2` gives the eigenbases of σ_z, σ_x, σ_y. Odd primes use the
/// Wootters–Fields construction: the computational basis plus, for each
/// `k` in `0..d`, the vectors `Σ_x ω^{k x² + m x} |x> / √d`. `d = 4` is the
/// standard two-qubit table.
pub fn mub_bases(d: usize) -> Result<MubSet> {
    let bases = match d {
        2 => qubit_mubs(),
        4 => two_qubit_mubs(),
        _ if is_prime(d) => odd_prime_mubs(d),
        _ => return Err(Error::UnsupportedMubDimension(d)),
    };
    Ok(MubSet { d, bases })
}

fn qubit_mubs() -> Vec<ComplexMatrix> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let r = |x: f64| Complex64::new(x * h, 0.0);
    let i = |x: f64| Complex64::new(0.0, x * h);
    vec![
        identity(2),
        ComplexMatrix::from_row_slice(2, 2, &[r(1.0), r(1.0), r(1.0), r(-1.0)]),
        ComplexMatrix::from_row_slice(2, 2, &[r(1.0), r(1.0), i(1.0), i(-1.0)]),
    ]
}

fn two_qubit_mubs() -> Vec<ComplexMatrix> {
    // Rows below are the basis vectors; each matrix is transposed so that the
    // vectors end up as columns.
    const O: Complex64 = ONE;
    const N: Complex64 = Complex64::new(-1.0, 0.0);
    const I: Complex64 = Complex64::new(0.0, 1.0);
    const J: Complex64 = Complex64::new(0.0, -1.0);
    let tables: [[Complex64; 16]; 4] = [
        [O, O, O, O, O, O, N, N, O, N, N, O, O, N, O, N],
        [O, N, J, J, O, N, I, I, O, O, I, J, O, O, J, I],
        [O, J, J, N, O, J, I, O, O, I, I, N, O, I, J, O],
        [O, J, N, J, O, J, O, I, O, I, N, I, O, I, O, J],
    ];
    std::iter::once(identity(4))
        .chain(tables.iter().map(|t| {
            ComplexMatrix::from_row_slice(4, 4, t)
                .transpose()
                .scale(0.5)
        }))
        .collect()
}

fn odd_prime_mubs(d: usize) -> Vec<ComplexMatrix> {
    let amp = 1.0 / (d as f64).sqrt();
    let omega = |e: usize| Complex64::from_polar(amp, 2.0 * PI * (e % d) as f64 / d as f64);
    std::iter::once(identity(d))
        .chain((0..d).map(|k| ComplexMatrix::from_fn(d, d, |x, m| omega(k * x * x + m * x))))
        .collect()
}

/// How far `vectors` is from being a complex projective 2-design.
///
/// Returns the largest entrywise difference between the frame average
/// `(1/N) Σ (|φ><φ|)^{⊗2}` and `2 P_sym / (d(d+1))`, where
/// `P_sym = (1 ⊗ 1 + V)/2`.
pub fn verify_projective_2design(vectors: &[ComplexVector], d: usize) -> Result<f64> {
    check_dimension(d)?;
    if let Some(bad) = vectors.iter().find(|v| v.len() != d) {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: bad.len(),
        });
    }
    let n = d * d;
    let mut frame = ComplexMatrix::zeros(n, n);
    for v in vectors {
        let p = projector(v);
        frame += kron(&p, &p);
    }
    frame.unscale_mut(vectors.len().max(1) as f64);
    let df = d as f64;
    let target = (identity(n) + swap_operator(d)).scale(1.0 / (df * (df + 1.0)));
    Ok(max_abs_diff(&frame, &target))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::{haar_unitary, partial_trace_b, RngStream};
    use crate::states::{Family, SymmetricState};
    use approx::assert_abs_diff_eq;

    fn sigma_z() -> ComplexMatrix {
        ComplexMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, -ONE])
    }

    #[test]
    fn projective_povm_is_computational_projectors() {
        let m = NoisyBasisMeasurement::computational(3, 1.0).unwrap();
        for (b, elem) in m.povm_elements().iter().enumerate() {
            let expected = projector(&crate::qcore::basis_vector(3, b));
            assert!(max_abs_diff(elem, &expected) < 1e-15);
        }
    }

    #[test]
    fn zero_eta_is_white_noise() {
        let mut rng = RngStream::new(1);
        let m = NoisyBasisMeasurement::new(haar_unitary(3, &mut rng), 0.0).unwrap();
        for elem in m.povm_elements() {
            assert!(max_abs_diff(&elem, &identity(3).scale(1.0 / 3.0)) < 1e-14);
        }
        let root = identity(3).scale(1.0 / 3f64.sqrt());
        for k in &m.luders_kraus().operators {
            assert!(max_abs_diff(k, &root) < 1e-14);
        }
    }

    #[test]
    fn qubit_povm_matches_bloch_form() {
        let m = NoisyBasisMeasurement::computational(2, 0.5).unwrap();
        let elems = m.povm_elements();
        let plus = (identity(2) + sigma_z().scale(0.5)).scale(0.5);
        let minus = (identity(2) - sigma_z().scale(0.5)).scale(0.5);
        assert!(max_abs_diff(&elems[0], &plus) < 1e-15);
        assert!(max_abs_diff(&elems[1], &minus) < 1e-15);
    }

    #[test]
    fn projective_kraus_are_projectors() {
        let mut rng = RngStream::new(2);
        let u = haar_unitary(4, &mut rng);
        let m = NoisyBasisMeasurement::new(u.clone(), 1.0).unwrap();
        for (b, k) in m.luders_kraus().operators.iter().enumerate() {
            let p = projector(&u.column(b).into_owned());
            assert!(max_abs_diff(k, &p) < 1e-12);
        }
    }

    #[test]
    fn qubit_kraus_closed_form() {
        let mut rng = RngStream::new(3);
        for &eta in &[0.1, 0.37, 0.8] {
            let u = haar_unitary(2, &mut rng);
            let m = NoisyBasisMeasurement::new(u.clone(), eta).unwrap();
            let kraus = m.luders_kraus();
            let plus = projector(&u.column(0).into_owned());
            let minus = projector(&u.column(1).into_owned());
            let expected = (plus.scale((1.0 + eta).sqrt()) + minus.scale((1.0 - eta).sqrt()))
                .scale(0.5f64.sqrt());
            assert!(max_abs_diff(&kraus.operators[0], &expected) < 1e-12);
        }
    }

    #[test]
    fn kraus_square_to_povm_and_complete() {
        let mut rng = RngStream::new(4);
        for d in [2, 3, 5] {
            for k in 0..=10 {
                let eta = k as f64 / 10.0;
                let m = NoisyBasisMeasurement::new(haar_unitary(d, &mut rng), eta).unwrap();
                let kraus = m.luders_kraus();
                assert!(kraus.completeness_error() < 1e-12);
                let povm = m.povm_elements();
                let total = povm.iter().fold(ComplexMatrix::zeros(d, d), |a, e| a + e);
                assert!(max_abs_diff(&total, &identity(d)) < 1e-12);
                for (kb, eb) in kraus.operators.iter().zip(&povm) {
                    assert!(max_abs_diff(&(kb.adjoint() * kb), eb) < 1e-12);
                    assert!(crate::qcore::hermitian_eigenvalues(eb)[0] >= -1e-12);
                }
            }
        }
    }

    #[test]
    fn rejects_non_unitary_basis() {
        let err = NoisyBasisMeasurement::new(identity(2).scale(2.0), 0.5).unwrap_err();
        assert!(matches!(err, Error::NotUnitary(_)));
        assert!(NoisyBasisMeasurement::computational(2, 1.5).is_err());
    }

    #[test]
    fn qubit_merit_values() {
        assert_eq!(qubit_merit(0.0).unwrap(), (1.0, 0.0));
        assert_eq!(qubit_merit(1.0).unwrap(), (0.0, 1.0));
        let (f, g) = qubit_merit(0.6).unwrap();
        assert_abs_diff_eq!(f, 0.8, epsilon = 1e-15);
        assert_eq!(g, 0.6);
    }

    #[test]
    fn mubs_are_unbiased() {
        for d in [2, 3, 4, 5, 7, 11] {
            let set = mub_bases(d).unwrap();
            assert_eq!(set.bases().len(), d + 1);
            for u in set.bases() {
                assert!(unitarity_error(u) < 1e-12, "d={d}");
            }
            assert!(set.unbiasedness_error() < 1e-10, "d={d}");
        }
    }

    #[test]
    fn qubit_mubs_cross_overlaps() {
        let set = mub_bases(2).unwrap();
        let vectors = set.vectors();
        let mut cross = 0;
        for i in 0..6 {
            for j in 0..6 {
                if i / 2 != j / 2 {
                    let o = vectors[i].dotc(&vectors[j]).norm_sqr();
                    assert_abs_diff_eq!(o, 0.5, epsilon = 1e-14);
                    cross += 1;
                }
            }
        }
        // 12 unordered pairs, each counted twice
        assert_eq!(cross, 24);
    }

    #[test]
    fn unsupported_mub_dimension() {
        assert_eq!(mub_bases(6).unwrap_err(), Error::UnsupportedMubDimension(6));
        assert!(mub_bases(9).is_err());
    }

    #[test]
    fn two_design_deficit() {
        for d in [2, 3, 4, 5] {
            let set = mub_bases(d).unwrap();
            assert!(
                verify_projective_2design(&set.vectors(), d).unwrap() < 1e-10,
                "d={d}"
            );
        }
        let single: Vec<_> = identity(2).column_iter().map(|c| c.into_owned()).collect();
        assert!(verify_projective_2design(&single, 2).unwrap() > 0.01);
    }

    #[test]
    fn unsharpness_transfers_into_state() {
        let mut rng = RngStream::new(5);
        for family in Family::ALL {
            for d in 2..=5 {
                for _ in 0..4 {
                    let u = haar_unitary(d, &mut rng);
                    let (eta, p) = (0.63, 0.82);
                    let noisy = NoisyBasisMeasurement::new(u.clone(), eta).unwrap();
                    let sharp = NoisyBasisMeasurement::new(u, 1.0).unwrap();
                    let rho = SymmetricState::new(family, d, p)
                        .unwrap()
                        .to_density_matrix();
                    let rho_eff = SymmetricState::new(family, d, eta * p)
                        .unwrap()
                        .to_density_matrix();
                    for (bn, bs) in noisy.povm_elements().iter().zip(sharp.povm_elements()) {
                        let lhs = partial_trace_b(&(kron(&identity(d), bn) * &rho), d).unwrap();
                        let rhs =
                            partial_trace_b(&(kron(&identity(d), &bs) * &rho_eff), d).unwrap();
                        assert!(max_abs_diff(&lhs, &rhs) < 1e-12);
                    }
                }
            }
        }
    }
}
