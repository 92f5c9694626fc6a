//! Dense complex linear algebra for bipartite `d x d` systems.
//!
//! Everything here operates on [`ComplexMatrix`] (a dense `nalgebra` matrix of
//! `Complex64`). The bipartite ordering is `|a> ⊗ |b>` with Alice's index `a`
//! as the slow index: the row of `|ab>` is `a * d + b`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};

pub type ComplexMatrix = DMatrix<Complex64>;
pub type ComplexVector = DVector<Complex64>;

/// Default tolerance for density-matrix validity checks.
pub const STATE_TOL: f64 = 1e-10;
/// Default tolerance for unitarity checks.
pub const UNITARY_TOL: f64 = 1e-12;

pub(crate) const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub(crate) const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// A seeded, reproducible random stream.
///
/// Parallel consumers never share a stream. Instead, worker `k` gets
/// [`RngStream::split`]`(k)`, which is the stream seeded with `seed + k`.
#[derive(Debug, Clone)]
pub struct RngStream {
    seed: u64,
    rng: ChaCha8Rng,
}

impl RngStream {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Independent stream number `k` derived from this stream's seed.
    pub fn split(&self, k: u64) -> Self {
        Self::new(self.seed.wrapping_add(k))
    }
}

impl RngCore for RngStream {
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.rng.fill_bytes(dst)
    }
}

/// Kronecker product `a ⊗ b`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kronecker(b)
}

pub fn identity(n: usize) -> ComplexMatrix {
    ComplexMatrix::identity(n, n)
}

/// The swap operator `V = Σ_ij |ij><ji|` on `C^d ⊗ C^d`.
pub fn swap_operator(d: usize) -> ComplexMatrix {
    let mut v = ComplexMatrix::zeros(d * d, d * d);
    for i in 0..d {
        for j in 0..d {
            v[(i * d + j, j * d + i)] = ONE;
        }
    }
    v
}

/// `|v><v|`.
pub fn projector(v: &ComplexVector) -> ComplexMatrix {
    v * v.adjoint()
}

/// Computational basis vector `|k>` in dimension `d`.
pub fn basis_vector(d: usize, k: usize) -> ComplexVector {
    let mut v = ComplexVector::zeros(d);
    v[k] = ONE;
    v
}

fn check_square(m: &ComplexMatrix) -> Result<usize> {
    if m.nrows() != m.ncols() {
        return Err(Error::NotSquare(m.nrows(), m.ncols()));
    }
    Ok(m.nrows())
}

/// Trace over the second (Bob's) factor of a `d² x d²` matrix.
pub fn partial_trace_b(rho: &ComplexMatrix, d: usize) -> Result<ComplexMatrix> {
    let n = check_square(rho)?;
    if n != d * d {
        return Err(Error::DimensionMismatch {
            expected: d * d,
            found: n,
        });
    }
    Ok(ComplexMatrix::from_fn(d, d, |a, a2| {
        (0..d).map(|b| rho[(a * d + b, a2 * d + b)]).sum()
    }))
}

/// Trace over the first (Alice's) factor of a `d² x d²` matrix.
pub fn partial_trace_a(rho: &ComplexMatrix, d: usize) -> Result<ComplexMatrix> {
    let n = check_square(rho)?;
    if n != d * d {
        return Err(Error::DimensionMismatch {
            expected: d * d,
            found: n,
        });
    }
    Ok(ComplexMatrix::from_fn(d, d, |b, b2| {
        (0..d).map(|a| rho[(a * d + b, a * d + b2)]).sum()
    }))
}

/// Haar-distributed `d x d` unitary.
///
/// Draws a complex Ginibre matrix, takes its QR factorization and multiplies
/// each column of `Q` by the phase of the matching diagonal entry of `R`.
/// Without that phase correction the result is not Haar distributed.
pub fn haar_unitary<R: RngCore + ?Sized>(d: usize, rng: &mut R) -> ComplexMatrix {
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    let ginibre = ComplexMatrix::from_fn(d, d, |_, _| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        Complex64::new(re * scale, im * scale)
    });
    let qr = ginibre.qr();
    let r = qr.r();
    let mut q = qr.q();
    for (j, mut col) in q.column_iter_mut().enumerate() {
        let rjj = r[(j, j)];
        let norm = rjj.norm();
        let phase = if norm > 0.0 { rjj / norm } else { ONE };
        col *= phase;
    }
    q
}

/// Largest entrywise modulus of `a - b`.
pub fn max_abs_diff(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// `max |U^dag U - 1|` entrywise.
pub fn unitarity_error(u: &ComplexMatrix) -> f64 {
    if u.nrows() != u.ncols() {
        return f64::INFINITY;
    }
    max_abs_diff(&(u.adjoint() * u), &identity(u.nrows()))
}

pub fn is_hermitian(m: &ComplexMatrix, tol: f64) -> bool {
    m.nrows() == m.ncols() && max_abs_diff(m, &m.adjoint()) <= tol
}

/// Eigenvalues of a Hermitian matrix, ascending. Only the Hermitian part of
/// `m` is used.
pub fn hermitian_eigenvalues(m: &ComplexMatrix) -> Vec<f64> {
    let herm = (m + m.adjoint()).scale(0.5);
    let mut ev: Vec<f64> = herm.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Hermitian within `tol`, smallest eigenvalue `>= -tol`, `|tr - 1| <= tol`.
pub fn is_density_matrix(m: &ComplexMatrix, tol: f64) -> bool {
    if !is_hermitian(m, tol) {
        return false;
    }
    if (m.trace() - ONE).norm() > tol {
        return false;
    }
    hermitian_eigenvalues(m)
        .first()
        .is_some_and(|&min| min >= -tol)
}

/// `½ Σ |λ_k(a - b)|` for Hermitian `a`, `b`.
pub fn trace_distance(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<f64> {
    check_square(a)?;
    if a.shape() != b.shape() {
        return Err(Error::DimensionMismatch {
            expected: a.nrows(),
            found: b.nrows(),
        });
    }
    let diff = a - b;
    Ok(0.5
        * hermitian_eigenvalues(&diff)
            .iter()
            .map(|x| x.abs())
            .sum::<f64>())
}
