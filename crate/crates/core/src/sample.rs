//! Seeded random matrices.
//!
//! Hermitian samples draw i.i.d. standard normal real and imaginary parts,
//! symmetrize, and rescale to a Frobenius norm uniform in `(0, max_norm]`.
//! Positive-definite samples are exponentials of those.

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::linalg::{
    eig_hermitian, exp_hermitian, ComplexMatrix, HermitianMatrix, PdMatrix, UnitaryMatrix, C64,
};
use crate::triple::SubspaceBasis;

fn normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    StandardNormal.sample(rng)
}

fn radius<R: Rng + ?Sized>(rng: &mut R, max_norm: f64) -> f64 {
    // (0, 1] rather than [0, 1)
    max_norm * (1.0 - rng.random::<f64>())
}

fn rescale(h: HermitianMatrix, target: f64) -> HermitianMatrix {
    let nrm = h.norm_fro();
    if nrm == 0.0 {
        h
    } else {
        h.scale(target / nrm)
    }
}

/// Complex matrix with i.i.d. standard normal real and imaginary parts.
pub fn gaussian_matrix<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, |_, _| C64::new(normal(rng), normal(rng)))
}

/// Gaussian Hermitian matrix before rescaling.
pub fn gaussian_hermitian<R: Rng + ?Sized>(rng: &mut R, n: usize) -> HermitianMatrix {
    HermitianMatrix::symmetrize(&gaussian_matrix(rng, n))
}

pub fn random_hermitian<R: Rng + ?Sized>(rng: &mut R, n: usize, max_norm: f64) -> HermitianMatrix {
    let h = gaussian_hermitian(rng, n);
    let r = radius(rng, max_norm);
    rescale(h, r)
}

/// Traceless variant of [`random_hermitian`].
pub fn random_traceless_hermitian<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    max_norm: f64,
) -> HermitianMatrix {
    let h = gaussian_hermitian(rng, n);
    let h = h.axpy(-h.trace() / n as f64, &HermitianMatrix::identity(n));
    let r = radius(rng, max_norm);
    rescale(h, r)
}

pub fn random_pd<R: Rng + ?Sized>(rng: &mut R, n: usize, max_norm: f64) -> PdMatrix {
    exp_hermitian(&random_hermitian(rng, n, max_norm)).expect("exponential of a bounded Hermitian matrix")
}

/// Random element of `E` with norm uniform in `(0, max_norm]`; zero when
/// `E = {0}`.
pub fn random_in_subspace<R: Rng + ?Sized>(
    rng: &mut R,
    e: &SubspaceBasis,
    max_norm: f64,
) -> HermitianMatrix {
    if e.is_zero() {
        return HermitianMatrix::zeros(e.n());
    }
    let coeffs: Vec<f64> = (0..e.dim()).map(|_| normal(rng)).collect();
    let h = e.combine(&coeffs);
    let r = radius(rng, max_norm);
    rescale(h, r)
}

/// `exp(iH)` for a Gaussian Hermitian `H`.
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> UnitaryMatrix {
    unitary_exp(&gaussian_hermitian(rng, n))
}

/// `exp(iH)` for a traceless Gaussian Hermitian `H`, so `det = 1`.
pub fn random_special_unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> UnitaryMatrix {
    let h = gaussian_hermitian(rng, n);
    unitary_exp(&h.axpy(-h.trace() / n as f64, &HermitianMatrix::identity(n)))
}

/// `exp(iH)` for Hermitian `H`.
pub fn unitary_exp(h: &HermitianMatrix) -> UnitaryMatrix {
    let eig = eig_hermitian(h).expect("eigendecomposition of a finite Hermitian matrix");
    let q = eig.basis.as_complex();
    let phases: Vec<C64> = eig
        .eigenvalues
        .iter()
        .map(|&l| C64::from_polar(1.0, l))
        .collect();
    let u = &(q * &ComplexMatrix::from_diagonal(&phases)) * &q.adjoint();
    UnitaryMatrix::new(u).expect("exponential of iH is unitary")
}

/// `u · exp(H)` with `u` unitary: a well-conditioned element of `GL(n, ℂ)`.
pub fn random_gl<R: Rng + ?Sized>(rng: &mut R, n: usize, max_norm: f64) -> ComplexMatrix {
    let u = random_unitary(rng, n);
    let p = random_pd(rng, n, max_norm);
    u.as_complex() * p.as_complex()
}

/// `u · exp(H)` with `u ∈ SU(n)` and traceless `H`: an element of `SL(n, ℂ)`.
pub fn random_sl<R: Rng + ?Sized>(rng: &mut R, n: usize, max_norm: f64) -> ComplexMatrix {
    let u = random_special_unitary(rng, n);
    let p = exp_hermitian(&random_traceless_hermitian(rng, n, max_norm))
        .expect("exponential of a bounded Hermitian matrix");
    u.as_complex() * p.as_complex()
}

/// Traceless skew-Hermitian matrix, i.e. an element of `su(n)`.
pub fn random_su<R: Rng + ?Sized>(rng: &mut R, n: usize, max_norm: f64) -> ComplexMatrix {
    random_traceless_hermitian(rng, n, max_norm).as_complex().mul_i()
}
