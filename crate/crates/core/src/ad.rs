//! Functions of the adjoint operator `ad(X) = [X, ·]` for Hermitian `X`.
//!
//! With `X = Q diag(λ) Q*`, the operator `ad(X)` is diagonal in the basis of
//! matrix units of `Q`, with eigenvalue `λᵢ − λⱼ` on the `(i, j)` entry. A
//! scalar function `f` therefore acts as `Q (F ∘ Q*YQ) Q*` with
//! `Fᵢⱼ = f(λᵢ − λⱼ)`.
//!
//! The differential of the exponential map factors through
//! `τ_X = sinh(ad X / 2) / (ad X / 2)`:
//!
//! ```text
//! dexp_X(Y) = exp(X/2) · τ_X(Y) · exp(X/2)
//! ```

use nalgebra::DMatrix;

use crate::error::{check_dim, GeoError, Result};
use crate::linalg::{eig_hermitian, ComplexMatrix, EigenDecomposition, HermitianMatrix};

/// Eigenvalue gaps below this are treated as zero and `f(0)` is used.
pub const GAP_TOL: f64 = 1e-8;

/// A real analytic scalar function together with its value at the origin.
#[derive(Clone, Copy)]
pub struct AdFunction {
    pub name: &'static str,
    f: fn(f64) -> f64,
    at_zero: f64,
}

impl std::fmt::Debug for AdFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "AdFunction({}, f(0) = {})", self.name, self.at_zero)
    }
}

impl AdFunction {
    pub fn new(name: &'static str, f: fn(f64) -> f64, at_zero: f64) -> Result<Self> {
        if !at_zero.is_finite() {
            return Err(GeoError::Validation(format!(
                "value at zero of {name} must be finite"
            )));
        }
        Ok(Self { name, f, at_zero })
    }

    /// Evaluates `f(t)`, using the supplied limit when `|t| < GAP_TOL`.
    pub fn eval(&self, t: f64) -> f64 {
        if t.abs() < GAP_TOL {
            self.at_zero
        } else {
            (self.f)(t)
        }
    }

    pub fn at_zero(&self) -> f64 {
        self.at_zero
    }

    /// `f(t) = t`: gives the commutator `[X, Y]`.
    pub fn identity() -> Self {
        Self { name: "t", f: |t| t, at_zero: 0.0 }
    }

    /// `sinh(t/2) / (t/2)`, the multiplier of `τ_X`.
    pub fn sinhc_half() -> Self {
        Self {
            name: "sinh(t/2)/(t/2)",
            f: |t| (t / 2.0).sinh() / (t / 2.0),
            at_zero: 1.0,
        }
    }

    /// `(t/2) / sinh(t/2)`, the multiplier of `τ_X⁻¹`.
    pub fn inv_sinhc_half() -> Self {
        Self {
            name: "(t/2)/sinh(t/2)",
            f: |t| (t / 2.0) / (t / 2.0).sinh(),
            at_zero: 1.0,
        }
    }

    /// `t · coth(t/2)`.
    pub fn t_coth_half() -> Self {
        Self {
            name: "t·coth(t/2)",
            f: |t| t / (t / 2.0).tanh(),
            at_zero: 2.0,
        }
    }

    pub fn sinh() -> Self {
        Self { name: "sinh", f: f64::sinh, at_zero: 0.0 }
    }

    pub fn cosh() -> Self {
        Self { name: "cosh", f: f64::cosh, at_zero: 1.0 }
    }
}

/// `ad(X)` for a fixed Hermitian `X`, with its eigendecomposition cached.
#[derive(Clone, Debug)]
pub struct AdOperator {
    eig: EigenDecomposition,
}

impl AdOperator {
    pub fn new(x: &HermitianMatrix) -> Result<Self> {
        Ok(Self { eig: eig_hermitian(x)? })
    }

    pub fn from_eig(eig: EigenDecomposition) -> Self {
        Self { eig }
    }

    pub fn n(&self) -> usize {
        self.eig.n()
    }

    pub fn eig(&self) -> &EigenDecomposition {
        &self.eig
    }

    /// The entrywise multiplier matrix `Fᵢⱼ = f(λᵢ − λⱼ)`.
    pub fn multipliers(&self, f: &AdFunction) -> DMatrix<f64> {
        let l = &self.eig.eigenvalues;
        DMatrix::from_fn(self.n(), self.n(), |i, j| f.eval(l[i] - l[j]))
    }

    /// `f(ad X)(Y)`.
    pub fn apply(&self, f: &AdFunction, y: &ComplexMatrix) -> Result<ComplexMatrix> {
        check_dim(self.n(), y.n())?;
        let mult = self.multipliers(f);
        let mut t = self.eig.to_eigenbasis(y).into_inner();
        t.zip_apply(&mult, |z, m| *z *= m);
        Ok(self.eig.from_eigenbasis(&ComplexMatrix::from_inner(t)))
    }

    /// `f(ad X)(Y)` for even `f` and Hermitian `Y`.
    pub fn apply_even(&self, f: &AdFunction, y: &HermitianMatrix) -> Result<HermitianMatrix> {
        Ok(HermitianMatrix::symmetrize(&self.apply(f, y.as_complex())?))
    }

    /// `exp(sX)` as a plain matrix.
    pub fn exp_scaled(&self, s: f64) -> HermitianMatrix {
        self.eig.map(|l| (s * l).exp())
    }

    /// `exp(X/2) · τ_X(Y) · exp(X/2)`.
    pub fn dexp(&self, y: &ComplexMatrix) -> Result<ComplexMatrix> {
        let half = self.exp_scaled(0.5);
        let tau = self.apply(&AdFunction::sinhc_half(), y)?;
        Ok(&(half.as_complex() * &tau) * half.as_complex())
    }

    /// `τ_X⁻¹(exp(−X/2) · Z · exp(−X/2))`.
    pub fn dexp_inv(&self, z: &ComplexMatrix) -> Result<ComplexMatrix> {
        check_dim(self.n(), z.n())?;
        let half = self.exp_scaled(-0.5);
        let inner = &(half.as_complex() * z) * half.as_complex();
        self.apply(&AdFunction::inv_sinhc_half(), &inner)
    }

    /// `γ_X(Y) = ad X · coth(ad X / 2)(Y)`.
    pub fn gamma_coth(&self, y: &HermitianMatrix) -> Result<HermitianMatrix> {
        self.apply_even(&AdFunction::t_coth_half(), y)
    }
}

pub fn apply_ad_function(
    x: &HermitianMatrix,
    f: &AdFunction,
    y: &ComplexMatrix,
) -> Result<ComplexMatrix> {
    check_dim(x.n(), y.n())?;
    AdOperator::new(x)?.apply(f, y)
}

/// Directional derivative of the matrix exponential at `X` along `Y`.
pub fn dexp(x: &HermitianMatrix, y: &HermitianMatrix) -> Result<ComplexMatrix> {
    check_dim(x.n(), y.n())?;
    AdOperator::new(x)?.dexp(y.as_complex())
}

/// Inverse of [`dexp`] in its second argument.
pub fn dexp_inv(x: &HermitianMatrix, z: &ComplexMatrix) -> Result<ComplexMatrix> {
    check_dim(x.n(), z.n())?;
    AdOperator::new(x)?.dexp_inv(z)
}

pub fn gamma_coth(x: &HermitianMatrix, y: &HermitianMatrix) -> Result<HermitianMatrix> {
    check_dim(x.n(), y.n())?;
    AdOperator::new(x)?.gamma_coth(y)
}

/// `τ_X(Y)`.
pub fn tau(x: &HermitianMatrix, y: &ComplexMatrix) -> Result<ComplexMatrix> {
    apply_ad_function(x, &AdFunction::sinhc_half(), y)
}

/// The map `A ↦ A·exp X + exp X·A`, the image of `γ_X` under `dexp_X`.
pub fn anticommute_exp(x: &HermitianMatrix, a: &ComplexMatrix) -> Result<ComplexMatrix> {
    check_dim(x.n(), a.n())?;
    let e = AdOperator::new(x)?.exp_scaled(1.0);
    Ok(&(a * e.as_complex()) + &(e.as_complex() * a))
}
