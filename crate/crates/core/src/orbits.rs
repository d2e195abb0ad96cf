//! Retraction of complex adjoint orbits of `SL(n, ℂ)` onto compact orbits
//! of `SU(n)`.
//!
//! For `x ∈ su(n)` let `𝔨_x` be its centralizer in `su(n)` and `𝔪_x` the
//! orthogonal complement. Mostow's factorization with `E = i𝔨_x` writes
//! `g = u · exp(i𝔟) · exp(i𝔠)` with `u ∈ SU(n)`, `𝔟 ∈ 𝔪_x`, `𝔠 ∈ 𝔨_x`. Since
//! `exp(i𝔠)` fixes `x`,
//!
//! ```text
//! g x g⁻¹ = exp(i𝔞) z exp(−i𝔞),   z = u x u⁻¹,   𝔞 = u 𝔟 u⁻¹ ∈ 𝔪_z,
//! ```
//!
//! and `g·x ↦ z` is the equivariant projection onto the compact orbit.
//! The affine action `g·y = g y g⁻¹ + g D g⁻¹ − D` is handled the same way
//! with `𝔨` the centralizer of `D`.
//!
//! Subspaces of `su(n)` are stored through their Hermitian images: the frame
//! keeps `i𝔨` and `i𝔪` as [`SubspaceBasis`] values. Multiplication by `i`
//! preserves the inner product `Re Tr(A* B)`, so orthogonality is unchanged.

use crate::ad::{AdFunction, AdOperator};
use crate::error::{check_dim, GeoError, Result};
use crate::linalg::{exp_hermitian, ComplexMatrix, HermitianMatrix, UnitaryMatrix, C64};
use crate::mostow::{group_decompose, ProjectionOptions};
use crate::triple::{orthonormalize, SubspaceBasis};

/// Relative tolerance for skew-Hermitian and tracelessness checks on input.
pub const SKEW_TOL: f64 = 1e-10;
/// Tolerance on `|det g − 1|`.
pub const DET_TOL: f64 = 1e-8;
/// Tolerance for membership of `𝔞` in `𝔪_z`.
pub const MEMBERSHIP_TOL: f64 = 1e-8;

/// Base point of a compact orbit with its isotropy split.
#[derive(Clone, Debug)]
pub struct OrbitFrame {
    /// Base point `x ∈ su(n)`; zero for affine frames.
    pub base: ComplexMatrix,
    /// `i𝔨`, Hermitian image of the centralizer.
    pub isotropy: SubspaceBasis,
    /// `i𝔪`, Hermitian image of the orthogonal complement of `𝔨` in `su(n)`.
    pub moving: SubspaceBasis,
    /// Derivation `D` of an affine orbit.
    pub derivation: Option<ComplexMatrix>,
}

impl OrbitFrame {
    pub fn n(&self) -> usize {
        self.base.n()
    }

    /// Affine frame: base point 0, isotropy the centralizer of `D` in `su(n)`.
    pub fn affine(d: &ComplexMatrix) -> Result<Self> {
        check_skew(d, "derivation")?;
        let (isotropy, moving) = centralizer_split(d)?;
        Ok(Self {
            base: ComplexMatrix::zeros(d.n()),
            isotropy,
            moving,
            derivation: Some(d.clone()),
        })
    }

    /// Element of `𝔨` as a skew-Hermitian matrix.
    pub fn isotropy_elements(&self) -> Vec<ComplexMatrix> {
        self.isotropy.basis().iter().map(|b| b.as_complex().scale_c(-C64::i())).collect()
    }

    /// Element of `𝔪` as a skew-Hermitian matrix.
    pub fn moving_elements(&self) -> Vec<ComplexMatrix> {
        self.moving.basis().iter().map(|b| b.as_complex().scale_c(-C64::i())).collect()
    }

    /// Element of `𝔪` with the given coordinates.
    pub fn moving_combination(&self, coeffs: &[f64]) -> ComplexMatrix {
        if self.moving.is_zero() {
            return ComplexMatrix::zeros(self.n());
        }
        self.moving.combine(coeffs).as_complex().scale_c(-C64::i())
    }

    /// Element of `𝔨` with the given coordinates.
    pub fn isotropy_combination(&self, coeffs: &[f64]) -> ComplexMatrix {
        if self.isotropy.is_zero() {
            return ComplexMatrix::zeros(self.n());
        }
        self.isotropy.combine(coeffs).as_complex().scale_c(-C64::i())
    }

    /// The point whose centralizer this frame describes: `D` for affine
    /// frames, the base point otherwise.
    fn center(&self) -> &ComplexMatrix {
        self.derivation.as_ref().unwrap_or(&self.base)
    }
}

/// Checks `‖M + M*‖ ≤ SKEW_TOL·‖M‖`.
pub fn check_skew(m: &ComplexMatrix, what: &str) -> Result<()> {
    let defect = (m + &m.adjoint()).norm_fro();
    if defect > SKEW_TOL * m.norm_fro() {
        return Err(GeoError::Validation(format!(
            "{what} is not skew-Hermitian (‖M + M*‖ = {defect:.3e})"
        )));
    }
    Ok(())
}

fn check_su(m: &ComplexMatrix, what: &str) -> Result<()> {
    check_skew(m, what)?;
    let tr = m.trace().norm();
    if tr > SKEW_TOL * m.norm_fro().max(1.0) {
        return Err(GeoError::Validation(format!("{what} is not traceless (|tr| = {tr:.3e})")));
    }
    Ok(())
}

/// Hermitian `H` with `M = iH` for skew-Hermitian `M`.
fn hermitian_of_skew(m: &ComplexMatrix) -> HermitianMatrix {
    HermitianMatrix::symmetrize(&m.scale_c(-C64::i()))
}

/// Centralizer of `x` in `su(n)` and its complement, as Hermitian subspaces
/// `i𝔨` and `i𝔪`.
///
/// In an eigenbasis of `x` the centralizer consists of the block-diagonal
/// matrices for the clusters of equal eigenvalues, so both subspaces are
/// built from matrix units rather than from a numerical null space.
fn centralizer_split(x: &ComplexMatrix) -> Result<(SubspaceBasis, SubspaceBasis)> {
    let n = x.n();
    let h = hermitian_of_skew(x);
    let eig = h.eig()?;
    let gap_tol = 1e-8 * eig.spectral_norm().max(1.0);
    let mut cluster = vec![0usize; n];
    for k in 1..n {
        let same = eig.eigenvalues[k] - eig.eigenvalues[k - 1] <= gap_tol;
        cluster[k] = if same { cluster[k - 1] } else { cluster[k - 1] + 1 };
    }

    let unit = |i: usize, j: usize, z: C64| {
        let mut m = ComplexMatrix::zeros(n).into_inner();
        m[(i, j)] = z;
        m[(j, i)] = z.conj();
        eig.from_eigenbasis(&ComplexMatrix::from_inner(m))
    };
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut inside = Vec::new();
    let mut outside = Vec::new();
    for i in 0..n {
        let d = HermitianMatrix::symmetrize(&unit(i, i, C64::new(1.0, 0.0)));
        inside.push(d.axpy(-1.0 / n as f64, &HermitianMatrix::identity(n)));
        for j in (i + 1)..n {
            let pair = [
                HermitianMatrix::symmetrize(&unit(i, j, C64::new(s, 0.0))),
                HermitianMatrix::symmetrize(&unit(i, j, C64::new(0.0, s))),
            ];
            if cluster[i] == cluster[j] {
                inside.extend(pair);
            } else {
                outside.extend(pair);
            }
        }
    }
    let span = |v: &[HermitianMatrix]| match orthonormalize(v) {
        Ok(b) => Ok(b),
        Err(GeoError::EmptySubspace) => Ok(SubspaceBasis::zero(n)),
        Err(e) => Err(e),
    };
    Ok((span(&inside)?, span(&outside)?))
}

/// Splits `su(n)` at `x` into the centralizer `𝔨_x` and its complement `𝔪_x`.
pub fn isotropy_split(x: &ComplexMatrix) -> Result<OrbitFrame> {
    check_su(x, "base point")?;
    let (isotropy, moving) = centralizer_split(x)?;
    Ok(OrbitFrame {
        base: x.clone(),
        isotropy,
        moving,
        derivation: None,
    })
}

/// `y = exp(i𝔞)·z` with `z` on the compact orbit and `𝔞 ∈ 𝔪_z`.
#[derive(Clone, Debug)]
pub struct RetractionResult {
    /// Point of the compact orbit, `π(y)`.
    pub z: ComplexMatrix,
    /// Skew-Hermitian element of `𝔪_z`.
    pub a: ComplexMatrix,
    /// Compact factor of the Mostow decomposition of `g`.
    pub u: UnitaryMatrix,
    /// Relative residual of `g·x = exp(i𝔞)·z`.
    pub recomposition: f64,
}

/// `exp(i𝔞) M exp(−i𝔞)` for skew-Hermitian `𝔞`.
pub fn conjugate_by_exp_ia(a: &ComplexMatrix, m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let p = exp_hermitian(&HermitianMatrix::symmetrize(&a.mul_i()))?;
    Ok(&(p.as_complex() * m) * p.inverse().as_complex())
}

/// The map `Φ(z, 𝔞) = exp(i𝔞)·z` from the tangent bundle of the compact
/// orbit onto the complex orbit.
pub fn phi_map(z: &ComplexMatrix, a: &ComplexMatrix) -> Result<ComplexMatrix> {
    check_dim(z.n(), a.n())?;
    conjugate_by_exp_ia(a, z)
}

/// `g M g⁻¹`.
pub fn adjoint_action(g: &ComplexMatrix, m: &ComplexMatrix) -> Result<ComplexMatrix> {
    check_dim(g.n(), m.n())?;
    Ok(&(g * m) * &g.inverse()?)
}

/// Affine action `g·y = g y g⁻¹ + g D g⁻¹ − D`.
pub fn affine_action(g: &ComplexMatrix, y: &ComplexMatrix, d: &ComplexMatrix) -> Result<ComplexMatrix> {
    let ginv = g.inverse()?;
    let moved = &(g * &(y + d)) * &ginv;
    Ok(&moved - d)
}

fn require_unimodular(g: &ComplexMatrix) -> Result<()> {
    let det = g.determinant();
    if (det - C64::new(1.0, 0.0)).norm() > DET_TOL {
        return Err(GeoError::Validation(format!(
            "group element must have determinant 1 (got {:.6}{:+.6}i)",
            det.re, det.im
        )));
    }
    Ok(())
}

struct Decomposed {
    u: UnitaryMatrix,
    /// `𝔟 = −i log f`.
    b: ComplexMatrix,
}

fn decompose(g: &ComplexMatrix, frame: &OrbitFrame, opts: &ProjectionOptions) -> Result<Decomposed> {
    check_dim(frame.n(), g.n())?;
    require_unimodular(g)?;
    let factors = group_decompose(g, &frame.isotropy, opts)?;
    let b = factors.f.log().as_complex().scale_c(-C64::i());
    Ok(Decomposed { u: factors.k, b })
}

fn relative(residual: f64, scale: f64) -> f64 {
    residual / scale.max(1.0)
}

/// Retracts `y = g x g⁻¹` onto the compact orbit through `x`.
pub fn orbit_retract(
    g: &ComplexMatrix,
    frame: &OrbitFrame,
    opts: &ProjectionOptions,
) -> Result<RetractionResult> {
    let Decomposed { u, b } = decompose(g, frame, opts)?;
    let z = u.conjugate(&frame.base);
    let a = u.conjugate(&b);
    let y = adjoint_action(g, &frame.base)?;
    let rebuilt = phi_map(&z, &a)?;
    Ok(RetractionResult {
        recomposition: relative(rebuilt.dist_fro(&y), y.norm_fro()),
        z,
        a,
        u,
    })
}

/// Retracts the affine orbit point `g·0 = g D g⁻¹ − D` onto the compact
/// affine orbit; returns `z = u D u⁻¹ − D`.
pub fn affine_orbit_retract(
    g: &ComplexMatrix,
    frame: &OrbitFrame,
    opts: &ProjectionOptions,
) -> Result<RetractionResult> {
    let d = frame
        .derivation
        .as_ref()
        .ok_or_else(|| GeoError::Validation("affine retraction needs a derivation".into()))?;
    let Decomposed { u, b } = decompose(g, frame, opts)?;
    let z = &u.conjugate(d) - d;
    let a = u.conjugate(&b);
    let y = affine_action(g, &ComplexMatrix::zeros(g.n()), d)?;
    let ea = exp_hermitian(&HermitianMatrix::symmetrize(&a.mul_i()))?;
    let rebuilt = affine_action(ea.as_complex(), &z, d)?;
    Ok(RetractionResult {
        recomposition: relative(rebuilt.dist_fro(&y), y.norm_fro()),
        z,
        a,
        u,
    })
}

/// `‖sinh(i·ad 𝔞)(z)‖_F`: the norm of the component of `exp(i𝔞)·z` outside
/// `𝔤`. Here `z` is the frame's base point, or `D` for affine frames.
///
/// `𝔞` must lie in the frame's `𝔪`.
pub fn separation_defect(frame: &OrbitFrame, a: &ComplexMatrix) -> Result<f64> {
    check_dim(frame.n(), a.n())?;
    check_skew(a, "orbit tangent vector")?;
    let ia = HermitianMatrix::symmetrize(&a.mul_i());
    frame.moving.require_member(&ia, MEMBERSHIP_TOL)?;
    let out = AdOperator::new(&ia)?.apply(&AdFunction::sinh(), frame.center())?;
    Ok(out.norm_fro())
}

/// `μ₁(y) = −i [π(y)/κ, y]`, with `π(y)` taken from a retraction of `y`.
pub fn moment_map_value(
    retraction: &RetractionResult,
    y: &ComplexMatrix,
    kappa: f64,
) -> Result<ComplexMatrix> {
    check_dim(retraction.z.n(), y.n())?;
    if !(kappa > 0.0) || !kappa.is_finite() {
        return Err(GeoError::Validation("kappa must be a positive number".into()));
    }
    let c = retraction.z.commutator(y).scale_c(-C64::i());
    Ok(c.scale(1.0 / kappa))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn idiag(d: &[f64]) -> ComplexMatrix {
        let v: Vec<C64> = d.iter().map(|&x| C64::new(0.0, x)).collect();
        ComplexMatrix::from_diagonal(&v)
    }

    #[test]
    fn split_dimensions() {
        let f = isotropy_split(&idiag(&[1.0, -1.0])).unwrap();
        assert_eq!((f.isotropy.dim(), f.moving.dim()), (1, 2));

        let f = isotropy_split(&ComplexMatrix::zeros(3)).unwrap();
        assert_eq!((f.isotropy.dim(), f.moving.dim()), (8, 0));

        let f = isotropy_split(&idiag(&[1.0, 1.0, -2.0])).unwrap();
        assert_eq!((f.isotropy.dim(), f.moving.dim()), (4, 4));
        for k in f.isotropy_elements() {
            assert!(k.commutator(&f.base).norm_fro() < 1e-12);
        }
    }

    #[test]
    fn rejects_bad_base_points() {
        let not_skew = ComplexMatrix::from_real_rows(&[vec![1.0, 0.0], vec![0.0, -1.0]]).unwrap();
        assert!(isotropy_split(&not_skew).is_err());
        assert!(isotropy_split(&idiag(&[1.0, 1.0])).is_err());
    }

    #[test]
    fn unitary_group_element() {
        let frame = isotropy_split(&idiag(&[1.0, -1.0])).unwrap();
        let u = crate::sample::unitary_exp(
            &HermitianMatrix::from_real_rows(&[vec![0.2, 0.9], vec![0.9, -0.2]]).unwrap(),
        );
        let r = orbit_retract(u.as_complex(), &frame, &ProjectionOptions::default()).unwrap();
        assert!(r.a.norm_fro() < 1e-10);
        assert!(r.z.dist_fro(&u.conjugate(&frame.base)) < 1e-10);
        assert!(r.recomposition < 1e-12);
    }

    #[test]
    fn non_unimodular_is_rejected() {
        let frame = isotropy_split(&idiag(&[1.0, -1.0])).unwrap();
        let g = ComplexMatrix::identity(2).scale(2.0);
        assert!(matches!(
            orbit_retract(&g, &frame, &ProjectionOptions::default()),
            Err(GeoError::Validation(_))
        ));
    }

    #[test]
    fn separation_two_by_two() {
        // x = i·diag(1,−1), 𝔞 = t·[[0,1],[−1,0]]: i𝔞 has eigenvalues ±t, so
        // ad(i𝔞) scales the off-diagonal parts of x in that basis by ±2t.
        let frame = isotropy_split(&idiag(&[1.0, -1.0])).unwrap();
        for &t in &[0.1, 0.5, 1.3] {
            let a = ComplexMatrix::from_real_rows(&[vec![0.0, t], vec![-t, 0.0]]).unwrap();
            let d = separation_defect(&frame, &a).unwrap();
            let hermitian_part = conjugate_by_exp_ia(&a, &frame.base).unwrap().hermitian_part();
            assert!((d - hermitian_part.norm_fro()).abs() < 1e-12);
            assert!((d - 2f64.sqrt() * (2.0 * t).sinh()).abs() < 1e-12, "{d}");
        }
        assert_eq!(separation_defect(&frame, &ComplexMatrix::zeros(2)).unwrap(), 0.0);
        assert!(matches!(
            separation_defect(&frame, &idiag(&[1.0, -1.0])),
            Err(GeoError::NotInSubspace { .. })
        ));
    }

    #[test]
    fn moment_map_vanishes_on_compact_orbit() {
        let frame = isotropy_split(&idiag(&[1.0, -1.0])).unwrap();
        let r = orbit_retract(&ComplexMatrix::identity(2), &frame, &ProjectionOptions::default()).unwrap();
        let mu = moment_map_value(&r, &r.z, 1.0).unwrap();
        assert_eq!(mu.norm_fro(), 0.0);
        assert!(moment_map_value(&r, &r.z, 0.0).is_err());
    }

    #[test]
    fn affine_requires_derivation() {
        let frame = isotropy_split(&idiag(&[1.0, -1.0])).unwrap();
        assert!(affine_orbit_retract(&ComplexMatrix::identity(2), &frame, &ProjectionOptions::default())
            .is_err());
    }
}
