//! The manifold of positive-definite Hermitian matrices with the
//! affine-invariant metric `g_p(U, V) = Tr(p⁻¹ U p⁻¹ V)`.
//!
//! `GL(n, ℂ)` acts transitively by isometries through `x·p = x* p x`, every
//! point has a global symmetry `s_p(x) = p x⁻¹ p`, and the unique geodesic
//! from `p` to `q` is
//!
//! ```text
//! γ(t) = p^{1/2} exp(t · log(p^{−1/2} q p^{−1/2})) p^{1/2}.
//! ```

use crate::error::{check_dim, GeoError, Result};
use crate::linalg::{exp_hermitian, ComplexMatrix, HermitianMatrix, PdMatrix};

/// Planes whose Gram determinant falls below this fraction of
/// `g(X,X)·g(Y,Y)` are rejected as degenerate.
pub const LIN_INDEP_TOL: f64 = 1e-10;

/// Vertices closer than this make the angle at `C` undefined.
pub const ANGLE_SEPARATION_TOL: f64 = 1e-10;

/// A tangent vector at a point of the manifold.
#[derive(Clone, Debug)]
pub struct TangentVector {
    pub base: PdMatrix,
    pub dir: HermitianMatrix,
}

impl TangentVector {
    pub fn new(base: PdMatrix, dir: HermitianMatrix) -> Result<Self> {
        check_dim(base.n(), dir.n())?;
        Ok(Self { base, dir })
    }

    pub fn norm(&self) -> f64 {
        metric_at(&self.base, &self.dir, &self.dir)
            .expect("dimensions checked on construction")
            .sqrt()
    }
}

/// The geodesic segment from `start` to `end`, stored as
/// `start^{1/2} exp(t·velocity) start^{1/2}`.
#[derive(Clone, Debug)]
pub struct Geodesic {
    pub start: PdMatrix,
    pub end: PdMatrix,
    pub velocity: HermitianMatrix,
    start_sqrt: PdMatrix,
}

impl Geodesic {
    pub fn new(start: &PdMatrix, end: &PdMatrix) -> Result<Self> {
        check_dim(start.n(), end.n())?;
        let velocity = relative_log(start, end)?;
        Ok(Self {
            start: start.clone(),
            end: end.clone(),
            velocity,
            start_sqrt: start.sqrt(),
        })
    }

    /// Point at parameter `t`; `t` outside `[0, 1]` extends the segment.
    pub fn eval(&self, t: f64) -> Result<PdMatrix> {
        let inner = exp_hermitian(&self.velocity.scale(t))?;
        PdMatrix::new(inner.as_hermitian().sandwich(self.start_sqrt.as_hermitian()))
    }

    /// Riemannian length, `‖velocity‖_F`.
    pub fn length(&self) -> f64 {
        self.velocity.norm_fro()
    }

    /// Tangent vector `γ̇(t) = γ(t)^{1/2}·V·γ(t)^{1/2}` expressed at `γ(t)`;
    /// equivalently `p^{1/2} exp(tV/2) V exp(tV/2) p^{1/2}`.
    pub fn velocity_at(&self, t: f64) -> Result<TangentVector> {
        let half = exp_hermitian(&self.velocity.scale(t / 2.0))?;
        let mid = self.velocity.sandwich(half.as_hermitian());
        let dir = mid.sandwich(self.start_sqrt.as_hermitian());
        TangentVector::new(self.eval(t)?, dir)
    }
}

/// `log(p^{−1/2} q p^{−1/2})`: the geodesic velocity from `p` to `q` pulled
/// back to the identity.
pub fn relative_log(p: &PdMatrix, q: &PdMatrix) -> Result<HermitianMatrix> {
    check_dim(p.n(), q.n())?;
    if p.as_complex() == q.as_complex() {
        return Ok(HermitianMatrix::zeros(p.n()));
    }
    let m = PdMatrix::new(q.as_hermitian().sandwich(p.inv_sqrt().as_hermitian()))?;
    Ok(m.log())
}

/// `g_p(U, V) = Tr(p⁻¹ U p⁻¹ V)`.
pub fn metric_at(p: &PdMatrix, u: &HermitianMatrix, v: &HermitianMatrix) -> Result<f64> {
    check_dim(p.n(), u.n())?;
    check_dim(p.n(), v.n())?;
    let pinv = p.inverse();
    let a = pinv.as_complex() * u.as_complex();
    let b = pinv.as_complex() * v.as_complex();
    Ok((&a * &b).trace().re)
}

/// The isometric action `x·p = x* p x`.
pub fn act(x: &ComplexMatrix, p: &PdMatrix) -> Result<PdMatrix> {
    check_dim(p.n(), x.n())?;
    x.inverse()?;
    PdMatrix::new(p.as_hermitian().congruence(x))
}

/// Geodesic symmetry about `p`, `s_p(x) = p x⁻¹ p`.
pub fn point_symmetry(p: &PdMatrix, x: &PdMatrix) -> Result<PdMatrix> {
    check_dim(p.n(), x.n())?;
    PdMatrix::new(x.inverse().as_hermitian().sandwich(p.as_hermitian()))
}

pub fn geodesic_eval(p: &PdMatrix, q: &PdMatrix, t: f64) -> Result<PdMatrix> {
    Geodesic::new(p, q)?.eval(t)
}

/// Riemannian distance `sqrt(Σ (log μᵢ)²)` over the eigenvalues `μ` of
/// `p^{−1/2} q p^{−1/2}`.
pub fn dist(p: &PdMatrix, q: &PdMatrix) -> Result<f64> {
    check_dim(p.n(), q.n())?;
    if p.as_complex() == q.as_complex() {
        return Ok(0.0);
    }
    if p.as_complex() == q.as_complex() {
        return Ok(0.0);
    }
    let m = PdMatrix::new(q.as_hermitian().sandwich(p.inv_sqrt().as_hermitian()))?;
    Ok(m.eig()
        .eigenvalues
        .iter()
        .map(|mu| mu.ln().powi(2))
        .sum::<f64>()
        .sqrt())
}

/// Sectional curvature at the identity of the plane spanned by `X` and `Y`:
/// `−‖[X,Y]‖² / (g(X,X)·g(Y,Y) − g(X,Y)²)`.
pub fn sectional_curvature_at_identity(x: &HermitianMatrix, y: &HermitianMatrix) -> Result<f64> {
    check_dim(x.n(), y.n())?;
    let xx = x.dot(x);
    let yy = y.dot(y);
    let xy = x.dot(y);
    let denom = xx * yy - xy * xy;
    if !(denom > LIN_INDEP_TOL * xx * yy) || denom <= 0.0 {
        return Err(GeoError::DegeneratePlane);
    }
    let c = x.as_complex().commutator(y.as_complex());
    // Tr([[X,Y],X] Y) = Tr([X,Y]²) = −‖[X,Y]‖² for skew-Hermitian [X,Y].
    let numer = (&c * &c).trace().re;
    Ok(numer / denom)
}

/// Law-of-cosines defect of a geodesic triangle.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TriangleDefect {
    /// `c² − a² − b² + 2ab·cos∠ACB`.
    pub defect: f64,
    /// False when `C` coincides with `A` or `B`; the cosine term is then zero.
    pub angle_defined: bool,
}

/// Al-Kashi defect for the triangle `ABC` with the angle taken at `C`.
///
/// The Riemannian angle at `C` equals the Euclidean angle between
/// `log(C^{−1/2} A C^{−1/2})` and `log(C^{−1/2} B C^{−1/2})`.
pub fn al_kashi_defect(a: &PdMatrix, b: &PdMatrix, c: &PdMatrix) -> Result<TriangleDefect> {
    check_dim(a.n(), b.n())?;
    check_dim(a.n(), c.n())?;
    let side_c = dist(a, b)?;
    let side_a = dist(b, c)?;
    let side_b = dist(a, c)?;
    let base = side_c * side_c - side_a * side_a - side_b * side_b;
    if side_a < ANGLE_SEPARATION_TOL || side_b < ANGLE_SEPARATION_TOL {
        return Ok(TriangleDefect { defect: base, angle_defined: false });
    }
    let la = relative_log(c, a)?;
    let lb = relative_log(c, b)?;
    // 2ab·cos θ with cos θ = ⟨LA, LB⟩ / (‖LA‖‖LB‖).
    let cos = la.dot(&lb) / (la.norm_fro() * lb.norm_fro());
    Ok(TriangleDefect {
        defect: base + 2.0 * side_a * side_b * cos,
        angle_defined: true,
    })
}

/// `dist(g1(tᵢ), g2(tᵢ))` at `tᵢ = i / (samples − 1)`.
pub fn geodesic_gap_profile(g1: &Geodesic, g2: &Geodesic, samples: usize) -> Result<Vec<f64>> {
    check_dim(g1.start.n(), g2.start.n())?;
    if samples < 3 {
        return Err(GeoError::Validation("at least 3 samples are required".into()));
    }
    (0..samples)
        .map(|i| {
            let t = i as f64 / (samples - 1) as f64;
            dist(&g1.eval(t)?, &g2.eval(t)?)
        })
        .collect()
}

/// Second differences `v[i−1] − 2v[i] + v[i+1]`.
pub fn second_differences(values: &[f64]) -> Vec<f64> {
    values
        .windows(3)
        .map(|w| w[0] - 2.0 * w[1] + w[2])
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::exp_hermitian;
    use std::f64::consts::E;

    fn diag(d: &[f64]) -> PdMatrix {
        PdMatrix::new(HermitianMatrix::from_real_diagonal(d)).unwrap()
    }

    #[test]
    fn metric_examples() {
        let u = HermitianMatrix::from_real_rows(&[vec![1.0, 2.0], vec![2.0, -1.0]]).unwrap();
        let v = HermitianMatrix::from_real_rows(&[vec![0.5, 0.0], vec![0.0, 3.0]]).unwrap();
        let g = metric_at(&PdMatrix::identity(2), &u, &v).unwrap();
        assert!((g - u.dot(&v)).abs() < 1e-14);

        let id = HermitianMatrix::identity(2);
        let g = metric_at(&diag(&[2.0, 2.0]), &id, &id).unwrap();
        assert!((g - 0.5).abs() < 1e-14);
    }

    #[test]
    fn act_examples() {
        let p = diag(&[1.5, 0.5]);
        let out = act(&ComplexMatrix::identity(2), &p).unwrap();
        assert!(out.as_complex().dist_fro(p.as_complex()) < 1e-14);

        let x = HermitianMatrix::from_real_diagonal(&[2.0, 1.0]).into_complex();
        let out = act(&x, &PdMatrix::identity(2)).unwrap();
        assert!(out.as_complex().dist_fro(diag(&[4.0, 1.0]).as_complex()) < 1e-14);

        let singular = ComplexMatrix::from_real_rows(&[vec![1.0, 2.0], vec![2.0, 4.0]]).unwrap();
        assert_eq!(act(&singular, &p).unwrap_err(), GeoError::Singular);
    }

    #[test]
    fn symmetry_examples() {
        let p = diag(&[3.0, 0.25]);
        let fixed = point_symmetry(&p, &p).unwrap();
        assert!(fixed.as_complex().dist_fro(p.as_complex()) < 1e-13);
        let x = diag(&[2.0, 5.0]);
        let inv = point_symmetry(&PdMatrix::identity(2), &x).unwrap();
        assert!(inv.as_complex().dist_fro(x.inverse().as_complex()) < 1e-14);
    }

    #[test]
    fn geodesic_diagonal_examples() {
        let q = diag(&[E * E, 1.0]);
        let mid = geodesic_eval(&PdMatrix::identity(2), &q, 0.5).unwrap();
        assert!(mid.as_complex().dist_fro(diag(&[E, 1.0]).as_complex()) < 1e-13);

        let mid = geodesic_eval(&diag(&[1.0, 4.0]), &diag(&[4.0, 1.0]), 0.5).unwrap();
        assert!(mid.as_complex().dist_fro(diag(&[2.0, 2.0]).as_complex()) < 1e-13);
    }

    #[test]
    fn distance_examples() {
        let p = diag(&[E, 1.0 / E]);
        assert!((dist(&PdMatrix::identity(2), &p).unwrap() - 2f64.sqrt()).abs() < 1e-14);
        assert_eq!(dist(&p, &p).unwrap(), 0.0);
    }

    #[test]
    fn curvature_witness() {
        let x = HermitianMatrix::from_real_diagonal(&[1.0, -1.0]);
        let y = HermitianMatrix::from_real_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let k = sectional_curvature_at_identity(&x, &y).unwrap();
        assert!((k + 2.0).abs() < 1e-14);

        let z = HermitianMatrix::from_real_diagonal(&[0.3, 2.0]);
        assert_eq!(sectional_curvature_at_identity(&x, &z).unwrap(), 0.0);
        assert_eq!(
            sectional_curvature_at_identity(&x, &x.scale(2.0)).unwrap_err(),
            GeoError::DegeneratePlane
        );
    }

    #[test]
    fn al_kashi_degenerate_and_flat() {
        let p = diag(&[2.0, 3.0]);
        let d = al_kashi_defect(&p, &p, &p).unwrap();
        assert!(!d.angle_defined);
        assert!(d.defect.abs() < 1e-14);

        let d = al_kashi_defect(&diag(&[2.0, 0.5]), &diag(&[0.3, 4.0]), &diag(&[1.2, 1.7])).unwrap();
        assert!(d.angle_defined);
        assert!(d.defect.abs() < 1e-12, "{}", d.defect);
    }

    #[test]
    fn gap_profile_parallel_diagonals() {
        // g1(t) = diag(e^t, 1), g2(t) = diag(2e^t, 3): gap is constant.
        let g1 = Geodesic::new(&diag(&[1.0, 1.0]), &diag(&[E, 1.0])).unwrap();
        let g2 = Geodesic::new(&diag(&[2.0, 3.0]), &diag(&[2.0 * E, 3.0])).unwrap();
        let profile = geodesic_gap_profile(&g1, &g2, 7).unwrap();
        let expected = (2f64.ln().powi(2) + 3f64.ln().powi(2)).sqrt();
        for v in profile {
            assert!((v - expected).abs() < 1e-13);
        }
        let same = geodesic_gap_profile(&g1, &g1, 5).unwrap();
        assert!(same.iter().all(|&v| v.abs() < 1e-14));
        assert!(geodesic_gap_profile(&g1, &g2, 2).is_err());
    }

    #[test]
    fn geodesic_from_identity_is_exponential_ray() {
        let h = HermitianMatrix::from_real_rows(&[vec![0.4, -1.1], vec![-1.1, 0.7]]).unwrap();
        let p = exp_hermitian(&h).unwrap();
        for &t in &[-0.5, 0.25, 1.0, 1.75] {
            let g = geodesic_eval(&PdMatrix::identity(2), &p, t).unwrap();
            let e = exp_hermitian(&h.scale(t)).unwrap();
            assert!(g.as_complex().dist_fro(e.as_complex()) < 1e-12);
        }
    }
}
