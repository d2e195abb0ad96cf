//! Real-linear subspaces of Hermitian matrices and Lie triple systems.
//!
//! A subspace `E` is a Lie triple system when `[X, [X, Y]] ∈ E` for all
//! `X, Y ∈ E`; exactly then `exp E` is a closed totally geodesic
//! submanifold of the positive-definite matrices. Subspaces are stored
//! with an explicit orthonormal basis for the real inner product
//! `⟨A, B⟩ = Tr(AB)`.
//!
//! Internally each Hermitian matrix is also carried as its coordinate
//! vector in the standard orthonormal basis
//! `{Eᵢᵢ, (Eᵢⱼ + Eⱼᵢ)/√2, i(Eᵢⱼ − Eⱼᵢ)/√2}`, which is an isometry onto
//! `ℝ^{n²}`.

use std::f64::consts::SQRT_2;
use std::sync::OnceLock;

use crate::ad::AdOperator;
use crate::error::{check_dim, GeoError, Result};
use crate::linalg::{ComplexMatrix, HermitianMatrix, PdMatrix, C64};

/// Residual norm below which a spanning vector is considered dependent.
pub const RANK_TOL: f64 = 1e-10;

/// Closure defect admitted by operations that require a Lie triple system.
pub const TRIPLE_TOL: f64 = 1e-8;

/// Coordinates of a Hermitian matrix in the standard orthonormal basis.
pub fn hermitian_coords(h: &HermitianMatrix) -> Vec<f64> {
    let n = h.n();
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        out.push(h.get(i, i).re);
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let z = h.get(i, j);
            out.push(SQRT_2 * z.re);
            out.push(SQRT_2 * z.im);
        }
    }
    out
}

/// Inverse of [`hermitian_coords`].
pub fn hermitian_from_coords(n: usize, c: &[f64]) -> HermitianMatrix {
    debug_assert_eq!(c.len(), n * n);
    let mut m = ComplexMatrix::zeros(n).into_inner();
    for i in 0..n {
        m[(i, i)] = C64::new(c[i], 0.0);
    }
    let mut k = n;
    for i in 0..n {
        for j in (i + 1)..n {
            // (Eᵢⱼ + Eⱼᵢ)/√2 and i(Eᵢⱼ − Eⱼᵢ)/√2
            let z = C64::new(c[k] / SQRT_2, c[k + 1] / SQRT_2);
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
            k += 2;
        }
    }
    HermitianMatrix::symmetrize(&ComplexMatrix::from_inner(m))
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Orthonormal basis of a real-linear subspace of `n×n` Hermitian matrices.
#[derive(Debug)]
pub struct SubspaceBasis {
    n: usize,
    basis: Vec<HermitianMatrix>,
    coords: Vec<Vec<f64>>,
    closure: OnceLock<f64>,
}

impl Clone for SubspaceBasis {
    fn clone(&self) -> Self {
        let closure = OnceLock::new();
        if let Some(&v) = self.closure.get() {
            let _ = closure.set(v);
        }
        Self {
            n: self.n,
            basis: self.basis.clone(),
            coords: self.coords.clone(),
            closure,
        }
    }
}

impl SubspaceBasis {
    fn from_coords(n: usize, coords: Vec<Vec<f64>>) -> Self {
        let basis = coords.iter().map(|c| hermitian_from_coords(n, c)).collect();
        Self { n, basis, coords, closure: OnceLock::new() }
    }

    /// The zero subspace.
    pub fn zero(n: usize) -> Self {
        Self::from_coords(n, Vec::new())
    }

    /// All Hermitian `n×n` matrices.
    pub fn full(n: usize) -> Self {
        let coords = (0..n * n)
            .map(|k| {
                let mut e = vec![0.0; n * n];
                e[k] = 1.0;
                e
            })
            .collect();
        Self::from_coords(n, coords)
    }

    /// Real diagonal matrices.
    pub fn diagonal(n: usize) -> Self {
        let coords = (0..n)
            .map(|k| {
                let mut e = vec![0.0; n * n];
                e[k] = 1.0;
                e
            })
            .collect();
        Self::from_coords(n, coords)
    }

    /// Real symmetric matrices.
    pub fn real_symmetric(n: usize) -> Self {
        let mut coords = Vec::new();
        for k in 0..n {
            let mut e = vec![0.0; n * n];
            e[k] = 1.0;
            coords.push(e);
        }
        // real parts of the off-diagonal pairs sit at even offsets after the diagonal
        for k in (n..n * n).step_by(2) {
            let mut e = vec![0.0; n * n];
            e[k] = 1.0;
            coords.push(e);
        }
        Self::from_coords(n, coords)
    }

    /// Traceless Hermitian matrices.
    pub fn traceless(n: usize) -> Self {
        let spanning: Vec<HermitianMatrix> = Self::full(n)
            .basis
            .iter()
            .map(remove_trace)
            .collect();
        orthonormalize(&spanning).expect("traceless space is nonzero for n ≥ 2")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn basis(&self) -> &[HermitianMatrix] {
        &self.basis
    }

    /// Element `Σ cₖ bₖ` with the given basis coefficients.
    pub fn combine(&self, coeffs: &[f64]) -> HermitianMatrix {
        debug_assert_eq!(coeffs.len(), self.dim());
        let mut c = vec![0.0; self.n * self.n];
        for (b, &s) in self.coords.iter().zip(coeffs) {
            for (ci, bi) in c.iter_mut().zip(b) {
                *ci += s * bi;
            }
        }
        hermitian_from_coords(self.n, &c)
    }

    /// Basis coefficients `⟨X, bₖ⟩`.
    pub fn coefficients(&self, x: &HermitianMatrix) -> Vec<f64> {
        let c = hermitian_coords(x);
        self.coords.iter().map(|b| dot(b, &c)).collect()
    }

    /// `‖X − proj_E X‖_F`.
    pub fn distance_from(&self, x: &HermitianMatrix) -> f64 {
        x.sub(&project_vector(self, x)).norm_fro()
    }

    /// Cached [`triple_closure_defect`].
    pub fn closure_defect(&self) -> f64 {
        *self.closure.get_or_init(|| triple_closure_defect(self))
    }

    pub fn require_triple(&self) -> Result<()> {
        let d = self.closure_defect();
        if d > TRIPLE_TOL {
            return Err(GeoError::Validation(format!(
                "subspace is not closed under [X, [X, Y]] (defect {d:.3e})"
            )));
        }
        Ok(())
    }

    /// Returns `X` if it lies in the subspace within `tol·max(1, ‖X‖)`.
    pub fn require_member(&self, x: &HermitianMatrix, tol: f64) -> Result<()> {
        check_dim(self.n, x.n())?;
        let residual = self.distance_from(x);
        if residual > tol * x.norm_fro().max(1.0) {
            return Err(GeoError::NotInSubspace { residual });
        }
        Ok(())
    }
}

fn remove_trace(h: &HermitianMatrix) -> HermitianMatrix {
    let n = h.n();
    h.axpy(-h.trace() / n as f64, &HermitianMatrix::identity(n))
}

/// Orthonormal basis of the real span (modified Gram–Schmidt, applied
/// twice). Vectors whose residual falls below `RANK_TOL·max(1, ‖v‖)` are
/// dropped.
pub fn orthonormalize(spanning: &[HermitianMatrix]) -> Result<SubspaceBasis> {
    let first = spanning.first().ok_or(GeoError::EmptySubspace)?;
    let n = first.n();
    for h in spanning {
        check_dim(n, h.n())?;
    }
    let coords = gram_schmidt(&[], spanning.iter().map(hermitian_coords));
    if coords.is_empty() {
        return Err(GeoError::EmptySubspace);
    }
    Ok(SubspaceBasis::from_coords(n, coords))
}

fn gram_schmidt(fixed: &[Vec<f64>], candidates: impl Iterator<Item = Vec<f64>>) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = Vec::new();
    for mut v in candidates {
        let scale = norm(&v).max(1.0);
        for _ in 0..2 {
            for b in fixed.iter().chain(out.iter()) {
                let c = dot(b, &v);
                for (vi, bi) in v.iter_mut().zip(b) {
                    *vi -= c * bi;
                }
            }
        }
        let r = norm(&v);
        if r > RANK_TOL * scale {
            v.iter_mut().for_each(|x| *x /= r);
            out.push(v);
        }
    }
    out
}

/// Orthogonal complement of `E` inside the Hermitian matrices.
pub fn complement(e: &SubspaceBasis) -> SubspaceBasis {
    let n = e.n;
    let candidates = (0..n * n).map(|k| {
        let mut v = vec![0.0; n * n];
        v[k] = 1.0;
        v
    });
    let mut coords = gram_schmidt(&e.coords, candidates);
    coords.truncate(n * n - e.dim());
    SubspaceBasis::from_coords(n, coords)
}

/// Orthogonal projection onto `E`.
pub fn project_vector(e: &SubspaceBasis, x: &HermitianMatrix) -> HermitianMatrix {
    if e.is_zero() {
        return HermitianMatrix::zeros(x.n());
    }
    e.combine(&e.coefficients(x))
}

/// Largest norm of the component orthogonal to `E` of `[X, [X, Y]]`, over
/// `Y` in the basis and `X ∈ {bᵢ} ∪ {bᵢ + bⱼ}`.
///
/// `[X, [X, Y]]` is quadratic in `X`, so these evaluations determine it on
/// all of `E`.
pub fn triple_closure_defect(e: &SubspaceBasis) -> f64 {
    let b = &e.basis;
    let mut xs: Vec<HermitianMatrix> = b.clone();
    for i in 0..b.len() {
        for j in (i + 1)..b.len() {
            xs.push(b[i].add(&b[j]));
        }
    }
    let mut worst = 0.0f64;
    for x in &xs {
        for y in b {
            let w = x.double_commutator(y);
            worst = worst.max(e.distance_from(&w));
        }
    }
    worst
}

/// Output of [`efe_flow`].
#[derive(Clone, Debug)]
pub struct EfeFlow {
    /// `X(1)`, which equals `log(exp Y · f · exp Y)`.
    pub end: HermitianMatrix,
    /// Largest `‖proj_F X(t)‖` over accepted steps.
    pub max_drift: f64,
    /// Number of accepted integration steps.
    pub steps: usize,
}

/// Tolerance of the flow integrator.
pub const ODE_TOL: f64 = 1e-8;
const BASE_STEPS: usize = 64;
const MIN_STEP: f64 = 1e-10;

/// Integrates `Ẋ = ad X · coth(ad X / 2)(Y)` from `X(0) = log f` to `t = 1`.
///
/// The exact solution is `X(t) = log(exp(tY) · f · exp(tY))`; for a triple
/// system it stays inside `E`. Classical RK4 on a 64-step grid; each step is
/// checked against two half steps and subdivided until the local error per
/// unit time is below `ODE_TOL`.
pub fn efe_flow(e: &SubspaceBasis, y: &HermitianMatrix, f: &PdMatrix) -> Result<EfeFlow> {
    check_dim(e.n, y.n())?;
    check_dim(e.n, f.n())?;
    e.require_triple()?;
    e.require_member(y, TRIPLE_TOL)?;
    let x0 = f.log();
    e.require_member(&x0, TRIPLE_TOL)?;

    let rhs = |x: &HermitianMatrix| -> Result<HermitianMatrix> { AdOperator::new(x)?.gamma_coth(y) };
    let rk4 = |x: &HermitianMatrix, h: f64| -> Result<HermitianMatrix> {
        let k1 = rhs(x)?;
        let k2 = rhs(&x.axpy(h / 2.0, &k1))?;
        let k3 = rhs(&x.axpy(h / 2.0, &k2))?;
        let k4 = rhs(&x.axpy(h, &k3))?;
        let incr = k1.add(&k2.scale(2.0)).add(&k3.scale(2.0)).add(&k4);
        Ok(x.axpy(h / 6.0, &incr))
    };

    let mut x = x0;
    let mut max_drift = e.distance_from(&x);
    let mut steps = 0;
    let h0 = 1.0 / BASE_STEPS as f64;
    // Stack of pending step sizes; processed in order.
    let mut pending: Vec<f64> = vec![h0; BASE_STEPS];
    pending.reverse();
    while let Some(h) = pending.pop() {
        let full = rk4(&x, h)?;
        let half = rk4(&rk4(&x, h / 2.0)?, h / 2.0)?;
        let diff = half.sub(&full);
        let err = diff.norm_fro() / 15.0;
        if err > ODE_TOL * h {
            if h / 2.0 < MIN_STEP {
                return Err(GeoError::NumericalFailure(
                    "step size underflow in triple-system flow".into(),
                ));
            }
            pending.push(h / 2.0);
            pending.push(h / 2.0);
            continue;
        }
        // Local extrapolation of the step-doubling pair.
        x = half.axpy(1.0 / 15.0, &diff);
        max_drift = max_drift.max(e.distance_from(&x));
        steps += 1;
    }
    Ok(EfeFlow { end: x, max_drift, steps })
}
