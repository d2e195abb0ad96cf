//! Orthogonal projection onto `exp E` and the Mostow factorizations.
//!
//! For a Lie triple system `E` with orthogonal complement `F`, every
//! positive-definite `A` factors uniquely as `A = e·f·e` with `e ∈ exp E`,
//! `f ∈ exp F`, and every invertible `x` as `x = k·f·e` with `k` unitary.
//! Both reduce to the projection `π(p)` of a point onto the totally geodesic
//! submanifold `exp E`: `e = π(A)^{1/2}`.
//!
//! The projection is computed by minimizing `Φ(Y) = dist(exp Y, p)²` over
//! `Y ∈ E` (the exponential is a global chart of `exp E`). With
//! `M = p^{−1/2} exp(Y) p^{−1/2}` the gradient is
//!
//! ```text
//! ∇Φ(Y) = 2·proj_E τ_Y( exp(Y/2) p^{−1/2} M⁻¹ log M p^{−1/2} exp(Y/2) ).
//! ```
//!
//! The minimizer is certified by orthogonality: the geodesic from the foot
//! `q` to `p` leaves `exp E` at a right angle, i.e. `log(q^{−1/2} p q^{−1/2})`
//! is orthogonal to `E`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::ad::{AdFunction, AdOperator};
use crate::error::{check_dim, GeoError, Result};
use crate::linalg::{
    exp_hermitian, unitarity_defect, ComplexMatrix, HermitianMatrix, PdMatrix, UnitaryMatrix,
};
use crate::sample;
use crate::spd::{dist, relative_log};
use crate::triple::{project_vector, SubspaceBasis};

const ARMIJO_C: f64 = 1e-4;
const MAX_HALVINGS: usize = 60;
const VALUE_NOISE: f64 = 1e-13;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProjectionOptions {
    /// Stop once the gradient norm is at most `tol`.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for ProjectionOptions {
    fn default() -> Self {
        Self { tol: 1e-9, max_iter: 500 }
    }
}

impl ProjectionOptions {
    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0) {
            return Err(GeoError::Validation("tol must be positive".into()));
        }
        if self.max_iter == 0 {
            return Err(GeoError::Validation("max_iter must be at least 1".into()));
        }
        Ok(())
    }
}

/// The foot `π(p)` of the orthogonal projection onto `exp E`.
#[derive(Clone, Debug)]
pub struct ProjectionResult {
    pub foot: PdMatrix,
    pub log_foot: HermitianMatrix,
    /// `dist(p, π(p))`.
    pub distance: f64,
    pub iterations: usize,
    pub grad_norm: f64,
    /// `‖proj_E log(q^{−1/2} p q^{−1/2})‖` at the foot `q`.
    pub orthogonality: f64,
    pub converged: bool,
}

impl ProjectionResult {
    /// Turns an unconverged result into [`GeoError::NonConvergence`].
    pub fn require_converged(self) -> Result<Self> {
        if self.converged {
            Ok(self)
        } else {
            Err(GeoError::NonConvergence {
                iterations: self.iterations,
                grad_norm: self.grad_norm,
            })
        }
    }
}

/// `Φ(Y) = dist(exp Y, p)²` in the coordinates of an orthonormal basis of `E`.
///
/// Evaluated through `N = e^{Y/2} p⁻¹ e^{Y/2}`, which is similar to
/// `p^{−1/2} e^Y p^{−1/2}`: `Φ = ‖log N‖²` and the gradient is
/// `2 proj_E τ_Y(log N)`.
struct Objective<'a> {
    p_inv: HermitianMatrix,
    e: &'a SubspaceBasis,
}

impl<'a> Objective<'a> {
    fn new(p: &PdMatrix, e: &'a SubspaceBasis) -> Self {
        Self { p_inv: p.inverse().as_hermitian().clone(), e }
    }

    fn relative(&self, ad: &AdOperator) -> Result<crate::linalg::EigenDecomposition> {
        let m = self.p_inv.sandwich(&ad.exp_scaled(0.5));
        let eig = m.eig()?;
        if eig.eigenvalues[0] <= 0.0 {
            return Err(GeoError::NumericalFailure(
                "lost positive definiteness while evaluating the projection objective".into(),
            ));
        }
        Ok(eig)
    }

    fn value(&self, c: &[f64]) -> Result<f64> {
        let ad = AdOperator::new(&self.e.combine(c))?;
        let eig = self.relative(&ad)?;
        Ok(eig.eigenvalues.iter().map(|mu| mu.ln().powi(2)).sum())
    }

    fn value_and_grad(&self, c: &[f64]) -> Result<(f64, Vec<f64>)> {
        let ad = AdOperator::new(&self.e.combine(c))?;
        let eig = self.relative(&ad)?;
        let value = eig.eigenvalues.iter().map(|mu| mu.ln().powi(2)).sum();
        let log_n = eig.map(f64::ln);
        let g = ad.apply_even(&AdFunction::sinhc_half(), &log_n)?.scale(2.0);
        Ok((value, self.e.coefficients(&g)))
    }
}

/// Gradient of `Φ(Y) = dist(exp Y, p)²` restricted to `E`, as a matrix in `E`.
pub fn projection_gradient(
    p: &PdMatrix,
    e: &SubspaceBasis,
    y: &HermitianMatrix,
) -> Result<HermitianMatrix> {
    check_dim(p.n(), e.n())?;
    check_dim(p.n(), y.n())?;
    if e.is_zero() {
        return Ok(HermitianMatrix::zeros(p.n()));
    }
    let obj = Objective::new(p, e);
    let (_, g) = obj.value_and_grad(&e.coefficients(y))?;
    Ok(e.combine(&g))
}

/// `Φ(Y) = dist(exp Y, p)²`.
pub fn projection_objective(p: &PdMatrix, y: &HermitianMatrix) -> Result<f64> {
    let q = exp_hermitian(y)?;
    Ok(dist(p, &q)?.powi(2))
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn axpy(x: &[f64], s: f64, d: &[f64]) -> Vec<f64> {
    x.iter().zip(d).map(|(a, b)| a + s * b).collect()
}

/// Projects `p` onto `exp E`, starting from `proj_E(log p)`.
pub fn project_to_exp_subspace(
    p: &PdMatrix,
    e: &SubspaceBasis,
    opts: &ProjectionOptions,
) -> Result<ProjectionResult> {
    let init = project_vector(e, &p.log());
    project_from(p, e, opts, &init)
}

/// Projects `p` onto `exp E`, starting the descent at `init ∈ E`.
///
/// Uses BFGS directions in the coordinates of `E` with Armijo backtracking.
/// When rounding noise defeats the sufficient-decrease test close to the
/// optimum, a step that reduces the gradient norm is accepted instead.
pub fn project_from(
    p: &PdMatrix,
    e: &SubspaceBasis,
    opts: &ProjectionOptions,
    init: &HermitianMatrix,
) -> Result<ProjectionResult> {
    check_dim(p.n(), e.n())?;
    check_dim(p.n(), init.n())?;
    opts.validate()?;
    e.require_triple()?;

    if e.is_zero() {
        return finish(p, e, HermitianMatrix::zeros(p.n()), 0, 0.0, true);
    }

    let obj = Objective::new(p, e);
    let d = e.dim();
    let mut c = e.coefficients(init);
    let (mut f, mut g) = obj.value_and_grad(&c)?;
    let mut h = identity(d);
    let mut fresh = true;
    let mut iterations = 0;
    let mut converged = norm(&g) <= opts.tol;

    while !converged && iterations < opts.max_iter {
        iterations += 1;
        let mut dir = matvec(&h, &g).iter().map(|v| -v).collect::<Vec<_>>();
        let mut slope = dot(&g, &dir);
        if !(slope < 0.0) {
            h = identity(d);
            fresh = true;
            dir = g.iter().map(|v| -v).collect();
            slope = dot(&g, &dir);
        }

        let mut step = None;
        let mut alpha = 1.0;
        for _ in 0..MAX_HALVINGS {
            // Below this the predicted decrease is lost in the rounding of f.
            if -alpha * slope < VALUE_NOISE * f.abs().max(1.0) {
                break;
            }
            let trial = axpy(&c, alpha, &dir);
            if let Ok(ft) = obj.value(&trial) {
                if ft <= f + ARMIJO_C * alpha * slope {
                    step = Some(trial);
                    break;
                }
            }
            alpha *= 0.5;
        }
        if step.is_none() {
            let gn = norm(&g);
            let mut alpha = 1.0;
            for _ in 0..MAX_HALVINGS {
                let trial = axpy(&c, alpha, &dir);
                if let Ok((_, gt)) = obj.value_and_grad(&trial) {
                    if norm(&gt) < gn {
                        step = Some(trial);
                        break;
                    }
                }
                alpha *= 0.5;
            }
        }
        let Some(next) = step else {
            if fresh {
                break;
            }
            h = identity(d);
            fresh = true;
            continue;
        };

        let (f_new, g_new) = obj.value_and_grad(&next)?;
        let s: Vec<f64> = next.iter().zip(&c).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = g_new.iter().zip(&g).map(|(a, b)| a - b).collect();
        let sy = dot(&s, &y);
        if sy > 1e-14 * norm(&s) * norm(&y) && sy > 0.0 {
            if fresh {
                let scale = sy / dot(&y, &y);
                h.iter_mut().flatten().for_each(|v| *v *= scale);
            }
            bfgs_update(&mut h, &s, &y, sy);
            fresh = false;
        }
        c = next;
        f = f_new;
        g = g_new;
        converged = norm(&g) <= opts.tol;
    }

    let log_foot = e.combine(&c);
    finish(p, e, log_foot, iterations, norm(&g), converged)
}

fn finish(
    p: &PdMatrix,
    e: &SubspaceBasis,
    log_foot: HermitianMatrix,
    iterations: usize,
    grad_norm: f64,
    converged: bool,
) -> Result<ProjectionResult> {
    let foot = exp_hermitian(&log_foot)?;
    let distance = dist(p, &foot)?;
    let normal = relative_log(&foot, p)?;
    let orthogonality = project_vector(e, &normal).norm_fro();
    Ok(ProjectionResult {
        foot,
        log_foot,
        distance,
        iterations,
        grad_norm,
        orthogonality,
        converged,
    })
}

fn identity(d: usize) -> Vec<Vec<f64>> {
    (0..d)
        .map(|i| (0..d).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect()
}

fn matvec(h: &[Vec<f64>], v: &[f64]) -> Vec<f64> {
    h.iter().map(|row| dot(row, v)).collect()
}

/// `H ← (I − ρ s yᵀ) H (I − ρ y sᵀ) + ρ s sᵀ` with `ρ = 1 / sᵀy`.
fn bfgs_update(h: &mut [Vec<f64>], s: &[f64], y: &[f64], sy: f64) {
    let rho = 1.0 / sy;
    let hy = matvec(h, y);
    let yhy = dot(y, &hy);
    let d = s.len();
    for i in 0..d {
        for j in 0..d {
            h[i][j] += -rho * (hy[i] * s[j] + s[i] * hy[j]) + (rho * rho * yhy + rho) * s[i] * s[j];
        }
    }
}

/// Smallest `dist(p, exp Y) − distance` over `samples` random `Y ∈ E`
/// within `radius` of `log_foot`. Non-negative (up to rounding) at a true
/// minimizer.
pub fn minimality_witness(
    p: &PdMatrix,
    e: &SubspaceBasis,
    result: &ProjectionResult,
    samples: usize,
    radius: f64,
    seed: u64,
) -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = f64::INFINITY;
    for _ in 0..samples {
        let delta = sample::random_in_subspace(&mut rng, e, radius);
        let q = exp_hermitian(&result.log_foot.add(&delta))?;
        worst = worst.min(dist(p, &q)? - result.distance);
    }
    Ok(worst)
}

/// `(dist(p₁, p₂), dist(π(p₁), π(p₂)))`; the second never exceeds the first.
pub fn projection_contraction_check(
    p1: &PdMatrix,
    p2: &PdMatrix,
    e: &SubspaceBasis,
    opts: &ProjectionOptions,
) -> Result<(f64, f64)> {
    let r1 = project_to_exp_subspace(p1, e, opts)?.require_converged()?;
    let r2 = project_to_exp_subspace(p2, e, opts)?.require_converged()?;
    Ok((dist(p1, p2)?, dist(&r1.foot, &r2.foot)?))
}

/// `A = e·f·e` with `e ∈ exp E`, `f ∈ exp F`.
#[derive(Clone, Debug)]
pub struct MostowSplit {
    pub e: PdMatrix,
    pub f: PdMatrix,
    pub projection: ProjectionResult,
}

impl MostowSplit {
    pub fn recompose(&self) -> ComplexMatrix {
        self.f.as_hermitian().sandwich(self.e.as_hermitian()).into_complex()
    }
}

pub fn mostow_split(a: &PdMatrix, e: &SubspaceBasis, opts: &ProjectionOptions) -> Result<MostowSplit> {
    let init = project_vector(e, &a.log());
    mostow_split_from(a, e, opts, &init)
}

fn mostow_split_from(
    a: &PdMatrix,
    e: &SubspaceBasis,
    opts: &ProjectionOptions,
    init: &HermitianMatrix,
) -> Result<MostowSplit> {
    let projection = project_from(a, e, opts, init)?.require_converged()?;
    let half = exp_hermitian(&projection.log_foot.scale(0.5))?;
    let f = PdMatrix::new(a.as_hermitian().sandwich(half.inverse().as_hermitian()))?;
    Ok(MostowSplit { e: half, f, projection })
}

/// Reruns the split from a random starting point in `E` and returns the
/// largest Frobenius deviation of the factors.
pub fn mostow_uniqueness_witness(
    a: &PdMatrix,
    e: &SubspaceBasis,
    opts: &ProjectionOptions,
    seed: u64,
) -> Result<f64> {
    let base = mostow_split(a, e, opts)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let init = sample::random_in_subspace(&mut rng, e, 1.0).add(&base.projection.log_foot);
    let other = mostow_split_from(a, e, opts, &init)?;
    Ok(base
        .e
        .as_complex()
        .dist_fro(other.e.as_complex())
        .max(base.f.as_complex().dist_fro(other.f.as_complex())))
}

/// `x = k·f·e` with `k` unitary, `f ∈ exp F`, `e ∈ exp E`.
#[derive(Clone, Debug)]
pub struct MostowFactors {
    pub k: UnitaryMatrix,
    pub f: PdMatrix,
    pub e: PdMatrix,
    pub iterations: usize,
}

/// Residuals of a factorization against its input.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FactorResiduals {
    /// `‖k f e − x‖_F / ‖x‖_F`.
    pub recomposition: f64,
    /// `‖k* k − I‖_F`.
    pub unitarity: f64,
    /// `‖proj_E log f‖_F`.
    pub f_membership: f64,
    /// `‖proj_F log e‖_F`.
    pub e_membership: f64,
}

impl FactorResiduals {
    pub fn max(&self) -> f64 {
        self.recomposition
            .max(self.unitarity)
            .max(self.f_membership)
            .max(self.e_membership)
    }
}

impl MostowFactors {
    pub fn recompose(&self) -> ComplexMatrix {
        &(self.k.as_complex() * self.f.as_complex()) * self.e.as_complex()
    }

    pub fn residuals(&self, x: &ComplexMatrix, e: &SubspaceBasis) -> FactorResiduals {
        FactorResiduals {
            recomposition: self.recompose().dist_fro(x) / x.norm_fro(),
            unitarity: unitarity_defect(self.k.as_complex()),
            f_membership: project_vector(e, &self.f.log()).norm_fro(),
            e_membership: e.distance_from(&self.e.log()),
        }
    }
}

/// Group-level factorization `x = k·f·e`.
///
/// `x*x = e f² e` is split first; then `f = (f²)^{1/2}` and `k = x e⁻¹ f⁻¹`.
pub fn group_decompose(
    x: &ComplexMatrix,
    e: &SubspaceBasis,
    opts: &ProjectionOptions,
) -> Result<MostowFactors> {
    check_dim(e.n(), x.n())?;
    x.inverse()?;
    let a = PdMatrix::new(HermitianMatrix::symmetrize(&(&x.adjoint() * x)))?;
    let split = mostow_split(&a, e, opts)?;
    let f = split.f.sqrt();
    let k = &(x * split.e.inverse().as_complex()) * f.inverse().as_complex();
    let k = UnitaryMatrix::new(k).map_err(|err| GeoError::NumericalFailure(err.to_string()))?;
    Ok(MostowFactors {
        k,
        f,
        e: split.e,
        iterations: split.projection.iterations,
    })
}
