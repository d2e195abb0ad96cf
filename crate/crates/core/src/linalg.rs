//! Dense complex matrices, Hermitian eigendecomposition and spectral
//! functions.
//!
//! Every other module goes through the types defined here:
//!
//! * [`ComplexMatrix`]: square matrix with finite entries.
//! * [`HermitianMatrix`]: self-adjoint matrix, symmetrized on construction.
//! * [`PdMatrix`]: positive-definite Hermitian matrix; it carries its own
//!   eigendecomposition so that powers, logarithms and inverses are cheap.
//! * [`UnitaryMatrix`]: matrix with `U*U = I` up to tolerance.
//!
//! The eigensolver is a cyclic complex Jacobi iteration. Its output is
//! deterministic: eigenvalues ascend and each eigenvector is rotated so that
//! its largest-magnitude entry is real and positive.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{check_dim, GeoError, Result};

pub type C64 = Complex64;

const I: C64 = C64::new(0.0, 1.0);

/// Numerical tolerances used when validating matrix types.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Relative bound on `‖M − M*‖_F / ‖M‖_F`.
    pub hermiticity: f64,
    /// Smallest admissible eigenvalue of a positive-definite matrix.
    pub pd: f64,
    /// Bound on `‖M*M − I‖_F`.
    pub unitarity: f64,
    /// Relative reconstruction bound for eigendecompositions.
    pub eig: f64,
    /// Sweep limit of the Jacobi iteration.
    pub max_sweeps: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            hermiticity: 1e-10,
            pd: 1e-12,
            unitarity: 1e-10,
            eig: 1e-12,
            max_sweeps: 100,
        }
    }
}

// ---------------------------------------------------------------------------
// ComplexMatrix
// ---------------------------------------------------------------------------

/// Square complex matrix with finite entries.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    data: DMatrix<C64>,
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{})", self.n(), self.n())?;
        for i in 0..self.n() {
            let row: Vec<String> = (0..self.n())
                .map(|j| {
                    let z = self.data[(i, j)];
                    format!("{:+.6}{:+.6}i", z.re, z.im)
                })
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl ComplexMatrix {
    /// Wraps a square nalgebra matrix, rejecting non-finite entries.
    pub fn new(data: DMatrix<C64>) -> Result<Self> {
        if data.nrows() != data.ncols() {
            return Err(GeoError::Shape {
                expected: data.nrows(),
                got: data.ncols(),
            });
        }
        if data.nrows() == 0 {
            return Err(GeoError::Validation("matrix dimension must be positive".into()));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(GeoError::Validation("matrix has non-finite entries".into()));
        }
        Ok(Self { data })
    }

    pub(crate) fn from_inner(data: DMatrix<C64>) -> Self {
        debug_assert_eq!(data.nrows(), data.ncols());
        Self { data }
    }

    /// Builds a matrix from row-major real and imaginary parts.
    pub fn from_parts(re: &[Vec<f64>], im: Option<&[Vec<f64>]>) -> Result<Self> {
        let n = re.len();
        if n == 0 {
            return Err(GeoError::Validation("matrix dimension must be positive".into()));
        }
        for row in re {
            check_dim(n, row.len())?;
        }
        if let Some(im) = im {
            check_dim(n, im.len())?;
            for row in im {
                check_dim(n, row.len())?;
            }
        }
        let data = DMatrix::from_fn(n, n, |i, j| {
            C64::new(re[i][j], im.map_or(0.0, |im| im[i][j]))
        });
        Self::new(data)
    }

    /// Builds a real matrix from row-major rows.
    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        Self::from_parts(rows, None)
    }

    pub fn from_fn(n: usize, f: impl FnMut(usize, usize) -> C64) -> Self {
        Self::from_inner(DMatrix::from_fn(n, n, f))
    }

    pub fn zeros(n: usize) -> Self {
        Self::from_inner(DMatrix::zeros(n, n))
    }

    pub fn identity(n: usize) -> Self {
        Self::from_inner(DMatrix::identity(n, n))
    }

    pub fn from_diagonal(diag: &[C64]) -> Self {
        let n = diag.len();
        Self::from_fn(n, |i, j| if i == j { diag[i] } else { C64::new(0.0, 0.0) })
    }

    pub fn n(&self) -> usize {
        self.data.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.data[(i, j)]
    }

    pub fn inner(&self) -> &DMatrix<C64> {
        &self.data
    }

    pub fn into_inner(self) -> DMatrix<C64> {
        self.data
    }

    /// Row-major real parts.
    pub fn re_rows(&self) -> Vec<Vec<f64>> {
        (0..self.n())
            .map(|i| (0..self.n()).map(|j| self.data[(i, j)].re).collect())
            .collect()
    }

    /// Row-major imaginary parts.
    pub fn im_rows(&self) -> Vec<Vec<f64>> {
        (0..self.n())
            .map(|i| (0..self.n()).map(|j| self.data[(i, j)].im).collect())
            .collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_inner(self.data.adjoint())
    }

    pub fn trace(&self) -> C64 {
        self.data.trace()
    }

    pub fn norm_fro(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::from_inner(self.data.map(|z| z * s))
    }

    pub fn scale_c(&self, s: C64) -> Self {
        Self::from_inner(self.data.map(|z| z * s))
    }

    /// Multiplication by the imaginary unit.
    pub fn mul_i(&self) -> Self {
        self.scale_c(I)
    }

    /// `[A, B] = AB − BA`.
    pub fn commutator(&self, other: &Self) -> Self {
        &(self * other) - &(other * self)
    }

    /// `(M + M*) / 2`.
    pub fn hermitian_part(&self) -> HermitianMatrix {
        HermitianMatrix::symmetrize(self)
    }

    /// `(M − M*) / 2`.
    pub fn skew_hermitian_part(&self) -> ComplexMatrix {
        (self - &self.adjoint()).scale(0.5)
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn determinant(&self) -> C64 {
        self.data.clone().lu().determinant()
    }

    /// Inverse via partial-pivoted LU.
    ///
    /// A pivot smaller than `1e-14` times the largest pivot is treated as a
    /// zero pivot and reported as [`GeoError::Singular`].
    pub fn inverse(&self) -> Result<Self> {
        let lu = self.data.clone().lu();
        let u = lu.u();
        let pivots: Vec<f64> = (0..self.n()).map(|i| u[(i, i)].norm()).collect();
        let max = pivots.iter().cloned().fold(0.0, f64::max);
        let min = pivots.iter().cloned().fold(f64::INFINITY, f64::min);
        if max == 0.0 || min <= 1e-14 * max {
            return Err(GeoError::Singular);
        }
        let inv = lu.try_inverse().ok_or(GeoError::Singular)?;
        let inv = Self::from_inner(inv);
        if !inv.is_finite() {
            return Err(GeoError::Singular);
        }
        Ok(inv)
    }

    /// Largest absolute entrywise difference.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.data
            .iter()
            .zip(other.data.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `‖self − other‖_F`.
    pub fn dist_fro(&self, other: &Self) -> f64 {
        (self - other).norm_fro()
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix::from_inner(&self.data + &rhs.data)
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix::from_inner(&self.data - &rhs.data)
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix::from_inner(&self.data * &rhs.data)
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        ComplexMatrix::from_inner(-&self.data)
    }
}

/// Hilbert–Schmidt inner product `⟨A, B⟩ = Tr(A* B)`.
pub fn hs_inner(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<C64> {
    check_dim(a.n(), b.n())?;
    Ok(a.data
        .iter()
        .zip(b.data.iter())
        .map(|(x, y)| x.conj() * y)
        .sum())
}

// ---------------------------------------------------------------------------
// HermitianMatrix
// ---------------------------------------------------------------------------

/// Self-adjoint matrix.
#[derive(Clone, PartialEq)]
pub struct HermitianMatrix(ComplexMatrix);

impl fmt::Debug for HermitianMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Hermitian{:?}", self.0)
    }
}

impl HermitianMatrix {
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        Self::with_tol(m, &Tolerances::default())
    }

    pub fn with_tol(m: ComplexMatrix, tol: &Tolerances) -> Result<Self> {
        let defect = (&m - &m.adjoint()).norm_fro();
        if defect > tol.hermiticity * m.norm_fro() {
            return Err(GeoError::Validation(format!(
                "matrix is not Hermitian (‖M − M*‖ = {defect:.3e})"
            )));
        }
        Ok(Self::symmetrize(&m))
    }

    /// `(M + M*) / 2` without any check.
    pub fn symmetrize(m: &ComplexMatrix) -> Self {
        let mut h = m.data.clone();
        let n = m.n();
        for i in 0..n {
            h[(i, i)] = C64::new(m.data[(i, i)].re, 0.0);
            for j in (i + 1)..n {
                let z = (m.data[(i, j)] + m.data[(j, i)].conj()) * 0.5;
                h[(i, j)] = z;
                h[(j, i)] = z.conj();
            }
        }
        Self(ComplexMatrix::from_inner(h))
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        Self::new(ComplexMatrix::from_real_rows(rows)?)
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let d: Vec<C64> = diag.iter().map(|&x| C64::new(x, 0.0)).collect();
        Self(ComplexMatrix::from_diagonal(&d))
    }

    pub fn zeros(n: usize) -> Self {
        Self(ComplexMatrix::zeros(n))
    }

    pub fn identity(n: usize) -> Self {
        Self(ComplexMatrix::identity(n))
    }

    pub fn n(&self) -> usize {
        self.0.n()
    }

    pub fn as_complex(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_complex(self) -> ComplexMatrix {
        self.0
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.0.get(i, j)
    }

    pub fn norm_fro(&self) -> f64 {
        self.0.norm_fro()
    }

    /// Real Hilbert–Schmidt inner product `Tr(AB)`.
    pub fn dot(&self, other: &Self) -> f64 {
        self.0
            .data
            .iter()
            .zip(other.0.data.iter())
            .map(|(a, b)| a.re * b.re + a.im * b.im)
            .sum()
    }

    pub fn trace(&self) -> f64 {
        self.0.trace().re
    }

    pub fn add(&self, other: &Self) -> Self {
        Self(&self.0 + &other.0)
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self(&self.0 - &other.0)
    }

    pub fn scale(&self, s: f64) -> Self {
        Self(self.0.scale(s))
    }

    /// `self + s·other`.
    pub fn axpy(&self, s: f64, other: &Self) -> Self {
        Self(ComplexMatrix::from_inner(&self.0.data + &other.0.data * C64::new(s, 0.0)))
    }

    /// Congruence `B* H B`.
    pub fn congruence(&self, b: &ComplexMatrix) -> Self {
        Self::symmetrize(&(&(&b.adjoint() * &self.0) * b))
    }

    /// Congruence by a Hermitian matrix, `B H B`.
    pub fn sandwich(&self, b: &HermitianMatrix) -> Self {
        Self::symmetrize(&(&(&b.0 * &self.0) * &b.0))
    }

    /// Double commutator `[X, [X, Y]]` with `X = self`; the result is Hermitian.
    pub fn double_commutator(&self, y: &Self) -> Self {
        let inner = self.0.commutator(&y.0);
        Self::symmetrize(&self.0.commutator(&inner))
    }

    pub fn eig(&self) -> Result<EigenDecomposition> {
        eig_hermitian(self)
    }
}

// ---------------------------------------------------------------------------
// UnitaryMatrix
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq)]
pub struct UnitaryMatrix(ComplexMatrix);

impl UnitaryMatrix {
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        Self::with_tol(m, &Tolerances::default())
    }

    pub fn with_tol(m: ComplexMatrix, tol: &Tolerances) -> Result<Self> {
        let defect = unitarity_defect(&m);
        if defect > tol.unitarity {
            return Err(GeoError::Validation(format!(
                "matrix is not unitary (‖M*M − I‖ = {defect:.3e})"
            )));
        }
        Ok(Self(m))
    }

    pub(crate) fn from_unchecked(m: ComplexMatrix) -> Self {
        Self(m)
    }

    pub fn identity(n: usize) -> Self {
        Self(ComplexMatrix::identity(n))
    }

    pub fn n(&self) -> usize {
        self.0.n()
    }

    pub fn as_complex(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_complex(self) -> ComplexMatrix {
        self.0
    }

    /// The inverse, `U*`.
    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    /// `U M U*`.
    pub fn conjugate(&self, m: &ComplexMatrix) -> ComplexMatrix {
        &(&self.0 * m) * &self.0.adjoint()
    }

    pub fn compose(&self, other: &Self) -> Self {
        Self(&self.0 * &other.0)
    }
}

/// `‖M*M − I‖_F`.
pub fn unitarity_defect(m: &ComplexMatrix) -> f64 {
    (&(&m.adjoint() * m) - &ComplexMatrix::identity(m.n())).norm_fro()
}

// ---------------------------------------------------------------------------
// Eigendecomposition
// ---------------------------------------------------------------------------

/// `H = Q diag(λ) Q*` with ascending `λ`.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<f64>,
    pub basis: UnitaryMatrix,
}

impl EigenDecomposition {
    pub fn n(&self) -> usize {
        self.eigenvalues.len()
    }

    /// `Q diag(f(λ)) Q*` without any domain check.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> HermitianMatrix {
        let q = self.basis.as_complex().inner();
        let n = self.n();
        let vals: Vec<f64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        let mut scaled = q.clone();
        for j in 0..n {
            for i in 0..n {
                scaled[(i, j)] *= vals[j];
            }
        }
        HermitianMatrix::symmetrize(&ComplexMatrix::from_inner(&scaled * q.adjoint()))
    }

    /// `Q* M Q`.
    pub fn to_eigenbasis(&self, m: &ComplexMatrix) -> ComplexMatrix {
        let q = self.basis.as_complex();
        &(&q.adjoint() * m) * q
    }

    /// `Q M Q*`.
    pub fn from_eigenbasis(&self, m: &ComplexMatrix) -> ComplexMatrix {
        let q = self.basis.as_complex();
        &(q * m) * &q.adjoint()
    }

    pub fn reconstruct(&self) -> HermitianMatrix {
        self.map(|l| l)
    }

    /// Spectral norm `max |λ|`.
    pub fn spectral_norm(&self) -> f64 {
        self.eigenvalues.iter().fold(0.0, |m, l| m.max(l.abs()))
    }
}

/// Cyclic Jacobi eigendecomposition of a Hermitian matrix.
pub fn eig_hermitian(h: &HermitianMatrix) -> Result<EigenDecomposition> {
    eig_hermitian_with(h, &Tolerances::default())
}

pub fn eig_hermitian_with(h: &HermitianMatrix, tol: &Tolerances) -> Result<EigenDecomposition> {
    let n = h.n();
    let mut a = h.as_complex().inner().clone();
    let mut v: DMatrix<C64> = DMatrix::identity(n, n);
    let scale = h.norm_fro();

    let off_norm = |a: &DMatrix<C64>| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += a[(i, j)].norm_sqr();
                }
            }
        }
        s.sqrt()
    };

    let threshold = 1e-15 * scale;
    let mut converged = scale == 0.0 || off_norm(&a) <= threshold;
    let mut sweeps = 0;
    while !converged {
        if sweeps >= tol.max_sweeps {
            return Err(GeoError::NumericalFailure(format!(
                "Jacobi eigensolver did not converge in {} sweeps",
                tol.max_sweeps
            )));
        }
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                jacobi_rotate(&mut a, &mut v, p, q);
            }
        }
        converged = off_norm(&a) <= threshold;
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    order.sort_by(|&i, &j| diag[i].total_cmp(&diag[j]));

    let eigenvalues: Vec<f64> = order.iter().map(|&i| diag[i]).collect();
    let mut basis = DMatrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    for c in 0..n {
        let mut best = 0;
        let mut best_mag = -1.0;
        for r in 0..n {
            let m = basis[(r, c)].norm();
            if m > best_mag {
                best_mag = m;
                best = r;
            }
        }
        let phase = basis[(best, c)].conj() / best_mag;
        for r in 0..n {
            basis[(r, c)] *= phase;
        }
        basis[(best, c)] = C64::new(basis[(best, c)].re, 0.0);
    }

    let out = EigenDecomposition {
        eigenvalues,
        basis: UnitaryMatrix::from_unchecked(ComplexMatrix::from_inner(basis)),
    };
    let residual = out.reconstruct().sub(h).norm_fro();
    if residual > tol.eig * scale.max(f64::MIN_POSITIVE) && residual > 0.0 {
        return Err(GeoError::NumericalFailure(format!(
            "eigendecomposition residual {residual:.3e} exceeds tolerance"
        )));
    }
    Ok(out)
}

/// One complex Jacobi rotation zeroing `a[p][q]`.
///
/// The pair is first made real by the phase `diag(1, e^{−iφ})`, then a real
/// rotation `[[c, s], [−s, c]]` diagonalizes the 2×2 block.
fn jacobi_rotate(a: &mut DMatrix<C64>, v: &mut DMatrix<C64>, p: usize, q: usize) {
    let h = a[(p, q)];
    let r = h.norm();
    if r == 0.0 {
        return;
    }
    let n = a.nrows();
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let phase = h.conj() / r; // e^{−iφ}
    let theta = (aqq - app) / (2.0 * r);
    let t = if theta >= 0.0 {
        1.0 / (theta + theta.hypot(1.0))
    } else {
        -1.0 / (-theta + theta.hypot(1.0))
    };
    let c = 1.0 / t.hypot(1.0);
    let s = t * c;

    let g_pp = C64::new(c, 0.0);
    let g_pq = C64::new(s, 0.0);
    let g_qp = phase * (-s);
    let g_qq = phase * c;

    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * g_pp + akq * g_qp;
        a[(k, q)] = akp * g_pq + akq * g_qq;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = g_pp.conj() * apk + g_qp.conj() * aqk;
        a[(q, k)] = g_pq.conj() * apk + g_qq.conj() * aqk;
    }
    a[(p, q)] = C64::new(0.0, 0.0);
    a[(q, p)] = C64::new(0.0, 0.0);
    a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = C64::new(a[(q, q)].re, 0.0);
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * g_pp + vkq * g_qp;
        v[(k, q)] = vkp * g_pq + vkq * g_qq;
    }
}

// ---------------------------------------------------------------------------
// Spectral functions
// ---------------------------------------------------------------------------

/// `Q diag(f(λ)) Q*`. Non-finite values of `f` on the spectrum are a
/// [`GeoError::Domain`] error.
pub fn matrix_function(h: &HermitianMatrix, f: impl Fn(f64) -> f64) -> Result<HermitianMatrix> {
    let eig = eig_hermitian(h)?;
    if let Some(&l) = eig.eigenvalues.iter().find(|&&l| !f(l).is_finite()) {
        return Err(GeoError::Domain(format!("function is not finite at eigenvalue {l}")));
    }
    Ok(eig.map(f))
}

/// Matrix exponential of a Hermitian matrix.
pub fn exp_hermitian(h: &HermitianMatrix) -> Result<PdMatrix> {
    let eig = eig_hermitian(h)?;
    PdMatrix::from_spectrum(eig.eigenvalues.iter().map(|l| l.exp()).collect(), eig.basis)
}

/// Principal logarithm; the spectrum must be positive.
pub fn log_hermitian(h: &HermitianMatrix) -> Result<HermitianMatrix> {
    let eig = eig_hermitian(h)?;
    require_positive(&eig, "log")?;
    Ok(eig.map(f64::ln))
}

/// Principal square root; the spectrum must be positive.
pub fn sqrt_hermitian(h: &HermitianMatrix) -> Result<HermitianMatrix> {
    let eig = eig_hermitian(h)?;
    require_positive(&eig, "sqrt")?;
    Ok(eig.map(f64::sqrt))
}

fn require_positive(eig: &EigenDecomposition, what: &str) -> Result<()> {
    let min = eig.eigenvalues.first().copied().unwrap_or(0.0);
    if min <= Tolerances::default().pd {
        return Err(GeoError::Domain(format!(
            "{what} requires a positive-definite argument (smallest eigenvalue {min:.3e})"
        )));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// PdMatrix
// ---------------------------------------------------------------------------

/// Positive-definite Hermitian matrix, stored with its eigendecomposition.
#[derive(Clone, Debug, PartialEq)]
pub struct PdMatrix {
    matrix: HermitianMatrix,
    eig: EigenDecomposition,
}

impl PdMatrix {
    pub fn new(h: HermitianMatrix) -> Result<Self> {
        Self::with_tol(h, &Tolerances::default())
    }

    pub fn with_tol(h: HermitianMatrix, tol: &Tolerances) -> Result<Self> {
        let eig = eig_hermitian_with(&h, tol)?;
        let min = eig.eigenvalues[0];
        if min <= tol.pd {
            return Err(GeoError::Validation(format!(
                "matrix is not positive definite (smallest eigenvalue {min:.3e})"
            )));
        }
        Ok(Self { matrix: h, eig })
    }

    /// Assembles `Q diag(μ) Q*` from a known spectrum.
    pub(crate) fn from_spectrum(values: Vec<f64>, basis: UnitaryMatrix) -> Result<Self> {
        if let Some(&m) = values.iter().find(|&&m| !(m > Tolerances::default().pd) || !m.is_finite()) {
            return Err(GeoError::Validation(format!(
                "matrix is not positive definite (eigenvalue {m:.3e})"
            )));
        }
        let eig = EigenDecomposition { eigenvalues: values, basis };
        let matrix = eig.reconstruct();
        Ok(Self { matrix, eig })
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        Self::new(HermitianMatrix::from_real_rows(rows)?)
    }

    pub fn identity(n: usize) -> Self {
        Self::from_spectrum(vec![1.0; n], UnitaryMatrix::identity(n)).expect("identity is PD")
    }

    pub fn n(&self) -> usize {
        self.matrix.n()
    }

    pub fn as_hermitian(&self) -> &HermitianMatrix {
        &self.matrix
    }

    pub fn as_complex(&self) -> &ComplexMatrix {
        self.matrix.as_complex()
    }

    pub fn eig(&self) -> &EigenDecomposition {
        &self.eig
    }

    /// `p^t` for real `t`; the result is again positive definite.
    pub fn powf(&self, t: f64) -> PdMatrix {
        let values = self.eig.eigenvalues.iter().map(|l| l.powf(t)).collect();
        Self::from_spectrum(values, self.eig.basis.clone())
            .expect("powers of a positive-definite matrix stay positive definite")
    }

    pub fn inverse(&self) -> PdMatrix {
        self.powf(-1.0)
    }

    pub fn sqrt(&self) -> PdMatrix {
        self.powf(0.5)
    }

    pub fn inv_sqrt(&self) -> PdMatrix {
        self.powf(-0.5)
    }

    pub fn log(&self) -> HermitianMatrix {
        self.eig.map(f64::ln)
    }
}
