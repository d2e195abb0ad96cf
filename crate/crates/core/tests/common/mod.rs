#![allow(dead_code)]

use mostow_geo::linalg::{ComplexMatrix, C64};
use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Matrix exponential by scaling and squaring of a Taylor polynomial,
/// independent of the eigensolver.
pub fn taylor_exp(m: &ComplexMatrix) -> ComplexMatrix {
    let a = m.inner();
    let n = a.nrows();
    let norm = a.norm();
    let squarings = if norm > 0.5 { (norm / 0.5).log2().ceil() as u32 } else { 0 };
    let scaled = a.map(|z| z / 2f64.powi(squarings as i32));
    let mut term = DMatrix::<C64>::identity(n, n);
    let mut sum = term.clone();
    for k in 1..=30 {
        term = &term * &scaled / C64::new(k as f64, 0.0);
        sum += &term;
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    ComplexMatrix::new(sum).unwrap()
}

/// Unitary polar factor of `x` by the Newton iteration `X ← (X + X^{−*})/2`.
pub fn newton_polar(x: &ComplexMatrix) -> ComplexMatrix {
    let mut k = x.inner().clone();
    for _ in 0..100 {
        let inv_adj = k.clone().try_inverse().unwrap().adjoint();
        let next = (&k + inv_adj) * C64::new(0.5, 0.0);
        let change = (&next - &k).norm();
        k = next;
        if change < 1e-15 * k.norm() {
            break;
        }
    }
    ComplexMatrix::new(k).unwrap()
}

pub fn rel_err(got: &ComplexMatrix, want: &ComplexMatrix) -> f64 {
    got.dist_fro(want) / want.norm_fro().max(f64::MIN_POSITIVE)
}

pub fn real(rows: &[&[f64]]) -> ComplexMatrix {
    let rows: Vec<Vec<f64>> = rows.iter().map(|r| r.to_vec()).collect();
    ComplexMatrix::from_real_rows(&rows).unwrap()
}

/// Projection of a 2×2 positive-definite `p = [[a, b], [b̄, c]]` onto the
/// positive diagonal matrices: with `tanh w = |b| / √(ac)` the foot is
/// `diag(a, c) / cosh w` and the distance `√2·w`.
pub fn diagonal_foot_2x2(p: &ComplexMatrix) -> (ComplexMatrix, f64) {
    let a = p.get(0, 0).re;
    let c = p.get(1, 1).re;
    let w = (p.get(0, 1).norm() / (a * c).sqrt()).atanh();
    let foot = ComplexMatrix::from_diagonal(&[C64::new(a / w.cosh(), 0.0), C64::new(c / w.cosh(), 0.0)]);
    (foot, 2f64.sqrt() * w)
}
