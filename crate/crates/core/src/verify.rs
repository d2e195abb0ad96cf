//! Seeded property sweeps over random inputs.
//!
//! Each trial draws its inputs from its own ChaCha stream, keyed by the
//! seed, the suite and the trial index, so results do not depend on how
//! trials are scheduled across threads.

use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{GeoError, Result};
use crate::linalg::{HermitianMatrix, C64};
use crate::mostow::{group_decompose, ProjectionOptions};
use crate::orbits::{isotropy_split, orbit_retract};
use crate::sample;
use crate::spd::{al_kashi_defect, geodesic_gap_profile, second_differences, sectional_curvature_at_identity, Geodesic};
use crate::triple::SubspaceBasis;

/// Norm bound for random Hermitian samples.
pub const SAMPLE_NORM: f64 = 3.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Curvature,
    Triangles,
    Convexity,
    Mostow,
    Orbits,
}

impl Suite {
    pub const ALL: [Suite; 5] = [
        Suite::Curvature,
        Suite::Triangles,
        Suite::Convexity,
        Suite::Mostow,
        Suite::Orbits,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Curvature => "curvature",
            Suite::Triangles => "triangles",
            Suite::Convexity => "convexity",
            Suite::Mostow => "mostow",
            Suite::Orbits => "orbits",
        }
    }

    /// Which statistic is reported and the bound it must respect.
    fn criterion(self) -> (Bound, f64) {
        match self {
            Suite::Curvature => (Bound::AtMost, 1e-12),
            Suite::Triangles => (Bound::AtLeast, -1e-9),
            Suite::Convexity => (Bound::AtLeast, -1e-8),
            Suite::Mostow => (Bound::AtMost, 1e-8),
            Suite::Orbits => (Bound::AtMost, 1e-8),
        }
    }

    fn index(self) -> u64 {
        Suite::ALL.iter().position(|&s| s == self).unwrap() as u64
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A suite name or `all`.
pub fn parse_suites(s: &str) -> Result<Vec<Suite>> {
    if s == "all" {
        return Ok(Suite::ALL.to_vec());
    }
    Ok(vec![s.parse()?])
}

impl FromStr for Suite {
    type Err = GeoError;
    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .iter()
            .copied()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| GeoError::Validation(format!("unknown suite {s:?}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Bound {
    /// The worst value is the maximum and must not exceed the bound.
    AtMost,
    /// The worst value is the minimum and must not fall below the bound.
    AtLeast,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteOutcome {
    pub suite: Suite,
    pub trials: usize,
    /// Trials that raised an error.
    pub errors: usize,
    /// Trials skipped because the random sample was degenerate.
    pub skipped: usize,
    pub worst: f64,
    pub bound: f64,
    pub kind: Bound,
    pub pass: bool,
}

enum Trial {
    Value(f64),
    Skipped,
    Failed,
}

/// Runs `trials` trials of `suite` at matrix size `n`.
///
/// `threads`: `None` uses the global thread pool, `Some(0)` runs
/// sequentially, `Some(k)` uses a pool of `k` threads.
pub fn run_suite(suite: Suite, n: usize, trials: usize, seed: u64, threads: Option<usize>) -> Result<SuiteOutcome> {
    if n < 2 {
        return Err(GeoError::Validation("matrix size must be at least 2".into()));
    }
    let run = |i: usize| run_trial(suite, n, seed, i);
    let results: Vec<Trial> = match threads {
        Some(0) => (0..trials).map(run).collect(),
        None => (0..trials).into_par_iter().map(run).collect(),
        Some(k) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(k)
                .build()
                .map_err(|e| GeoError::NumericalFailure(e.to_string()))?;
            pool.install(|| (0..trials).into_par_iter().map(run).collect())
        }
    };

    let (kind, bound) = suite.criterion();
    let mut worst = match kind {
        Bound::AtMost => f64::NEG_INFINITY,
        Bound::AtLeast => f64::INFINITY,
    };
    let mut errors = 0;
    let mut skipped = 0;
    for r in results {
        match r {
            Trial::Value(v) if v.is_nan() => errors += 1,
            Trial::Value(v) => {
                worst = match kind {
                    Bound::AtMost => worst.max(v),
                    Bound::AtLeast => worst.min(v),
                }
            }
            Trial::Skipped => skipped += 1,
            Trial::Failed => errors += 1,
        }
    }
    let within = match kind {
        Bound::AtMost => worst <= bound,
        Bound::AtLeast => worst >= bound,
    };
    Ok(SuiteOutcome {
        suite,
        trials,
        errors,
        skipped,
        worst,
        bound,
        kind,
        pass: errors == 0 && (within || trials == skipped),
    })
}

fn trial_rng(seed: u64, suite: Suite, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream((suite.index() << 40) | trial as u64);
    rng
}

fn run_trial(suite: Suite, n: usize, seed: u64, trial: usize) -> Trial {
    let mut rng = trial_rng(seed, suite, trial);
    let out = match suite {
        Suite::Curvature => curvature_trial(&mut rng, n),
        Suite::Triangles => triangle_trial(&mut rng, n),
        Suite::Convexity => convexity_trial(&mut rng, n),
        Suite::Mostow => mostow_trial(&mut rng, n, trial),
        Suite::Orbits => orbit_trial(&mut rng, n),
    };
    match out {
        Ok(Some(v)) => Trial::Value(v),
        Ok(None) => Trial::Skipped,
        Err(_) => Trial::Failed,
    }
}

fn curvature_trial(rng: &mut ChaCha8Rng, n: usize) -> Result<Option<f64>> {
    let x = sample::random_hermitian(rng, n, SAMPLE_NORM);
    let y = sample::random_hermitian(rng, n, SAMPLE_NORM);
    match sectional_curvature_at_identity(&x, &y) {
        Ok(k) => Ok(Some(k)),
        Err(GeoError::DegeneratePlane) => Ok(None),
        Err(e) => Err(e),
    }
}

fn triangle_trial(rng: &mut ChaCha8Rng, n: usize) -> Result<Option<f64>> {
    let a = sample::random_pd(rng, n, SAMPLE_NORM);
    let b = sample::random_pd(rng, n, SAMPLE_NORM);
    let c = sample::random_pd(rng, n, SAMPLE_NORM);
    Ok(Some(al_kashi_defect(&a, &b, &c)?.defect))
}

fn convexity_trial(rng: &mut ChaCha8Rng, n: usize) -> Result<Option<f64>> {
    let g1 = Geodesic::new(&sample::random_pd(rng, n, SAMPLE_NORM), &sample::random_pd(rng, n, SAMPLE_NORM))?;
    let g2 = Geodesic::new(&sample::random_pd(rng, n, SAMPLE_NORM), &sample::random_pd(rng, n, SAMPLE_NORM))?;
    let profile = geodesic_gap_profile(&g1, &g2, 11)?;
    Ok(second_differences(&profile).into_iter().reduce(f64::min))
}

/// Subspace used by the Mostow suite for a given trial: cycles through
/// `{0}`, real symmetric and real diagonal matrices.
pub fn mostow_subspace(n: usize, trial: usize) -> SubspaceBasis {
    match trial % 3 {
        0 => SubspaceBasis::zero(n),
        1 => SubspaceBasis::real_symmetric(n),
        _ => SubspaceBasis::diagonal(n),
    }
}

fn mostow_trial(rng: &mut ChaCha8Rng, n: usize, trial: usize) -> Result<Option<f64>> {
    let e = mostow_subspace(n, trial);
    let x = sample::random_gl(rng, n, SAMPLE_NORM);
    let factors = group_decompose(&x, &e, &ProjectionOptions::default())?;
    Ok(Some(factors.residuals(&x, &e).max()))
}

fn orbit_trial(rng: &mut ChaCha8Rng, n: usize) -> Result<Option<f64>> {
    let x = sample::random_su(rng, n, SAMPLE_NORM);
    let frame = isotropy_split(&x)?;
    let g = sample::random_sl(rng, n, SAMPLE_NORM);
    let r = orbit_retract(&g, &frame, &ProjectionOptions::default())?;
    let spec = |m: &crate::linalg::ComplexMatrix| -> Result<Vec<f64>> {
        Ok(HermitianMatrix::symmetrize(&m.scale_c(-C64::i())).eig()?.eigenvalues)
    };
    let drift = spec(&x)?
        .iter()
        .zip(spec(&r.z)?)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    Ok(Some(r.recomposition.max(drift)))
}
