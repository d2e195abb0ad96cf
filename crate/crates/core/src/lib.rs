//! Affine-invariant Riemannian geometry of positive-definite Hermitian
//! matrices and Mostow decompositions.
//!
//! * [`linalg`]: complex matrices, Jacobi eigensolver, spectral functions.
//! * [`ad`]: functions of `ad(X)`, the differential of `exp` and its inverse.
//! * [`spd`]: metric, isometric action, geodesics, distance, curvature.
//! * [`triple`]: subspaces of Hermitian matrices, Lie triple systems and the
//!   flow `t ↦ log(exp(tY) f exp(tY))`.
//! * [`mostow`]: projection onto `exp E`, `A = e f e` and `x = k f e`.
//! * [`orbits`]: retraction of complex (affine) adjoint orbits onto compact
//!   ones, separation defect and the moment map.
//! * [`io`], [`sample`], [`verify`]: file formats, seeded sampling and
//!   property sweeps used by the command-line tool.

pub mod ad;
pub mod error;
pub mod io;
pub mod linalg;
pub mod mostow;
pub mod orbits;
pub mod sample;
pub mod spd;
pub mod triple;
pub mod verify;

pub use error::{GeoError, Result};
pub use linalg::{ComplexMatrix, EigenDecomposition, HermitianMatrix, PdMatrix, Tolerances, UnitaryMatrix};
pub use mostow::{MostowFactors, ProjectionOptions, ProjectionResult};
pub use orbits::{OrbitFrame, RetractionResult};
pub use triple::SubspaceBasis;
