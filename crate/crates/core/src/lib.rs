//! Finite-scale laboratory for coarse and Lipschitz embeddings of metric spaces.
//!
//! The crate is organised around a handful of modules:
//!
//! - [`spaces`]: finite metric spaces, graphs, p-norm point clouds and
//!   bounded-geometry profiles.
//! - [`expander`]: random regular graphs, exact and spectral Cheeger
//!   certificates, certified expander families.
//! - [`obstruction`]: Poincaré-ratio bounds on expanders, caps on the
//!   compression modulus and weak-containment witness checks.
//! - [`game`]: a dense simplex solver, the cut cone, and the min-max
//!   measure on far pairs computed by LP duality.
//! - [`embed`]: the dyadic shell embedding, the square-root snowflake of
//!   `ℓ₁` into `ℓ₂`, Gaussian sphere maps, the Mazur map and the assembled
//!   coarse embedding with empirical moduli.
//!
//! All randomness flows through [`rng::SplitMix64`] so that every artifact is
//! reproducible from a single 64-bit seed.

pub mod embed;
pub mod error;
pub mod expander;
pub mod game;
pub mod linalg;
pub mod obstruction;
pub mod rng;
pub mod spaces;
pub use embed::{EmbeddingMap, ModuliBin, ModuliEstimate};
pub use expander::{ExpansionCertificate, Method, Ratio, RegularGraph};
pub use game::{LinearProgram, LpSolution, LpStatus, MeasureCertificate};

pub use error::{Error, Result};

pub use rng::SplitMix64;
pub use spaces::{FiniteMetricSpace, GeometryProfile, Graph, PointCloud};

/// Default tolerance for metric validation of real-valued matrices.
pub const METRIC_TOLERANCE: f64 = 1e-12;
