//! Metric-dependent quantum relative entropies.
//!
//! Monotone metrics on density matrices (SLD, Bogoljubov, RLD, the
//! `λ`-family and mixtures of it), the e-geodesics available in closed
//! form, the e- and m-path divergences they induce, quantum relative
//! entropy and the Belavkin–Staszewski divergence, channels and
//! measurements for monotonicity checks, and a seeded harness that
//! verifies the identities and inequalities between all of these.

pub mod error;
pub mod linalg;
pub mod rng;
pub mod states;
pub mod metrics;
pub mod quadrature;
pub mod transport;
pub mod divergences;
pub mod channels;
pub mod harness;

pub use error::{Error, Result};
pub use linalg::ComplexMatrix;
pub use metrics::MetricKind;
pub use quadrature::{QuadratureConfig, QuadratureEstimate};
pub use states::{DensityMatrix, MatrixFile, ProbabilityDistribution, RandomSpec};
pub use transport::{Geodesic, GeodesicKind};
