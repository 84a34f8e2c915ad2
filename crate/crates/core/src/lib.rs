//! Kernel independence testing of order `k` on `n`-fold product spaces.
//!
//! The crate is organised bottom up:
//!
//! * [`combinat`]: binomials, Bell numbers, set partitions, elementary
//!   symmetric polynomials and the derived `H` and `E` functions.
//! * [`measures`]: finitely supported signed measures on product spaces,
//!   marginals, products, membership in the spaces `M_k`, and the Lancaster
//!   and Streitberg interactions.
//! * [`kernels`]: component CND kernels, Bernstein and completely monotone
//!   function specs, assembled PDI kernels and the induced PD kernel.
//! * [`stats`]: V-statistic engines, permutation tests, synthetic data.
//! * [`verify`]: independent numeric oracles for identities and inequalities.
//!
//! Scalar special functions are generic over [`num_traits::Float`]; measures,
//! Gram matrices and statistics are computed in [`Real`].

pub mod combinat;
pub mod error;
pub mod kernels;
pub mod measures;
pub mod rng;
pub mod stats;
pub mod tolerances;
pub mod verify;

pub use error::{PdiError, Result};

/// Working precision of measures, statistics and reports.
pub type Real = f64;

/// Single precision variant of the scalar special functions.
pub type Real32 = f32;

pub use kernels::{CmFunctionSpec, ComponentCnd, PdiKernelSpec};
pub use measures::{DiscreteMeasure, ProductPoint, SpaceSignature};
pub use stats::{Dataset, TestConfig, TestReport};
