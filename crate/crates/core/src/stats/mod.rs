//! V-statistic engines, permutation tests and synthetic data.

mod engine;
mod permutation;
mod synthetic;

use std::fmt;
use std::str::FromStr;

pub use engine::{fast_multivariance, interaction_measure, interaction_stat, naive_stat, statistic_scale};
pub use permutation::{permutation_test, resolve_engine};
pub use synthetic::{generate_synthetic, SyntheticKind};

use crate::error::{PdiError, Result};
use crate::kernels::PdiKernelSpec;
use crate::measures::{ProductPoint, SpaceSignature};
use crate::Real;

/// Row aligned joint observations.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    signature: SpaceSignature,
    samples: Vec<ProductPoint>,
}

impl Dataset {
    pub fn new(signature: SpaceSignature, samples: Vec<ProductPoint>) -> Result<Self> {
        if samples.is_empty() {
            return Err(PdiError::Data("dataset has no samples".into()));
        }
        if let Some(i) = samples.iter().position(|s| !s.matches(&signature)) {
            return Err(PdiError::Data(format!("sample {i} does not match the signature")));
        }
        if samples.iter().flat_map(|s| s.components().iter().flatten()).any(|v| !v.is_finite()) {
            return Err(PdiError::Data("dataset contains non-finite values".into()));
        }
        Ok(Self { signature, samples })
    }

    /// Scalar components from rows of `n` values.
    pub fn from_scalar_rows(rows: &[Vec<Real>]) -> Result<Self> {
        let n = rows.first().map_or(0, Vec::len);
        let sig = SpaceSignature::scalar(n).map_err(|e| PdiError::Data(e.to_string()))?;
        Self::new(sig, rows.iter().map(|r| ProductPoint::scalars(r)).collect())
    }

    pub fn signature(&self) -> &SpaceSignature {
        &self.signature
    }

    pub fn samples(&self) -> &[ProductPoint] {
        &self.samples
    }

    pub fn n(&self) -> usize {
        self.signature.n()
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Dataset whose component `i` in row `a` is taken from row `perms[i][a]`.
    pub fn permuted(&self, perms: &[Vec<usize>]) -> Dataset {
        let samples = (0..self.len())
            .map(|a| {
                ProductPoint::new((0..self.n()).map(|i| self.samples[perms[i][a]].component(i).to_vec()).collect())
            })
            .collect();
        Dataset { signature: self.signature.clone(), samples }
    }
}

macro_rules! named_enum {
    ($name:ident { $($var:ident => $s:literal),+ $(,)? }) => {
        #[derive(Debug, Clone, Copy, PartialEq, Eq)]
        pub enum $name { $($var),+ }

        impl $name {
            pub fn as_str(self) -> &'static str {
                match self { $(Self::$var => $s),+ }
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.as_str())
            }
        }

        impl FromStr for $name {
            type Err = PdiError;
            fn from_str(s: &str) -> Result<Self> {
                match s {
                    $($s => Ok(Self::$var),)+
                    _ => Err(PdiError::Argument(format!(concat!("unknown ", stringify!($name), " '{}'"), s))),
                }
            }
        }
    };
}

named_enum!(Interaction { Lancaster => "lancaster", Streitberg => "streitberg" });
named_enum!(Engine { Naive => "naive", Fast => "fast", Auto => "auto" });
named_enum!(NullCalibration { Exact => "exact", Heuristic => "heuristic" });

/// Parameters of a permutation test.
#[derive(Debug, Clone)]
pub struct TestConfig {
    pub order: usize,
    pub interaction: Interaction,
    pub kernel: PdiKernelSpec,
    pub permutations: usize,
    pub seed: u64,
    pub engine: Engine,
}

impl TestConfig {
    pub fn new(kernel: PdiKernelSpec, order: usize) -> Self {
        Self { order, interaction: Interaction::Lancaster, kernel, permutations: 0, seed: 0, engine: Engine::Auto }
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        if self.kernel.n() != n {
            return Err(PdiError::Argument(format!("kernel has {} components, data has {n}", self.kernel.n())));
        }
        if self.order == 0 || self.order > n {
            return Err(PdiError::Argument(format!("order k = {} must lie in 1..={n}", self.order)));
        }
        if self.interaction == Interaction::Streitberg && self.order != n {
            return Err(PdiError::Argument(format!("Streitberg interaction requires k = n = {n}")));
        }
        if self.kernel.order() != self.order {
            return Err(PdiError::Argument(format!(
                "kernel of order {} cannot be paired with an order {} interaction",
                self.kernel.order(),
                self.order
            )));
        }
        Ok(())
    }
}

/// Outcome of a permutation test.
#[derive(Debug, Clone, PartialEq)]
pub struct TestReport {
    pub statistic: Real,
    pub p_value: Option<Real>,
    pub n: usize,
    pub k: usize,
    pub sample_size: usize,
    pub permutations: usize,
    pub seed: u64,
    pub engine: Engine,
    pub kernel: String,
    pub interaction: Interaction,
    pub null_calibration: NullCalibration,
    pub elapsed_ms: u64,
}
