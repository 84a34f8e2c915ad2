use rand::Rng as _;
use rand_distr::StandardNormal;

use super::Dataset;
use crate::error::{PdiError, Result};
use crate::rng::{self, streams};
use crate::Real;

/// Synthetic data families with scalar components.
#[derive(Debug, Clone, PartialEq)]
pub enum SyntheticKind {
    /// i.i.d. standard normal components.
    Independent { n: usize },
    /// Binary `(X, Y, X xor Y)` with fair coins `X`, `Y`.
    XorTriple,
    /// Components in one block share a latent normal factor with loading
    /// `rho`; blocks are independent.
    Decomposable { blocks: Vec<usize>, rho: Real },
    /// Every component loads on one shared latent normal factor.
    CommonFactor { n: usize, loading: Real },
}

impl SyntheticKind {
    pub fn n(&self) -> usize {
        match self {
            Self::Independent { n } | Self::CommonFactor { n, .. } => *n,
            Self::XorTriple => 3,
            Self::Decomposable { blocks, .. } => blocks.iter().sum(),
        }
    }

    fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(PdiError::Argument(m.to_string()));
        match self {
            Self::Independent { n } | Self::CommonFactor { n, .. } if *n == 0 => bad("n must be positive"),
            Self::Decomposable { blocks, .. } if blocks.is_empty() || blocks.contains(&0) => {
                bad("decomposable blocks must be positive sizes")
            }
            Self::Decomposable { rho, .. } | Self::CommonFactor { loading: rho, .. }
                if rho.is_nan() || rho.abs() > 1.0 =>
            {
                bad("loading must lie in [-1, 1]")
            }
            _ => Ok(()),
        }
    }
}

/// Reproducible samples of `kind`.
pub fn generate_synthetic(kind: &SyntheticKind, n_samples: usize, seed: u64) -> Result<Dataset> {
    kind.validate()?;
    if n_samples == 0 {
        return Err(PdiError::Argument("number of samples must be positive".into()));
    }
    let mut rng = rng::stream(seed, streams::SYNTHETIC);
    let mut normal = move || -> Real { rng.sample(StandardNormal) };
    let rows: Vec<Vec<Real>> = (0..n_samples)
        .map(|_| match kind {
            SyntheticKind::Independent { n } => (0..*n).map(|_| normal()).collect(),
            SyntheticKind::XorTriple => {
                let x = (normal() > 0.0) as u8;
                let y = (normal() > 0.0) as u8;
                vec![x as Real, y as Real, (x ^ y) as Real]
            }
            SyntheticKind::Decomposable { blocks, rho } => {
                let noise = (1.0 - rho * rho).sqrt();
                let mut row = Vec::new();
                for &b in blocks {
                    let z = normal();
                    for _ in 0..b {
                        row.push(rho * z + noise * normal());
                    }
                }
                row
            }
            SyntheticKind::CommonFactor { n, loading } => {
                let noise = (1.0 - loading * loading).sqrt();
                let z = normal();
                (0..*n).map(|_| loading * z + noise * normal()).collect()
            }
        })
        .collect();
    Dataset::from_scalar_rows(&rows)
}
