//! Numeric thresholds shared by the kernels, stats and verify modules.

/// Weights below this fraction of the total variation are treated as zero.
pub const ZERO_WEIGHT_REL: f64 = 1e-15;

/// Relative tolerance for general floating comparisons.
pub const REL_TOL: f64 = 1e-9;

/// Absolute floor paired with [`REL_TOL`].
pub const ABS_FLOOR: f64 = 1e-12;

/// PSD threshold: `lambda_min >= -PSD_TOL * max(1, lambda_max)`.
pub const PSD_TOL: f64 = 1e-8;

/// Maximal relative asymmetry accepted when assembling a Gram matrix.
pub const GRAM_ASYMMETRY: f64 = 1e-10;

/// Relative symmetry tolerance for user supplied Gram matrices.
pub const USER_GRAM_SYMMETRY: f64 = 1e-12;

/// Probability inputs must have total mass within this distance of one.
pub const PROBABILITY_MASS: f64 = 1e-9;

/// Below this value of `r t` the Bernstein factor switches to its series.
pub const SERIES_SWITCH: f64 = 1e-8;

/// Upper bound on atoms produced by an interaction expansion.
pub const MAX_EXPANSION_ATOMS: usize = 10_000_000;

/// Upper bound on atom pairs visited by a double sum.
pub const MAX_ATOM_PAIRS: usize = 100_000_000;

/// Number of atom pairs sampled when estimating a statistic's scale.
pub const SCALE_PAIRS: usize = 64;

/// `true` when `a` and `b` agree to relative `rel` with absolute floor `abs`.
pub fn close(a: f64, b: f64, rel: f64, abs: f64) -> bool {
    (a - b).abs() <= abs.max(rel * a.abs().max(b.abs()))
}
