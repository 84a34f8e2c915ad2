//! Independent numeric oracles for identities and inequalities.
//!
//! Quadratic forms are recomputed here with literal double loops over atoms
//! and PSD status is decided by a symmetric eigen-solver, so a check never
//! relies on the engine it is checking.

mod appendix;
mod inequalities;
mod kme;
mod kronecker;
mod psd;
mod suites;

use std::fmt;
use std::str::FromStr;

use rand::Rng as _;

pub use appendix::{appendix_identity_residual, appendix_rhs, AppendixVariant};
pub use inequalities::inequality_suite;
pub use kme::{kme_equivalence_residual, kme_side};
pub use kronecker::{kronecker_case, kronecker_sign_check, zero_witness, KroneckerCase};
pub use psd::{eigenvalues, psd_check, psd_violation};
pub use suites::{run_suite, Suite};

use crate::error::{PdiError, Result};
use crate::kernels::{pdi_eval, PdiKernelSpec};
use crate::measures::{DiscreteMeasure, ProductPoint, SpaceSignature};
use crate::rng::Rng;
use crate::Real;

/// Largest residual of one family of checks.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualReport {
    pub name: String,
    pub max_abs_residual: Real,
    pub max_rel_residual: Real,
    pub trials: usize,
    pub tolerance: Real,
    /// Recorded without being asserted.
    pub informational: bool,
    /// JSON payload reproducing the worst case.
    pub worst_case: serde_json::Value,
}

impl ResidualReport {
    pub fn passed(&self) -> bool {
        self.informational || (self.max_rel_residual.is_finite() && self.max_rel_residual <= self.tolerance)
    }
}

impl fmt::Display for ResidualReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.informational {
            "INFO"
        } else if self.passed() {
            "PASS"
        } else {
            "FAIL"
        };
        write!(
            f,
            "{status:4}  {:<44} trials={:<6} abs={:.3e} rel={:.3e} tol={:.0e}",
            self.name, self.trials, self.max_abs_residual, self.max_rel_residual, self.tolerance
        )
    }
}

/// Accumulates the worst residual seen over many trials.
pub(crate) struct Tracker {
    name: String,
    tolerance: Real,
    abs: Real,
    rel: Real,
    trials: usize,
    worst: serde_json::Value,
    informational: bool,
}

impl Tracker {
    pub(crate) fn new(name: impl Into<String>, tolerance: Real) -> Self {
        Self {
            name: name.into(),
            tolerance,
            abs: 0.0,
            rel: 0.0,
            trials: 0,
            worst: serde_json::Value::Null,
            informational: false,
        }
    }

    pub(crate) fn informational(mut self) -> Self {
        self.informational = true;
        self
    }

    /// Record residual `abs` measured against `scale`.
    pub(crate) fn observe(&mut self, abs: Real, scale: Real, payload: impl FnOnce() -> serde_json::Value) {
        self.trials += 1;
        let rel = if scale > 0.0 { abs / scale } else { abs };
        let rel = if rel.is_nan() { Real::INFINITY } else { rel };
        self.abs = self.abs.max(abs);
        if rel > self.rel || (self.worst.is_null() && rel >= self.rel) {
            self.rel = rel;
            self.worst = payload();
        }
    }

    pub(crate) fn finish(self) -> ResidualReport {
        ResidualReport {
            name: self.name,
            max_abs_residual: self.abs,
            max_rel_residual: self.rel,
            trials: self.trials.max(1),
            tolerance: self.tolerance,
            informational: self.informational,
            worst_case: self.worst,
        }
    }
}

pub(crate) fn point_json(x: &ProductPoint) -> serde_json::Value {
    serde_json::json!(x.components())
}

pub(crate) fn measure_json(mu: &DiscreteMeasure) -> serde_json::Value {
    serde_json::Value::Array(
        mu.atoms().iter().map(|(p, w)| serde_json::json!({ "point": p.components(), "weight": w })).collect(),
    )
}

pub(crate) fn random_point(rng: &mut Rng, sig: &SpaceSignature) -> ProductPoint {
    ProductPoint::new(sig.dims().iter().map(|&d| (0..d).map(|_| rng.random_range(-1.5..1.5)).collect()).collect())
}

/// Scalar or planar components, chosen at random.
pub(crate) fn random_signature(rng: &mut Rng, n: usize) -> SpaceSignature {
    SpaceSignature::new((0..n).map(|_| if rng.random_bool(0.3) { 2 } else { 1 }).collect())
        .expect("positive dimensions")
}

/// `(-1)^k sum a b I(u, v)` by a literal double loop.
pub(crate) fn quadratic_form(spec: &PdiKernelSpec, mu: &DiscreteMeasure, k: usize) -> Result<Real> {
    if spec.n() != mu.n() {
        return Err(PdiError::Argument("kernel and measure live on different spaces".into()));
    }
    let mut acc = 0.0;
    for (u, a) in mu.atoms() {
        for (v, b) in mu.atoms() {
            acc += a * b * pdi_eval(spec, u, v)?;
        }
    }
    Ok(if k.is_multiple_of(2) { acc } else { -acc })
}

/// `sum |a| |b| |I(u, v)|` over all atom pairs.
pub(crate) fn absolute_form(spec: &PdiKernelSpec, mu: &DiscreteMeasure) -> Result<Real> {
    let mut acc = 0.0;
    for (u, a) in mu.atoms() {
        for (v, b) in mu.atoms() {
            acc += (a * b * pdi_eval(spec, u, v)?).abs();
        }
    }
    Ok(acc)
}

impl FromStr for Suite {
    type Err = PdiError;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "all" => Suite::All,
            "psd" => Suite::Psd,
            "appendix" => Suite::Appendix,
            "inequalities" => Suite::Inequalities,
            "kme" => Suite::Kme,
            "kronecker" => Suite::Kronecker,
            _ => {
                return Err(PdiError::Argument(format!(
                    "unknown suite '{s}' (expected all, psd, appendix, inequalities, kme, kronecker)"
                )))
            }
        })
    }
}
