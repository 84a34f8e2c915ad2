use crate::error::{PdiError, Result};
use crate::kernels::{induced_pd_eval, PdiKernelSpec};
use crate::measures::{in_mk, DiscreteMeasure, ProductPoint};
use crate::stats::naive_stat;
use crate::tolerances::REL_TOL;
use crate::Real;

/// `sum a b K(u, v)` over the atoms of `mu`, `K` the induced PD kernel with
/// base point `x0`.
pub fn kme_side(spec: &PdiKernelSpec, k: usize, mu: &DiscreteMeasure, x0: &ProductPoint) -> Result<Real> {
    let mut acc = 0.0;
    for (u, a) in mu.atoms() {
        for (v, b) in mu.atoms() {
            acc += a * b * induced_pd_eval(spec, k, x0, u, v)?;
        }
    }
    Ok(acc)
}

/// `|naive_stat(spec, mu, k) - sum a b K(u, v)|` for `mu` in `M_k`.
pub fn kme_equivalence_residual(
    spec: &PdiKernelSpec,
    k: usize,
    mu: &DiscreteMeasure,
    x0: &ProductPoint,
) -> Result<Real> {
    if !in_mk(mu, k, REL_TOL)? {
        return Err(PdiError::Argument(format!("measure is not in M_{k}")));
    }
    Ok((naive_stat(spec, mu, k)? - kme_side(spec, k, mu, x0)?).abs())
}
