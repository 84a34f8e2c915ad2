use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{PdiError, Result};
use crate::kernels::GramMatrix;
use crate::Real;

/// Eigenvalues of a symmetric matrix in increasing order.
pub fn eigenvalues(g: &GramMatrix) -> Result<Vec<Real>> {
    if g.values().iter().any(|v| !v.is_finite()) {
        return Err(PdiError::Argument("matrix has non-finite entries".into()));
    }
    let m = g.size();
    let mat = DMatrix::from_row_slice(m, m, g.values());
    let mut ev: Vec<Real> = SymmetricEigen::new(mat).eigenvalues.iter().copied().collect();
    ev.sort_by(Real::total_cmp);
    Ok(ev)
}

/// Relative PSD violation `max(0, -lambda_min) / max(1, lambda_max)`.
pub fn psd_violation(g: &GramMatrix) -> Result<Real> {
    let ev = eigenvalues(g)?;
    if ev.is_empty() {
        return Ok(0.0);
    }
    let (lo, hi) = (ev[0], ev[ev.len() - 1]);
    Ok((-lo).max(0.0) / hi.max(1.0))
}

/// `lambda_min >= -tol * max(1, lambda_max)`.
pub fn psd_check(g: &GramMatrix, tol: Real) -> Result<bool> {
    Ok(psd_violation(g)? <= tol)
}
