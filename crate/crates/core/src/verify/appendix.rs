use crate::combinat::subsets;
use crate::error::{PdiError, Result};
use crate::kernels::{pdi_eval, PdiKernelSpec};
use crate::measures::{delta2, ProductPoint};
use crate::Real;

/// Which form of the order two expansion to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AppendixVariant {
    /// Expansion over `x1`, `x2` only; needs `I` zero on the extended
    /// diagonal of pairs agreeing in all but one coordinate.
    General,
    /// Expansion with a third point filling the off-face coordinates; needs
    /// in addition complete `n`-symmetry.
    CompleteSymmetric,
}

/// `||K_{delta2[a, b]}||^2` as the plain double sum of `I` over the atoms.
fn delta2_norm(spec: &PdiKernelSpec, a: &ProductPoint, b: &ProductPoint) -> Result<Real> {
    let d = delta2(a, b)?;
    let mut acc = 0.0;
    for (u, wu) in d.atoms() {
        for (v, wv) in d.atoms() {
            acc += wu * wv * pdi_eval(spec, u, v)?;
        }
    }
    Ok(acc)
}

/// Coefficient of a face of size `f` whose complement takes `ones` coordinates
/// from `x1` and `twos` from `x2`.
fn general_coefficient(n: usize, f: usize, ones: usize, twos: usize) -> Real {
    let (lo, hi) = (ones.min(twos), ones.max(twos));
    match (n, f) {
        (2, 2) => 1.0 / 16.0,
        (3, 3) => 1.0 / 24.0,
        (3, 2) => 1.0 / 96.0,
        (4, 4) => 1.0 / 40.0,
        (4, 3) => 1.0 / 120.0,
        (4, 2) => 1.0 / 960.0,
        (5, _) => match (hi, lo) {
            (0, 0) => 1.0 / 60.0,
            (1, 0) => 1.0 / 240.0,
            (2, 0) => 1.0 / 360.0,
            (1, 1) => 1.0 / 720.0,
            (3, 0) => -1.0 / 640.0,
            (2, 1) => -1.0 / 5760.0,
            _ => unreachable!("complement of a face of size >= 2 has at most 3 coordinates"),
        },
        _ => unreachable!("unsupported face size"),
    }
}

fn complete_coefficient(n: usize, f: usize) -> Real {
    match (n, f) {
        (2, 2) => 1.0 / 16.0,
        (3, 3) => 1.0 / 24.0,
        (3, 2) => 1.0 / 48.0,
        (4, 4) => 1.0 / 40.0,
        (4, 3) => 1.0 / 60.0,
        (4, 2) => 1.0 / 240.0,
        (5, 5) => 1.0 / 60.0,
        (5, 4) => 1.0 / 120.0,
        (5, 3) => 1.0 / 120.0,
        (5, 2) => -1.0 / 240.0,
        _ => unreachable!("unsupported face size"),
    }
}

/// Point taking coordinate `i` from `xs[idx[i]]`.
fn pick(xs: [&ProductPoint; 3], idx: &[usize]) -> ProductPoint {
    ProductPoint::new(idx.iter().enumerate().map(|(i, &s)| xs[s].component(i).to_vec()).collect())
}

/// Right hand side of the order two expansion of `I(x1, x2)` as a
/// combination of squared norms `||K_{delta2[a, b]}||^2`.
pub fn appendix_rhs(
    spec: &PdiKernelSpec,
    n: usize,
    x1: &ProductPoint,
    x2: &ProductPoint,
    x3: &ProductPoint,
    variant: AppendixVariant,
) -> Result<Real> {
    if !(2..=5).contains(&n) {
        return Err(PdiError::Argument(format!("the order two expansion is available for n in 2..=5, got {n}")));
    }
    if spec.n() != n || x1.n() != n || x2.n() != n || x3.n() != n {
        return Err(PdiError::Argument("kernel and points must all have n components".into()));
    }
    let xs = [x1, x2, x3];
    let mut acc = 0.0;
    for f in 2..=n {
        for face in subsets(n, f) {
            let rest = face.complement();
            match variant {
                AppendixVariant::CompleteSymmetric => {
                    let mut ia = vec![2; n];
                    let mut ib = vec![2; n];
                    for &i in face.members() {
                        ia[i] = 0;
                        ib[i] = 1;
                    }
                    acc += complete_coefficient(n, f) * delta2_norm(spec, &pick(xs, &ia), &pick(xs, &ib))?;
                }
                AppendixVariant::General => {
                    let m = rest.len();
                    for bits in 0..1usize << m {
                        let mut ia = vec![0; n];
                        let mut ib = vec![1; n];
                        for (slot, &i) in rest.members().iter().enumerate() {
                            let s = bits >> slot & 1;
                            ia[i] = s;
                            ib[i] = s;
                        }
                        let twos = bits.count_ones() as usize;
                        let c = general_coefficient(n, f, m - twos, twos);
                        acc += c * delta2_norm(spec, &pick(xs, &ia), &pick(xs, &ib))?;
                    }
                }
            }
        }
    }
    Ok(acc)
}

/// `|I(x1, x2) - RHS|` for the order two expansion.
pub fn appendix_identity_residual(
    spec: &PdiKernelSpec,
    n: usize,
    x1: &ProductPoint,
    x2: &ProductPoint,
    x3: &ProductPoint,
    variant: AppendixVariant,
) -> Result<Real> {
    let rhs = appendix_rhs(spec, n, x1, x2, x3, variant)?;
    Ok((pdi_eval(spec, x1, x2)? - rhs).abs())
}
