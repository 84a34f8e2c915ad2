use super::cnd::ComponentCnd;
use super::functions::{BernsteinAtom, BernsteinSpecK, CmFunctionSpec, FaceTerm};
use super::spec::{KroneckerFactor, PdiKernelSpec};
use crate::combinat::{subsets, SubsetIndex};
use crate::error::{PdiError, Result};
use crate::Real;

/// A ready made kernel with its order and strictness tag.
#[derive(Debug, Clone)]
pub struct LibraryKernel {
    pub name: String,
    pub spec: PdiKernelSpec,
    pub order: usize,
    pub strict: bool,
}

fn euclid(n: usize, beta: Real) -> Vec<ComponentCnd> {
    vec![ComponentCnd::EuclideanPower { beta }; n]
}

fn atom(r: Vec<Real>, weight: Real) -> BernsteinAtom {
    BernsteinAtom { r, weight }
}

fn entry(name: &str, spec: PdiKernelSpec, strict: bool) -> LibraryKernel {
    let order = spec.order();
    LibraryKernel { name: name.to_string(), spec, order, strict }
}

/// Gaussian factor `e^{-r ||x - y||^2}` on one component.
fn gaussian(r: Real) -> Result<PdiKernelSpec> {
    PdiKernelSpec::sum_form(CmFunctionSpec::exponential(0, r)?, vec![ComponentCnd::SquaredEuclidean])
}

/// Order one product factor `gamma` on one component.
fn cnd_factor(gamma: ComponentCnd) -> Result<PdiKernelSpec> {
    PdiKernelSpec::bernstein(BernsteinSpecK::product_form(1, vec![atom(vec![0.0], 1.0)])?, vec![gamma])
}

/// Distance multivariance kernel `prod_i ||x_i - y_i||^beta`.
pub fn distance_multivariance(n: usize, beta: Real) -> Result<PdiKernelSpec> {
    let factors = (0..n)
        .map(|i| {
            Ok(KroneckerFactor {
                components: SubsetIndex::new(n, vec![i])?,
                spec: cnd_factor(ComponentCnd::euclidean_power(beta)?)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    PdiKernelSpec::kronecker(factors, n)
}

/// Product of Gaussian kernels used as an order `k` kernel.
pub fn gaussian_product(n: usize, k: usize, r: Real) -> Result<PdiKernelSpec> {
    let factors = (0..n)
        .map(|i| Ok(KroneckerFactor { components: SubsetIndex::new(n, vec![i])?, spec: gaussian(r)? }))
        .collect::<Result<Vec<_>>>()?;
    PdiKernelSpec::kronecker(factors, k)
}

/// Sum form `(-1)^k (sum_i ||x_i - y_i||)^a` of order `k`.
pub fn sum_power(n: usize, k: usize, a: Real) -> Result<PdiKernelSpec> {
    PdiKernelSpec::sum_form(CmFunctionSpec::power(k, a)?, euclid(n, 1.0))
}

/// Single atom order `n` product form.
pub fn bernstein_atom(r: Vec<Real>, gammas: Vec<ComponentCnd>) -> Result<PdiKernelSpec> {
    PdiKernelSpec::bernstein(BernsteinSpecK::product_form(r.len(), vec![atom(r, 1.0)])?, gammas)
}

fn spread(n: usize, base: &[Real]) -> Vec<Real> {
    (0..n).map(|i| base[i % base.len()]).collect()
}

fn product_kernels(n: usize) -> Result<Vec<LibraryKernel>> {
    let g1 = BernsteinSpecK::product_form(n, vec![atom(vec![1.0; n], 1.0)])?;
    let g2 = BernsteinSpecK::product_form(n, vec![atom(vec![0.0; n], 1.0)])?;
    let g3 = BernsteinSpecK::product_form(
        n,
        vec![atom(spread(n, &[0.5, 2.0, 1.0]), 0.7), atom(spread(n, &[3.0, 0.0]), 0.4), atom(vec![0.25; n], 1.1)],
    )?;
    Ok(vec![
        entry("product-atom", PdiKernelSpec::bernstein(g1, euclid(n, 1.0))?, true),
        entry("product-linear", PdiKernelSpec::bernstein(g2, euclid(n, 1.5))?, false),
        entry("product-mixture", PdiKernelSpec::bernstein(g3, vec![ComponentCnd::SquaredEuclidean; n])?, true),
        entry("dcov", distance_multivariance(n, 1.0)?, false),
    ])
}

fn order_k_kernels(n: usize, k: usize) -> Result<Vec<LibraryKernel>> {
    let faces = |w: Real, r: Real| -> Result<Vec<FaceTerm>> {
        subsets(n, k)
            .into_iter()
            .map(|face| Ok(FaceTerm { face, spec: BernsteinSpecK::product_form(k, vec![atom(vec![r; k], w)])? }))
            .collect()
    };
    let mut sparse = vec![0.0; n];
    for (i, v) in sparse.iter_mut().enumerate().take(k + 1) {
        *v = 0.5 + i as Real;
    }
    let g1 = BernsteinSpecK::order_k(n, k, faces(1.0, 0.0)?, vec![atom(vec![1.0; n], 0.5)])?;
    let g2 =
        BernsteinSpecK::order_k(n, k, Vec::new(), vec![atom(spread(n, &[1.0, 2.0, 0.5]), 1.0), atom(sparse, 0.3)])?;
    let g3 = BernsteinSpecK::order_k(n, k, faces(0.8, 1.5)?, Vec::new())?;
    Ok(vec![
        entry("order-k-faces", PdiKernelSpec::bernstein(g1, euclid(n, 1.0))?, true),
        entry("order-k-atoms", PdiKernelSpec::bernstein(g2, vec![ComponentCnd::SquaredEuclidean; n])?, true),
        entry("order-k-face-only", PdiKernelSpec::bernstein(g3, euclid(n, 0.5))?, false),
    ])
}

/// Library kernels of order `k` on `n` scalar or vector components, all built
/// on zero diagonal component kernels.
pub fn library(n: usize, k: usize) -> Result<Vec<LibraryKernel>> {
    if n == 0 || k == 0 || k > n {
        return Err(PdiError::Argument(format!("library kernels need 1 <= k <= n (n = {n}, k = {k})")));
    }
    let mut out = if k == n { product_kernels(n)? } else { order_k_kernels(n, k)? };
    let l = k as Real;
    out.push(entry("sum-power", sum_power(n, k, l - 0.5)?, true));
    out.push(entry("sum-polynomial", sum_power(n, k, l)?, false));
    if k >= 2 {
        out.push(entry("sum-log-power", PdiKernelSpec::sum_form(CmFunctionSpec::log_power(k)?, euclid(n, 1.0))?, true));
    }
    out.push(entry(
        "sum-exponential",
        PdiKernelSpec::sum_form(CmFunctionSpec::exponential(k, 1.0)?, vec![ComponentCnd::SquaredEuclidean; n])?,
        true,
    ));
    out.push(entry(
        "sum-shifted-power",
        PdiKernelSpec::sum_form(CmFunctionSpec::shifted_power(k, 1.0, l - 0.5)?, euclid(n, 1.0))?,
        true,
    ));
    let sign = if k.is_multiple_of(2) { 1.0 } else { -1.0 };
    out.push(entry(
        "sum-mixture",
        PdiKernelSpec::sum_form(
            CmFunctionSpec::mixture(k, 0.25 * sign, vec![(0.5, 1.0), (2.0, 0.5)])?,
            euclid(n, 1.0),
        )?,
        true,
    ));
    out.push(entry("gaussian-product", gaussian_product(n, k, 1.0)?, true));
    if k >= 2 && n >= 2 {
        let head = SubsetIndex::new(n, (0..n - 1).collect())?;
        let tail = SubsetIndex::new(n, vec![n - 1])?;
        let norm =
            PdiKernelSpec::sum_form(CmFunctionSpec::power(1, 0.5)?, vec![ComponentCnd::SquaredEuclidean; n - 1])?;
        let spec = PdiKernelSpec::kronecker(
            vec![
                KroneckerFactor { components: head, spec: norm },
                KroneckerFactor { components: tail, spec: gaussian(1.0)? },
            ],
            k,
        )?;
        out.push(entry("norm-times-gaussian", spec, true));
    }
    Ok(out)
}

/// Named kernel presets: `dcov`, `dhsic-gauss`, `lancaster-pow:<a>` and
/// `bernstein-atom:<r1,..,rn>` (a single rate is broadcast).
pub fn preset(name: &str, n: usize, k: usize) -> Result<PdiKernelSpec> {
    let (head, arg) = match name.split_once(':') {
        Some((h, a)) => (h, Some(a)),
        None => (name, None),
    };
    let num = |s: &str| -> Result<Real> {
        s.trim()
            .parse::<Real>()
            .map_err(|_| PdiError::Argument(format!("cannot parse '{s}' as a number in preset '{name}'")))
    };
    match (head, arg) {
        ("dcov", None) => {
            if k != n {
                return Err(PdiError::Argument(format!("dcov is an order n kernel; got k = {k}, n = {n}")));
            }
            distance_multivariance(n, 1.0)
        }
        ("dhsic-gauss", None) => gaussian_product(n, k, 1.0),
        ("lancaster-pow", Some(a)) => sum_power(n, k, num(a)?),
        ("bernstein-atom", Some(list)) => {
            if k != n {
                return Err(PdiError::Argument(format!("bernstein-atom is an order n kernel; got k = {k}, n = {n}")));
            }
            let r = list.split(',').map(num).collect::<Result<Vec<_>>>()?;
            let r = match r.len() {
                1 => vec![r[0]; n],
                m if m == n => r,
                m => return Err(PdiError::Argument(format!("bernstein-atom needs 1 or {n} rates, got {m}"))),
            };
            bernstein_atom(r, euclid(n, 1.0))
        }
        _ => Err(PdiError::Argument(format!(
            "unknown kernel preset '{name}' (expected dcov, dhsic-gauss, lancaster-pow:<a>, bernstein-atom:<r>)"
        ))),
    }
}
