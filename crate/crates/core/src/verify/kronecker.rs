use rand::Rng as _;

use super::{absolute_form, measure_json, quadratic_form, ResidualReport, Tracker};
use crate::combinat::SubsetIndex;
use crate::error::Result;
use crate::kernels::{
    library, BernsteinAtom, BernsteinSpecK, CmFunctionSpec, ComponentCnd, KroneckerFactor, PdiKernelSpec,
};
use crate::measures::{product, random_mk, DiscreteMeasure, ProductPoint, SpaceSignature};
use crate::rng::{self, streams};
use crate::Real;

/// Statistics below this fraction of their absolute scale count as zero.
const POSITIVE_FLOOR: Real = 1e-12;

/// Block structures of two or more factors tested against `M_2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KroneckerCase {
    /// Three strictly PD factors.
    ManyPd,
    /// Two strictly CND factors on two components.
    TwoCnd,
    /// A strictly CND factor on two components times a strictly PD factor.
    CndTimesPd,
    /// Two strictly PD factors on blocks of two components.
    TwoPdBlocks,
}

impl KroneckerCase {
    pub const ALL: [KroneckerCase; 4] = [Self::ManyPd, Self::TwoCnd, Self::CndTimesPd, Self::TwoPdBlocks];

    pub fn label(self) -> &'static str {
        match self {
            Self::ManyPd => "(i) three PD factors",
            Self::TwoCnd => "(ii) two CND factors",
            Self::CndTimesPd => "(iii) CND block x PD factor",
            Self::TwoPdBlocks => "(iv) two PD blocks",
        }
    }
}

fn gaussian_block(m: usize) -> Result<PdiKernelSpec> {
    PdiKernelSpec::sum_form(CmFunctionSpec::exponential(0, 1.0)?, vec![ComponentCnd::SquaredEuclidean; m])
}

fn factor(n: usize, members: Vec<usize>, spec: PdiKernelSpec) -> Result<KroneckerFactor> {
    Ok(KroneckerFactor { components: SubsetIndex::new(n, members)?, spec })
}

/// Kernel and scalar signature of a case.
pub fn kronecker_case(case: KroneckerCase) -> Result<(PdiKernelSpec, SpaceSignature)> {
    let spec = match case {
        KroneckerCase::ManyPd => {
            PdiKernelSpec::kronecker((0..3).map(|i| factor(3, vec![i], gaussian_block(1)?)).collect::<Result<_>>()?, 2)?
        }
        KroneckerCase::TwoCnd => library::distance_multivariance(2, 1.0)?,
        KroneckerCase::CndTimesPd => {
            let norm =
                PdiKernelSpec::sum_form(CmFunctionSpec::power(1, 0.5)?, vec![ComponentCnd::SquaredEuclidean; 2])?;
            PdiKernelSpec::kronecker(vec![factor(3, vec![0, 1], norm)?, factor(3, vec![2], gaussian_block(1)?)?], 2)?
        }
        KroneckerCase::TwoPdBlocks => PdiKernelSpec::kronecker(
            vec![factor(4, vec![0, 1], gaussian_block(2)?)?, factor(4, vec![2, 3], gaussian_block(2)?)?],
            2,
        )?,
    };
    let sig = SpaceSignature::scalar(spec.n())?;
    Ok((spec, sig))
}

/// Strict positivity of the order two statistic of `case` on random nonzero
/// measures in `M_2`.
pub fn kronecker_sign_check(case: KroneckerCase, seed: u64, trials: usize) -> Result<ResidualReport> {
    let (spec, sig) = kronecker_case(case)?;
    let mut t = Tracker::new(format!("kronecker {}", case.label()), 0.0);
    let mut min_ratio = Real::INFINITY;
    for trial in 0..trials.max(1) {
        let mu = random_mk(&sig, 2, 2 + trial % 3, seed.wrapping_add(trial as u64))?;
        let stat = quadratic_form(&spec, &mu, 2)?;
        let scale = absolute_form(&spec, &mu)?;
        let ratio = stat / scale;
        min_ratio = min_ratio.min(ratio);
        let violation = (POSITIVE_FLOOR - ratio).max(0.0);
        t.observe(
            violation * scale,
            scale,
            || serde_json::json!({ "statistic": stat, "ratio": ratio, "measure": measure_json(&mu) }),
        );
    }
    let mut report = t.finish();
    if let serde_json::Value::Object(map) = &mut report.worst_case {
        map.insert("min_ratio".into(), serde_json::json!(min_ratio));
    }
    Ok(report)
}

/// A Kronecker kernel with a constant, hence not strictly CND, first factor
/// and a nonzero measure in `M_2` on which its statistic vanishes. Returns the
/// kernel, the measure and the statistic.
pub fn zero_witness() -> Result<(PdiKernelSpec, DiscreteMeasure, Real)> {
    let registry: Vec<Vec<Real>> = vec![vec![-1.0], vec![0.0], vec![1.0]];
    let constant = ComponentCnd::gram(vec![vec![1.0; 3]; 3], registry)?;
    let first = PdiKernelSpec::bernstein(
        BernsteinSpecK::product_form(1, vec![BernsteinAtom { r: vec![0.0], weight: 1.0 }])?,
        vec![constant],
    )?;
    let second = PdiKernelSpec::bernstein(
        BernsteinSpecK::product_form(1, vec![BernsteinAtom { r: vec![0.0], weight: 1.0 }])?,
        vec![ComponentCnd::euclidean_power(1.0)?],
    )?;
    let spec = PdiKernelSpec::kronecker(vec![factor(2, vec![0], first)?, factor(2, vec![1], second)?], 2)?;
    let one = SpaceSignature::scalar(1)?;
    let left = DiscreteMeasure::new(
        one.clone(),
        vec![
            (ProductPoint::scalars(&[-1.0]), 1.0),
            (ProductPoint::scalars(&[0.0]), -2.0),
            (ProductPoint::scalars(&[1.0]), 1.0),
        ],
    )?;
    let right =
        DiscreteMeasure::new(one, vec![(ProductPoint::scalars(&[0.3]), 1.0), (ProductPoint::scalars(&[1.7]), -1.0)])?;
    let mu = product(&[left, right])?;
    let stat = quadratic_form(&spec, &mu, 2)?;
    Ok((spec, mu, stat))
}

fn random_factor(rng: &mut crate::rng::Rng, m: usize) -> Result<PdiKernelSpec> {
    let choice = rng.random_range(0..if m >= 2 { 4 } else { 2 });
    match choice {
        0 => gaussian_block(m),
        1 => PdiKernelSpec::sum_form(CmFunctionSpec::power(1, 0.5)?, vec![ComponentCnd::euclidean_power(1.0)?; m]),
        2 => PdiKernelSpec::sum_form(CmFunctionSpec::power(2, 1.5)?, vec![ComponentCnd::euclidean_power(1.0)?; m]),
        _ => Ok(library(m, m)?.remove(0).spec),
    }
}

/// Nonnegativity of random Kronecker composites at every admissible order.
pub(crate) fn kronecker_sign_sampling(seed: u64, trials: usize) -> Result<ResidualReport> {
    let mut t = Tracker::new("kronecker sign sampling", 1e-9);
    let mut rng = rng::stream(seed, streams::VERIFY_BASE + 31);
    let layouts: [&[&[usize]]; 4] = [&[&[0], &[1]], &[&[0, 1], &[2]], &[&[0], &[1], &[2]], &[&[0, 1], &[2, 3]]];
    for trial in 0..trials.max(1) {
        let layout = layouts[trial % layouts.len()];
        let n: usize = layout.iter().map(|b| b.len()).sum();
        let factors: Vec<KroneckerFactor> =
            layout.iter().map(|b| factor(n, b.to_vec(), random_factor(&mut rng, b.len())?)).collect::<Result<_>>()?;
        let kmin = factors
            .iter()
            .map(|f| if f.spec.order() > 0 { f.spec.order() + n - f.components.len() } else { 1 })
            .max()
            .unwrap_or(1)
            .max(1);
        if kmin > n {
            continue;
        }
        let k = rng.random_range(kmin..=n);
        let spec = PdiKernelSpec::kronecker(factors, k)?;
        let sig = SpaceSignature::scalar(n)?;
        let mu = random_mk(&sig, k, 2, seed.wrapping_mul(31).wrapping_add(trial as u64))?;
        let stat = quadratic_form(&spec, &mu, k)?;
        let scale = absolute_form(&spec, &mu)?;
        t.observe(
            (-stat).max(0.0),
            scale,
            || serde_json::json!({ "kernel": spec.describe(), "k": k, "statistic": stat }),
        );
    }
    Ok(t.finish())
}
