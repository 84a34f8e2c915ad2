use rand::Rng as _;

use super::appendix::{appendix_rhs, AppendixVariant};
use super::inequalities::inequality_suite;
use super::kme::kme_side;
use super::kronecker::{kronecker_sign_check, kronecker_sign_sampling, zero_witness, KroneckerCase};
use super::psd::psd_violation;
use super::{absolute_form, measure_json, point_json, random_point, random_signature, ResidualReport, Tracker};
use crate::error::Result;
use crate::kernels::{
    gram, induced_pd_eval, kgamma_eval, library, pdi_eval, ComponentCnd, LibraryKernel, PdiKernelSpec,
};
use crate::measures::{random_mk, ProductPoint};
use crate::rng::{self, streams};
use crate::stats::{naive_stat, statistic_scale};
use crate::tolerances::{PSD_TOL, REL_TOL};

/// Named groups of checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    All,
    Psd,
    Appendix,
    Inequalities,
    Kme,
    Kronecker,
}

fn psd_suite(seed: u64, trials: usize) -> Result<Vec<ResidualReport>> {
    let mut out = Vec::new();
    for n in 2..=4usize {
        for k in 1..=n {
            let mut t = Tracker::new(format!("induced kernel PSD n={n} k={k}"), PSD_TOL);
            for lk in library(n, k)? {
                for trial in 0..trials {
                    let mut rng = rng::stream(seed, streams::VERIFY_BASE + ((n * 10 + k) as u64) * 1000 + trial as u64);
                    let sig = random_signature(&mut rng, n);
                    let m = rng.random_range(4..=12usize);
                    let x0 = random_point(&mut rng, &sig);
                    let pts: Vec<ProductPoint> = (0..m).map(|_| random_point(&mut rng, &sig)).collect();
                    let g = gram(|a, b| induced_pd_eval(&lk.spec, k, &x0, a, b), &pts)?;
                    let v = psd_violation(&g)?;
                    t.observe(v, 1.0, || serde_json::json!({ "kernel": lk.name, "trial": trial, "points": m }));
                }
            }
            out.push(t.finish());
        }
    }
    let mut t = Tracker::new("component K^gamma PSD", PSD_TOL);
    for trial in 0..trials {
        let mut rng = rng::stream(seed, streams::VERIFY_BASE + 500 + trial as u64);
        let dim = rng.random_range(1..=3usize);
        let pts: Vec<Vec<f64>> = (0..10).map(|_| (0..dim).map(|_| rng.random_range(-2.0..2.0)).collect()).collect();
        let w: Vec<f64> = (0..dim).map(|_| rng.random_range(-2.0..2.0)).collect();
        for gamma in
            [ComponentCnd::SquaredEuclidean, ComponentCnd::euclidean_power(1.0)?, ComponentCnd::euclidean_power(0.5)?]
        {
            let g = gram(|a: &Vec<f64>, b: &Vec<f64>| kgamma_eval(&gamma, &w, a, b), &pts)?;
            t.observe(psd_violation(&g)?, 1.0, || serde_json::json!({ "gamma": gamma.describe(), "trial": trial }));
        }
    }
    out.push(t.finish());
    Ok(out)
}

fn zero_on_first_diagonal(lk: &LibraryKernel) -> bool {
    matches!(lk.spec, PdiKernelSpec::Bernstein { .. }) && lk.spec.has_zero_diagonal_gammas()
}

fn appendix_suite(seed: u64, trials: usize, extended: bool) -> Result<Vec<ResidualReport>> {
    let mut out = Vec::new();
    let top = if extended { 5 } else { 4 };
    for n in 2..=top {
        let kernels: Vec<LibraryKernel> = library(n, 2)?.into_iter().filter(zero_on_first_diagonal).collect();
        let mut mins = Tracker::new(format!("appendix kernel minimum n={n}"), REL_TOL);
        if n == 5 {
            mins = mins.informational();
        }
        let mut min_value = f64::INFINITY;
        for (variant, label) in
            [(AppendixVariant::General, "general"), (AppendixVariant::CompleteSymmetric, "complete")]
        {
            let mut t = Tracker::new(format!("appendix identity n={n} {label}"), REL_TOL);
            for trial in 0..trials {
                let mut rng = rng::stream(seed, streams::VERIFY_BASE + 2000 + (n as u64) * 100 + trial as u64);
                let sig = random_signature(&mut rng, n);
                let (x1, x2, x3) =
                    (random_point(&mut rng, &sig), random_point(&mut rng, &sig), random_point(&mut rng, &sig));
                for lk in &kernels {
                    let lhs = pdi_eval(&lk.spec, &x1, &x2)?;
                    let rhs = appendix_rhs(&lk.spec, n, &x1, &x2, &x3, variant)?;
                    t.observe((lhs - rhs).abs(), 1.0 + lhs.abs(), || {
                        serde_json::json!({ "kernel": lk.name, "x1": point_json(&x1), "x2": point_json(&x2), "x3": point_json(&x3) })
                    });
                    if variant == AppendixVariant::General {
                        min_value = min_value.min(lhs);
                        mins.observe(
                            (-lhs).max(0.0),
                            1.0 + lhs.abs(),
                            || serde_json::json!({ "kernel": lk.name, "value": lhs }),
                        );
                    }
                }
            }
            out.push(t.finish());
        }
        let mut report = mins.finish();
        if let serde_json::Value::Object(map) = &mut report.worst_case {
            map.insert("min_value".into(), serde_json::json!(min_value));
        }
        out.push(report);
    }
    Ok(out)
}

fn kme_suite(seed: u64, trials: usize) -> Result<Vec<ResidualReport>> {
    let mut t = Tracker::new("kernel mean embedding identity", REL_TOL);
    let mut cross = Tracker::new("kernel mean embedding base point independence", REL_TOL);
    let mut trial = 0usize;
    let combos: Vec<(usize, usize)> = (1..=3).flat_map(|n| (1..=n).map(move |k| (n, k))).collect();
    while trial < trials {
        let (n, k) = combos[trial % combos.len()];
        let kernels = library(n, k)?;
        let lk = &kernels[(trial / combos.len()) % kernels.len()];
        let mut rng = rng::stream(seed, streams::VERIFY_BASE + 3000 + trial as u64);
        let sig = random_signature(&mut rng, n);
        let mu = random_mk(&sig, k, 2, seed.wrapping_add(7919 * trial as u64))?;
        let x0 = random_point(&mut rng, &sig);
        let x0b = random_point(&mut rng, &sig);
        let stat = naive_stat(&lk.spec, &mu, k)?;
        let side = kme_side(&lk.spec, k, &mu, &x0)?;
        let side_b = kme_side(&lk.spec, k, &mu, &x0b)?;
        let scale = statistic_scale(&lk.spec, &mu)?.max(absolute_form(&lk.spec, &mu)?);
        let payload =
            || serde_json::json!({ "kernel": lk.name, "k": k, "measure": measure_json(&mu), "x0": point_json(&x0) });
        t.observe((stat - side).abs(), scale, payload);
        cross.observe((side - side_b).abs(), scale, payload);
        trial += 1;
    }
    Ok(vec![t.finish(), cross.finish()])
}

fn kronecker_suite(seed: u64, trials: usize) -> Result<Vec<ResidualReport>> {
    let mut out = Vec::new();
    for case in KroneckerCase::ALL {
        out.push(kronecker_sign_check(case, seed, trials)?);
    }
    out.push(kronecker_sign_sampling(seed, trials)?);
    let (spec, mu, stat) = zero_witness()?;
    let mut t = Tracker::new("kronecker non-strict factor zero witness", REL_TOL);
    let scale = absolute_form(&spec, &mu)?;
    let nonzero = if mu.total_variation() > 0.0 { 0.0 } else { 1.0 };
    t.observe(
        stat.abs() + nonzero * scale.max(1.0),
        scale,
        || serde_json::json!({ "statistic": stat, "measure": measure_json(&mu) }),
    );
    out.push(t.finish());
    Ok(out)
}

/// Run `suite`; `extended` adds the `n = 5` order two expansion.
pub fn run_suite(suite: Suite, seed: u64, trials: usize, extended: bool) -> Result<Vec<ResidualReport>> {
    let trials = trials.max(1);
    Ok(match suite {
        Suite::Psd => psd_suite(seed, trials)?,
        Suite::Appendix => appendix_suite(seed, trials, extended)?,
        Suite::Inequalities => inequality_suite(seed, trials)?,
        Suite::Kme => kme_suite(seed, trials)?,
        Suite::Kronecker => kronecker_suite(seed, trials)?,
        Suite::All => {
            let mut out = Vec::new();
            for s in [Suite::Psd, Suite::Appendix, Suite::Inequalities, Suite::Kme, Suite::Kronecker] {
                out.extend(run_suite(s, seed, trials, extended)?);
            }
            out
        }
    })
}
