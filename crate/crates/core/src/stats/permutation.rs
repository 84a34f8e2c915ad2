use std::time::Instant;

use rand::seq::SliceRandom;
use rayon::prelude::*;

use super::engine::{fast_multivariance, interaction_stat};
use super::{Dataset, Engine, Interaction, NullCalibration, TestConfig, TestReport};
use crate::error::{PdiError, Result};
use crate::rng::{self, streams};
use crate::Real;

/// Relative slack when comparing permuted statistics with the observed one.
const TIE_REL: Real = 1e-12;

fn fast_reason(cfg: &TestConfig, n: usize) -> Option<&'static str> {
    let Some((gammas, _)) = cfg.kernel.cnd_product() else {
        return Some("the kernel is not a product of component CND kernels");
    };
    if cfg.order != n {
        return Some("the fast engine needs k = n");
    }
    if gammas.iter().any(|g| !g.is_zero_diagonal()) {
        return Some("the fast engine needs zero diagonal component kernels");
    }
    if cfg.interaction == Interaction::Streitberg && n > 3 {
        return Some("the Streitberg interaction differs from the Lancaster one for n > 3");
    }
    None
}

/// Engine actually used for `cfg`: `auto` picks the fast path when legal.
pub fn resolve_engine(cfg: &TestConfig, n: usize) -> Result<Engine> {
    match (cfg.engine, fast_reason(cfg, n)) {
        (Engine::Fast, Some(why)) => Err(PdiError::Argument(format!("fast engine unavailable: {why}"))),
        (Engine::Fast, None) | (Engine::Auto, None) => Ok(Engine::Fast),
        _ => Ok(Engine::Naive),
    }
}

fn statistic(cfg: &TestConfig, data: &Dataset, engine: Engine) -> Result<Real> {
    match engine {
        Engine::Fast => {
            let (gammas, scale) = cfg.kernel.cnd_product().expect("checked by resolve_engine");
            Ok(scale * fast_multivariance(&gammas, data)?)
        }
        _ => interaction_stat(&cfg.kernel, data, cfg.order, cfg.interaction),
    }
}

/// Observed statistic and, for `B > 0`, the permutation p-value
/// `(1 + #{S_b >= S_0}) / (B + 1)` where replicate `b` permutes every
/// component independently using stream `b` of the seed.
pub fn permutation_test(cfg: &TestConfig, data: &Dataset) -> Result<TestReport> {
    let start = Instant::now();
    let n = data.n();
    cfg.validate(n)?;
    let engine = resolve_engine(cfg, n)?;
    let observed = statistic(cfg, data, engine)?;
    let size = data.len();
    let p_value = if cfg.permutations == 0 {
        None
    } else {
        let threshold = observed - TIE_REL * observed.abs();
        let hits: Vec<bool> = (1..=cfg.permutations as u64)
            .into_par_iter()
            .map(|b| -> Result<bool> {
                let mut rng = rng::stream(cfg.seed, streams::PERMUTATION_BASE + b);
                let perms: Vec<Vec<usize>> = (0..n)
                    .map(|_| {
                        let mut p: Vec<usize> = (0..size).collect();
                        p.shuffle(&mut rng);
                        p
                    })
                    .collect();
                Ok(statistic(cfg, &data.permuted(&perms), engine)? >= threshold)
            })
            .collect::<Result<_>>()?;
        let count = hits.iter().filter(|&&h| h).count();
        Some((1 + count) as Real / (cfg.permutations + 1) as Real)
    };
    let null_calibration =
        if cfg.order > 2 && cfg.order < n { NullCalibration::Heuristic } else { NullCalibration::Exact };
    Ok(TestReport {
        statistic: observed,
        p_value,
        n,
        k: cfg.order,
        sample_size: size,
        permutations: cfg.permutations,
        seed: cfg.seed,
        engine,
        kernel: cfg.kernel.describe(),
        interaction: cfg.interaction,
        null_calibration,
        elapsed_ms: start.elapsed().as_millis() as u64,
    })
}
