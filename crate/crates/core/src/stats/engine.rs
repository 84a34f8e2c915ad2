use std::collections::HashMap;

use rayon::prelude::*;

use super::{Dataset, Interaction};
use crate::combinat::binomial;
use crate::error::{PdiError, Result};
use crate::kernels::{pdi_eval, ComponentCnd, PdiKernelSpec};
use crate::measures::{empirical, lancaster_self, streitberg, DiscreteMeasure};
use crate::tolerances::{MAX_ATOM_PAIRS, MAX_EXPANSION_ATOMS, SCALE_PAIRS};
use crate::Real;

fn key(x: &[Real]) -> Vec<u64> {
    x.iter().map(|&v| if v == 0.0 { 0 } else { v.to_bits() }).collect()
}

/// Per component index of the distinct values among the atoms, with the
/// component kernel evaluated once per pair of distinct values.
struct ComponentTables {
    index: Vec<Vec<usize>>,
    gamma: Vec<(usize, Vec<Real>)>,
}

impl ComponentTables {
    fn build(gammas: &[ComponentCnd], points: &[&crate::measures::ProductPoint]) -> Result<Self> {
        let mut index = Vec::with_capacity(gammas.len());
        let mut gamma = Vec::with_capacity(gammas.len());
        for (i, g) in gammas.iter().enumerate() {
            let mut seen: HashMap<Vec<u64>, usize> = HashMap::new();
            let mut values: Vec<&[Real]> = Vec::new();
            let idx: Vec<usize> = points
                .iter()
                .map(|p| {
                    let c = p.component(i);
                    *seen.entry(key(c)).or_insert_with(|| {
                        values.push(c);
                        values.len() - 1
                    })
                })
                .collect();
            let m = values.len();
            let mut table = vec![0.0; m * m];
            for a in 0..m {
                for b in a..m {
                    let v = g.eval(values[a], values[b])?;
                    table[a * m + b] = v;
                    table[b * m + a] = v;
                }
            }
            index.push(idx);
            gamma.push((m, table));
        }
        Ok(Self { index, gamma })
    }

    fn fill(&self, a: usize, b: usize, t: &mut [Real]) {
        for (i, (m, table)) in self.gamma.iter().enumerate() {
            t[i] = table[self.index[i][a] * m + self.index[i][b]];
        }
    }
}

fn check_pairs(atoms: usize) -> Result<()> {
    if atoms.saturating_mul(atoms) > MAX_ATOM_PAIRS {
        return Err(PdiError::Capacity(format!(
            "double sum over {atoms} atoms exceeds the limit of {MAX_ATOM_PAIRS} atom pairs"
        )));
    }
    Ok(())
}

/// `S = (-1)^k sum_{(u,a)} sum_{(v,b)} a b I(u, v)`.
pub fn naive_stat(spec: &PdiKernelSpec, mu: &DiscreteMeasure, k: usize) -> Result<Real> {
    if spec.n() != mu.n() {
        return Err(PdiError::Argument(format!("kernel on {} components, measure on {}", spec.n(), mu.n())));
    }
    let atoms = mu.atoms();
    if atoms.is_empty() {
        return Ok(0.0);
    }
    check_pairs(atoms.len())?;
    let points: Vec<_> = atoms.iter().map(|(p, _)| p).collect();
    let tables = ComponentTables::build(&spec.gammas(), &points)?;
    let n = spec.n();
    let rows: Vec<Real> = (0..atoms.len())
        .into_par_iter()
        .map(|a| -> Result<Real> {
            let mut t = vec![0.0; n];
            tables.fill(a, a, &mut t);
            let wa = atoms[a].1;
            let mut off = 0.0;
            for (b, (_, wb)) in atoms.iter().enumerate().skip(a + 1) {
                tables.fill(a, b, &mut t);
                off += wb * spec.eval_t(&t)?;
            }
            tables.fill(a, a, &mut t);
            Ok(wa * (wa * spec.eval_t(&t)? + 2.0 * off))
        })
        .collect::<Result<_>>()?;
    let s: Real = rows.iter().sum();
    Ok(if k.is_multiple_of(2) { s } else { -s })
}

/// Scale used for tolerances: `TV(mu)^2 max |I|` over a fixed subsample of
/// atom pairs.
pub fn statistic_scale(spec: &PdiKernelSpec, mu: &DiscreteMeasure) -> Result<Real> {
    let atoms = mu.atoms();
    let m = atoms.len();
    if m == 0 {
        return Ok(0.0);
    }
    let mut max = 0.0_f64;
    for p in 0..SCALE_PAIRS {
        let a = (p * 7919) % m;
        let b = (p * 104_729 + p / m) % m;
        max = max.max(pdi_eval(spec, &atoms[a].0, &atoms[b].0)?.abs());
    }
    let tv = mu.total_variation();
    Ok(tv * tv * max)
}

fn lancaster_estimate(n: usize, k: usize, size: usize) -> usize {
    let pow = |e: usize| (0..e).fold(1usize, |acc, _| acc.saturating_mul(size));
    let mut est = size;
    for j in 0..k {
        let per = if j == 0 { pow(n) } else { pow(n - j + 1) };
        est = est.saturating_add((binomial(n, j) as usize).saturating_mul(per));
    }
    est
}

/// Interaction measure `Lambda^n_k[P]` or `Sigma[P]` of the empirical law.
pub fn interaction_measure(data: &Dataset, k: usize, mode: Interaction) -> Result<DiscreteMeasure> {
    let n = data.n();
    let p = empirical(data.samples())?;
    match mode {
        Interaction::Lancaster => {
            let est = lancaster_estimate(n, k, data.len());
            if est > MAX_EXPANSION_ATOMS {
                return Err(PdiError::Capacity(format!(
                    "Lancaster expansion of N = {} samples at n = {n}, k = {k} may produce about {est} atoms, limit {MAX_EXPANSION_ATOMS}; reduce N or use the fast engine",
                    data.len()
                )));
            }
            lancaster_self(&p, k)
        }
        Interaction::Streitberg => {
            if k != n {
                return Err(PdiError::Argument(format!("Streitberg interaction requires k = n = {n}")));
            }
            streitberg(&p)
        }
    }
}

/// Statistic of the empirical interaction measure.
pub fn interaction_stat(spec: &PdiKernelSpec, data: &Dataset, k: usize, mode: Interaction) -> Result<Real> {
    let mu = interaction_measure(data, k, mode)?;
    naive_stat(spec, &mu, k)
}

/// Distance multivariance `(1/N^2) sum_{a,b} prod_i A_i(a, b)` with `A_i` the
/// double centred matrix of `-gamma_i` on the samples of component `i`.
pub fn fast_multivariance(gammas: &[ComponentCnd], data: &Dataset) -> Result<Real> {
    let n = data.n();
    if gammas.len() != n {
        return Err(PdiError::Argument(format!("{} component kernels for {n} components", gammas.len())));
    }
    if let Some(g) = gammas.iter().find(|g| !g.is_zero_diagonal()) {
        return Err(PdiError::Argument(format!("fast engine needs zero diagonal kernels, got {}", g.describe())));
    }
    let size = data.len();
    let samples = data.samples();
    let centred: Vec<Vec<Real>> = gammas
        .iter()
        .enumerate()
        .map(|(i, g)| -> Result<Vec<Real>> {
            let mut a = vec![0.0; size * size];
            for r in 0..size {
                for c in r + 1..size {
                    let v = -g.eval(samples[r].component(i), samples[c].component(i))?;
                    a[r * size + c] = v;
                    a[c * size + r] = v;
                }
            }
            let means: Vec<Real> = a.chunks(size).map(|row| row.iter().sum::<Real>() / size as Real).collect();
            let grand = means.iter().sum::<Real>() / size as Real;
            for r in 0..size {
                for c in 0..size {
                    a[r * size + c] += grand - means[r] - means[c];
                }
            }
            Ok(a)
        })
        .collect::<Result<_>>()?;
    let rows: Vec<Real> = (0..size)
        .into_par_iter()
        .map(|r| (0..size).map(|c| centred.iter().map(|m| m[r * size + c]).product::<Real>()).sum::<Real>())
        .collect();
    Ok(rows.iter().sum::<Real>() / (size * size) as Real)
}
