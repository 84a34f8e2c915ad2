use rand::Rng as _;

use super::{point_json, random_point, random_signature, ResidualReport, Tracker};
use crate::combinat::{binomial, elem_sym, h_poly, subsets};
use crate::error::Result;
use crate::kernels::{bernstein_factor, e_ell, library, pdi_eval, BernsteinSpecK, PdiKernelSpec};
use crate::measures::ProductPoint;
use crate::rng::{self, streams, Rng};
use crate::tolerances::REL_TOL;
use crate::Real;

fn log_uniform(rng: &mut Rng, lo: Real, hi: Real) -> Real {
    (rng.random_range(lo.ln()..hi.ln())).exp()
}

/// Nonnegative vector with roughly a quarter of the entries zero.
fn random_t(rng: &mut Rng, n: usize) -> Vec<Real> {
    (0..n).map(|_| if rng.random_bool(0.25) { 0.0 } else { log_uniform(rng, 1e-3, 1e2) }).collect()
}

/// Library Bernstein functions of order `k` in `n` variables.
fn bernstein_library(n: usize, k: usize) -> Result<Vec<(String, BernsteinSpecK)>> {
    Ok(library(n, k)?
        .into_iter()
        .filter_map(|lk| match lk.spec {
            PdiKernelSpec::Bernstein { g, .. } => Some((lk.name, g)),
            _ => None,
        })
        .collect())
}

fn bern1(grid: usize) -> ResidualReport {
    let mut t = Tracker::new("bernstein factor bounds 1 <= f(s) <= 2", 1e-12);
    for i in 0..grid {
        let s = (1e-8f64.ln() + (1e3f64.ln() - 1e-8f64.ln()) * i as Real / (grid - 1) as Real).exp();
        let f = bernstein_factor(s, 1.0);
        t.observe((1.0 - f).max(f - 2.0).max(0.0), 1.0, || serde_json::json!({ "s": s, "f": f }));
    }
    t.finish()
}

fn h_bounds(rng: &mut Rng, samples: usize) -> Result<ResidualReport> {
    let mut t = Tracker::new("H polynomial bounds", REL_TOL);
    for _ in 0..samples {
        let n = rng.random_range(2..=6usize);
        let k = rng.random_range(1..=n);
        let a: Vec<Real> = (0..n).map(|_| rng.random_range(0.0..=1.0)).collect();
        let b: Vec<Real> = a.iter().map(|x| 1.0 - x).collect();
        let pk = elem_sym(k, &b)?;
        let h = h_poly(k, n, &a)?;
        let mid = if k % 2 == 0 { h } else { -h };
        let lo = pk / binomial(n, k) as Real;
        let v = (-lo).max(lo - mid).max(mid - pk).max(0.0);
        t.observe(v, 1.0 + pk.abs(), || serde_json::json!({ "n": n, "k": k, "a": a }));
    }
    Ok(t.finish())
}

fn product_bounds(rng: &mut Rng, samples: usize) -> Result<Vec<ResidualReport>> {
    let mut growth = Tracker::new("order n growth g(t) <= g(1) prod (1 + t_i)", REL_TOL);
    let mut sub = Tracker::new("order n subadditivity over mixed sums", REL_TOL);
    let mut mono = Tracker::new("order n monotonicity", REL_TOL);
    for n in 2..=4 {
        for (name, g) in bernstein_library(n, n)? {
            let g1 = g.eval(&vec![1.0; n])?;
            for _ in 0..samples {
                let t1 = random_t(rng, n);
                let t2 = random_t(rng, n);
                let v = g.eval(&t1)?;
                let bound = g1 * t1.iter().map(|x| 1.0 + x).product::<Real>();
                growth.observe((v - bound).max(0.0), 1.0 + bound.abs(), || serde_json::json!({ "g": name, "t": t1 }));
                let sum: Vec<Real> = t1.iter().zip(&t2).map(|(a, b)| a + b).collect();
                let lhs = g.eval(&sum)?;
                let mut rhs = 0.0;
                for bits in 0..1usize << n {
                    let ta: Vec<Real> = (0..n).map(|i| if bits >> i & 1 == 1 { t2[i] } else { t1[i] }).collect();
                    rhs += g.eval(&ta)?;
                }
                sub.observe(
                    (lhs - rhs).max(0.0),
                    1.0 + rhs.abs(),
                    || serde_json::json!({ "g": name, "t1": t1, "t2": t2 }),
                );
                mono.observe(
                    (v - lhs).max(0.0),
                    1.0 + lhs.abs(),
                    || serde_json::json!({ "g": name, "t": t1, "dt": t2 }),
                );
            }
        }
    }
    Ok(vec![growth.finish(), sub.finish(), mono.finish()])
}

fn growth_order_k(rng: &mut Rng, samples: usize) -> Result<Vec<ResidualReport>> {
    let mut t = Tracker::new("order k growth against faces", REL_TOL);
    let mut mono = Tracker::new("order k monotonicity", REL_TOL);
    for (n, k) in [(2, 1), (3, 1), (3, 2), (4, 1), (4, 2), (4, 3), (5, 2), (5, 3)] {
        for (name, g) in bernstein_library(n, k)? {
            for _ in 0..samples {
                let tv = random_t(rng, n);
                let v = g.eval(&tv)?;
                let mut faces = 0.0;
                for f in subsets(n, k) {
                    let tf: Vec<Real> = (0..n).map(|i| if f.contains(i) { tv[i] } else { 0.0 }).collect();
                    faces += g.eval(&tf)?;
                }
                let lo = faces / binomial(n, k) as Real;
                t.observe(
                    (lo - v).max(v - faces).max(0.0),
                    1.0 + faces.abs(),
                    || serde_json::json!({ "g": name, "n": n, "k": k, "t": tv }),
                );
                let up: Vec<Real> = tv.iter().map(|x| x + log_uniform(rng, 1e-3, 10.0)).collect();
                let w = g.eval(&up)?;
                mono.observe((v - w).max(0.0), 1.0 + w.abs(), || serde_json::json!({ "g": name, "t": tv, "t_up": up }));
            }
        }
    }
    Ok(vec![t.finish(), mono.finish()])
}

/// `x1_F + x3_{F^c}` and `x2_F + x3_{F^c}`.
fn face_pair(
    x1: &ProductPoint,
    x2: &ProductPoint,
    x3: &ProductPoint,
    f: &crate::combinat::SubsetIndex,
) -> (ProductPoint, ProductPoint) {
    (x1.mix(x3, f), x2.mix(x3, f))
}

fn complete_symmetric_bounds(rng: &mut Rng, samples: usize) -> Result<Vec<ResidualReport>> {
    let mut out = Vec::new();
    let mut constants = Tracker::new("empirical C_{n,k} (max |I| / face sum)", 0.0).informational();
    for (n, factor) in [(3usize, 16.0 / 48.0), (4, 16.0 / 240.0)] {
        let mut t = Tracker::new(format!("complete symmetric lower bound n={n} k=2"), REL_TOL);
        let kernels: Vec<_> =
            library(n, 2)?.into_iter().filter(|lk| matches!(lk.spec, PdiKernelSpec::Bernstein { .. })).collect();
        for lk in &kernels {
            for _ in 0..samples {
                let sig = random_signature(rng, n);
                let (x1, x2, x3) = (random_point(rng, &sig), random_point(rng, &sig), random_point(rng, &sig));
                let v = pdi_eval(&lk.spec, &x1, &x2)?;
                let mut faces = 0.0;
                for f in subsets(n, 2) {
                    let (a, b) = face_pair(&x1, &x2, &x3, &f);
                    faces += pdi_eval(&lk.spec, &a, &b)?;
                }
                let lo = factor * faces;
                t.observe((lo - v).max(0.0), 1.0 + v.abs(), || {
                    serde_json::json!({ "kernel": lk.name, "x1": point_json(&x1), "x2": point_json(&x2), "x3": point_json(&x3) })
                });
                if faces > 0.0 {
                    constants.observe(
                        v.abs() / faces,
                        1.0,
                        || serde_json::json!({ "kernel": lk.name, "n": n, "ratio": v.abs() / faces }),
                    );
                }
            }
        }
        out.push(t.finish());
    }
    out.push(constants.finish());
    Ok(out)
}

fn e_ell_shape(grid: usize) -> Vec<ResidualReport> {
    let mut t = Tracker::new("E_l nonnegative, increasing, convex", REL_TOL);
    let h = 20.0 / grid as Real;
    for ell in 1..=6usize {
        let vals: Vec<Real> = (0..=grid).map(|i| e_ell(ell, i as Real * h)).collect();
        for i in 0..=grid {
            let e = vals[i];
            let mut v = (-e).max(0.0);
            if i > 0 {
                v = v.max(vals[i - 1] - e);
            }
            if ell > 1 && i > 0 && i < grid {
                v = v.max(2.0 * e - vals[i - 1] - vals[i + 1]);
            }
            t.observe(v, 1.0 + e.abs(), || serde_json::json!({ "l": ell, "s": i as Real * h }));
        }
    }
    vec![t.finish()]
}

fn factorial(m: usize) -> Real {
    (1..=m).map(|i| i as Real).product()
}

fn cm_bounds(rng: &mut Rng, samples: usize) -> Vec<ResidualReport> {
    let mut two = Tracker::new("CM_l representation bounds", REL_TOL);
    let mut three = Tracker::new("CM_l scaling ratio bounds", REL_TOL);
    for _ in 0..samples {
        let ell = rng.random_range(1..=6usize);
        let r = log_uniform(rng, 1e-4, 1e3);
        let t = log_uniform(rng, 1e-4, 1e3);
        let mid = e_ell(ell, r * t) * (1.0 + r) / r.powi(ell as i32);
        let lo = t.powi(ell as i32).min(t.powi(ell as i32 - 1)) / factorial(ell);
        let hi = (1.0 + t.powi(ell as i32)) / factorial(ell - 1);
        two.observe((lo - mid).max(mid - hi).max(0.0), hi, || serde_json::json!({ "l": ell, "r": r, "t": t }));
        let s = log_uniform(rng, 1.0, 50.0);
        let t = log_uniform(rng, 1e-4, 1e2);
        let ratio = e_ell(ell, s * t) / e_ell(ell, t);
        let bound = ell as Real * s.powi(ell as i32);
        three.observe((-ratio).max(ratio - bound).max(0.0), bound, || serde_json::json!({ "l": ell, "s": s, "t": t }));
    }
    vec![two.finish(), three.finish()]
}

/// Sampled inequalities on Bernstein, `H`, `E_l` and order two kernels.
pub fn inequality_suite(seed: u64, trials: usize) -> Result<Vec<ResidualReport>> {
    let trials = trials.max(1);
    let mut rng = rng::stream(seed, streams::VERIFY_BASE + 17);
    let mut out = vec![bern1((40 * trials).max(2000))];
    out.push(h_bounds(&mut rng, 40 * trials)?);
    out.extend(product_bounds(&mut rng, 4 * trials)?);
    out.extend(growth_order_k(&mut rng, 4 * trials)?);
    out.extend(complete_symmetric_bounds(&mut rng, 4 * trials)?);
    out.extend(e_ell_shape((4 * trials).max(400)));
    out.extend(cm_bounds(&mut rng, 40 * trials));
    Ok(out)
}
