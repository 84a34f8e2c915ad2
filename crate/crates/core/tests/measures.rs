use pdi_core::combinat::SubsetIndex;
use pdi_core::measures::{
    delta2, empirical, in_mab, in_mk, lancaster, lancaster_self, mu_k, partition_product, product, random_mk,
    streitberg,
};
use pdi_core::{DiscreteMeasure, ProductPoint, SpaceSignature};
use proptest::prelude::*;

fn pt(v: &[f64]) -> ProductPoint {
    ProductPoint::scalars(v)
}

fn one_dim(points: &[(f64, f64)]) -> DiscreteMeasure {
    DiscreteMeasure::new(SpaceSignature::scalar(1).unwrap(), points.iter().map(|&(x, w)| (pt(&[x]), w)).collect())
        .unwrap()
}

fn sub(n: usize, m: &[usize]) -> SubsetIndex {
    SubsetIndex::new(n, m.to_vec()).unwrap()
}

/// Empirical measure of random integer valued samples on a small grid.
fn random_empirical(n: usize, size: usize, seed: u64) -> DiscreteMeasure {
    let mut state = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
    let mut next = || {
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        ((state >> 33) % 3) as f64
    };
    let samples: Vec<ProductPoint> = (0..size).map(|_| pt(&(0..n).map(|_| next()).collect::<Vec<_>>())).collect();
    empirical(&samples).unwrap()
}

#[test]
fn normalize_examples() {
    let sig = SpaceSignature::scalar(2).unwrap();
    let p = pt(&[0.0, 1.0]);
    let q = pt(&[1.0, 1.0]);
    let cancel = DiscreteMeasure::new(sig.clone(), vec![(p.clone(), 1.0), (p.clone(), -1.0)]).unwrap();
    assert!(cancel.normalize(0.0).is_empty());
    let two = DiscreteMeasure::new(sig.clone(), vec![(p.clone(), 0.5), (q.clone(), 0.5)]).unwrap();
    assert_eq!(two.normalize(0.0).atoms(), two.atoms());
    let merged = DiscreteMeasure::new(sig, vec![(p.clone(), 1.0), (p.clone(), 1.0)]).unwrap().normalize(0.0);
    assert_eq!(merged.atoms(), &[(p, 2.0)]);
}

#[test]
fn marginal_examples() {
    let sig = SpaceSignature::scalar(2).unwrap();
    let d = DiscreteMeasure::dirac(sig, pt(&[3.0, 4.0])).unwrap();
    let m = d.marginal(&sub(2, &[0])).unwrap();
    assert_eq!(m.atoms(), &[(pt(&[3.0]), 1.0)]);

    let mu1 = one_dim(&[(0.0, 2.0), (1.0, 1.0)]);
    let mu2 = one_dim(&[(5.0, 0.25), (6.0, 0.75)]);
    let prod = product(&[mu1, mu2.clone()]).unwrap();
    let second = prod.marginal(&sub(2, &[1])).unwrap();
    assert!(second.distance(&mu2.scaled(3.0)).unwrap() < 1e-14);
}

#[test]
fn product_examples() {
    let d = product(&[one_dim(&[(1.0, 1.0)]), one_dim(&[(2.0, 1.0)])]).unwrap();
    assert_eq!(d.atoms(), &[(pt(&[1.0, 2.0]), 1.0)]);
    let four = product(&[one_dim(&[(0.0, 1.0), (1.0, -1.0)]), one_dim(&[(2.0, 1.0), (3.0, -1.0)])]).unwrap();
    let mut weights: Vec<f64> = four.atoms().iter().map(|a| a.1).collect();
    weights.sort_by(f64::total_cmp);
    assert_eq!(weights, vec![-1.0, -1.0, 1.0, 1.0]);

    let centered = one_dim(&[(0.0, 0.5), (2.0, -0.5)]);
    let prob = one_dim(&[(1.0, 0.3), (4.0, 0.7)]);
    let m = product(&[centered.clone(), prob.clone(), centered.clone(), prob]).unwrap();
    assert!(in_mk(&m, 2, 1e-12).unwrap());
    assert!(!in_mk(&m, 3, 1e-12).unwrap());
}

#[test]
fn membership_examples() {
    let p = random_empirical(3, 7, 1);
    assert!(!in_mk(&p, 1, 1e-12).unwrap());
    assert!(in_mk(&lancaster_self(&p, 2).unwrap(), 2, 1e-12).unwrap());
    assert!(in_mk(&streitberg(&p).unwrap(), 3, 1e-12).unwrap());
}

#[test]
fn membership_agrees_with_rectangles() {
    // Brute-force rectangle test: every rectangle constraining at most k - 1
    // coordinates to single grid values must carry zero mass.
    for seed in 0..10 {
        let p = random_empirical(3, 6, seed);
        for k in 1..=3 {
            let mu = lancaster_self(&p, k).unwrap();
            let grid = [0.0, 1.0, 2.0];
            let mut all_zero = true;
            for mask in 0u32..8 {
                if mask.count_ones() as usize >= k {
                    continue;
                }
                for a in grid {
                    for b in grid {
                        for c in grid {
                            let v = [a, b, c];
                            let mass: f64 = mu
                                .atoms()
                                .iter()
                                .filter(|(x, _)| (0..3).all(|i| mask >> i & 1 == 0 || x.component(i)[0] == v[i]))
                                .map(|a| a.1)
                                .sum();
                            all_zero &= mass.abs() < 1e-12;
                        }
                    }
                }
            }
            assert!(all_zero);
            assert_eq!(in_mk(&mu, k, 1e-12).unwrap(), all_zero);
        }
    }
}

#[test]
fn split_membership() {
    let sig = SpaceSignature::scalar(3).unwrap();
    let mu = random_mk(&sig, 2, 2, 5).unwrap();
    assert!(in_mab(&mu, 0, 0, 2, 1e-12).unwrap());
    // a = max(k - m, 0) = 1, b = max(k - n, 0) = 0 with n = 2, m = 1
    assert!(in_mab(&mu, 1, 0, 2, 1e-12).unwrap());

    let sig2 = SpaceSignature::scalar(2).unwrap();
    let lam = random_mk(&sig2, 2, 2, 9).unwrap();
    let sig1 = SpaceSignature::scalar(1).unwrap();
    let eta = random_mk(&sig1, 1, 3, 10).unwrap();
    let joint = product(&[lam, eta]).unwrap();
    assert!(in_mab(&joint, 2, 1, 2, 1e-12).unwrap());
}

#[test]
fn lancaster_examples() {
    let p = random_empirical(3, 8, 3);
    let l2 = lancaster_self(&p, 2).unwrap();
    let singles: Vec<DiscreteMeasure> = (0..3).map(|i| p.marginal(&sub(3, &[i])).unwrap()).collect();
    let indep = product(&singles).unwrap();
    assert!(l2.distance(&p.add_scaled(&indep, -1.0).unwrap()).unwrap() < 1e-14);
    assert!(lancaster(&p, &indep, 2).unwrap().distance(&l2).unwrap() < 1e-14);

    let x1 = pt(&[0.0, 1.0, 2.0]);
    let x2 = pt(&[3.0, 4.0, 5.0]);
    let sig = SpaceSignature::scalar(3).unwrap();
    let d1 = DiscreteMeasure::dirac(sig.clone(), x1.clone()).unwrap();
    let d2 = DiscreteMeasure::dirac(sig.clone(), x2.clone()).unwrap();
    for k in 1..=3 {
        let via = lancaster(&d1, &d2, k).unwrap();
        assert!(via.distance(&mu_k(&x1, &x2, k).unwrap()).unwrap() < 1e-14);
        assert!(lancaster(&d1, &d1, k).unwrap().is_empty());
    }
    assert!(lancaster_self(&indep, 2).unwrap().total_variation() < 1e-14);
}

#[test]
fn lancaster_vanishes_with_singleton_block() {
    let p = random_empirical(2, 9, 4);
    let single = random_empirical(1, 5, 11);
    let joint = product(&[p, single]).unwrap();
    assert!(lancaster_self(&joint, 3).unwrap().total_variation() < 1e-14);
}

#[test]
fn lancaster_is_multiplicative() {
    for seed in 0..5 {
        let a = random_empirical(2, 6, seed);
        let b = random_empirical(2, 5, seed + 100);
        let joint = product(&[a.clone(), b.clone()]).unwrap();
        let lhs = lancaster_self(&joint, 4).unwrap();
        let rhs = product(&[lancaster_self(&a, 2).unwrap(), lancaster_self(&b, 2).unwrap()]).unwrap();
        assert!(lhs.distance(&rhs).unwrap() < 1e-12);
    }
}

#[test]
fn streitberg_examples() {
    let p = random_empirical(2, 7, 8);
    let pp = product(&[p.marginal(&sub(2, &[0])).unwrap(), p.marginal(&sub(2, &[1])).unwrap()]).unwrap();
    assert!(streitberg(&p).unwrap().distance(&p.add_scaled(&pp, -1.0).unwrap()).unwrap() < 1e-14);

    let p = random_empirical(3, 9, 12);
    let m = |f: &[usize]| p.marginal(&sub(3, f)).unwrap();
    let mut expect = p.normalize(0.0);
    for (pair, single) in [([0, 1], 2), ([0, 2], 1), ([1, 2], 0)] {
        let term = partition_product(&p, &[sub(3, &pair), sub(3, &[single])]).unwrap();
        expect = expect.add_scaled(&term, -1.0).unwrap();
    }
    let all = product(&[m(&[0]), m(&[1]), m(&[2])]).unwrap();
    expect = expect.add_scaled(&all, 2.0).unwrap();
    assert!(streitberg(&p).unwrap().distance(&expect).unwrap() < 1e-14);

    let decomposable = product(&[random_empirical(2, 6, 1), random_empirical(1, 4, 2)]).unwrap();
    assert!(streitberg(&decomposable).unwrap().total_variation() < 1e-12);
}

#[test]
fn point_mass_interactions() {
    let x1 = pt(&[0.0, 1.0, 2.0]);
    let x2 = pt(&[0.0, 1.0, 7.0]);
    assert!(mu_k(&x1, &x2, 2).unwrap().is_empty());
    assert!(!mu_k(&x1, &x2, 1).unwrap().is_empty());
    let x3 = pt(&[5.0, 6.0, 7.0]);
    let full = mu_k(&x1, &x3, 3).unwrap();
    assert_eq!(full.len(), 8);
    assert!(full.atoms().iter().all(|a| a.1.abs() == 1.0));
    for k in 1..=3 {
        assert!(mu_k(&x1, &x3, k).unwrap().total_mass().abs() < 1e-15);
        assert!(mu_k(&x1, &x1, k).unwrap().is_empty());
    }
    assert!(delta2(&x1, &x1).unwrap().is_empty());
    let d = delta2(&x1, &x3).unwrap();
    assert!(d.total_mass().abs() < 1e-15);
    assert!(in_mk(&d, 2, 1e-12).unwrap());
}

#[test]
fn empirical_examples() {
    let x = pt(&[1.0, 2.0]);
    assert_eq!(empirical(std::slice::from_ref(&x)).unwrap().atoms(), &[(x.clone(), 1.0)]);
    assert_eq!(empirical(&[x.clone(), x.clone()]).unwrap().atoms(), &[(x.clone(), 1.0)]);
    let three = empirical(&[x, pt(&[0.0, 0.0]), pt(&[3.0, 3.0])]).unwrap();
    assert_eq!(three.len(), 3);
    assert!(three.atoms().iter().all(|a| (a.1 - 1.0 / 3.0).abs() < 1e-16));
}

#[test]
fn random_elements_are_reproducible() {
    let sig = SpaceSignature::new(vec![1, 2, 1]).unwrap();
    for k in 1..=3 {
        let a = random_mk(&sig, k, 3, 42).unwrap();
        assert!(in_mk(&a, k, 1e-12).unwrap());
        assert!(a.total_variation() > 0.0);
        assert_eq!(a, random_mk(&sig, k, 3, 42).unwrap());
    }
    let full = random_mk(&sig, 3, 2, 1).unwrap();
    for i in 0..3 {
        let m = full.marginal(&sub(3, &[i])).unwrap();
        assert!(m.total_variation() < 1e-12 * full.total_variation());
    }
}

proptest! {
    #[test]
    fn interactions_are_in_their_spaces(seed in 0u64..1000, n in 2usize..=5, size in 2usize..=6) {
        let p = random_empirical(n, size, seed);
        for k in 1..=n.min(3) {
            prop_assert!(in_mk(&lancaster_self(&p, k).unwrap(), k, 1e-12).unwrap());
        }
        prop_assert!(in_mk(&streitberg(&p).unwrap(), n, 1e-12).unwrap());
    }

    #[test]
    fn point_mass_measure_in_mk(a in prop::collection::vec(-2.0f64..2.0, 4), b in prop::collection::vec(-2.0f64..2.0, 4), k in 1usize..=4) {
        let mu = mu_k(&pt(&a), &pt(&b), k).unwrap();
        prop_assert!(in_mk(&mu, k, 1e-12).unwrap());
    }
}
