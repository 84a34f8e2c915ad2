use pdi_core::combinat::SubsetIndex;
use pdi_core::kernels::library::{bernstein_atom, distance_multivariance, gaussian_product, sum_power};
use pdi_core::kernels::{
    bernstein_eval_g, bernstein_factor, cm_eval_psi, cnd_eval, e_ell, gram, induced_pd_eval, kgamma_eval, library,
    pdi_eval, preset, BernsteinAtom, BernsteinSpecK, CmFunctionSpec, ComponentCnd, FaceTerm, KroneckerFactor,
    LibraryKernel, PdiKernelSpec,
};
use pdi_core::measures::{mu_k, ProductPoint};
use proptest::prelude::*;

fn pt(v: &[f64]) -> ProductPoint {
    ProductPoint::scalars(v)
}

fn atom(r: Vec<f64>, weight: f64) -> BernsteinAtom {
    BernsteinAtom { r, weight }
}

#[test]
fn component_kernel_values() {
    let e1 = ComponentCnd::euclidean_power(1.0).unwrap();
    assert_eq!(cnd_eval(&e1, &[0.0], &[3.0]).unwrap(), 3.0);
    let sq = ComponentCnd::squared_euclidean();
    assert!((cnd_eval(&sq, &[0.0, 1.0], &[3.0, 5.0]).unwrap() - 25.0).abs() < 1e-14);
    for g in [e1.clone(), sq.clone(), ComponentCnd::euclidean_power(0.3).unwrap()] {
        assert_eq!(cnd_eval(&g, &[1.5, -2.0], &[1.5, -2.0]).unwrap(), 0.0);
    }
    assert!(ComponentCnd::euclidean_power(0.0).is_err());
    assert!(ComponentCnd::euclidean_power(2.5).is_err());
    assert!(cnd_eval(&e1, &[0.0], &[1.0, 2.0]).is_err());
}

#[test]
fn centered_kernel_values() {
    let sq = ComponentCnd::squared_euclidean();
    for (x, y) in [(1.0, 2.0), (-0.5, 3.0), (0.0, 7.0)] {
        assert!((kgamma_eval(&sq, &[0.0], &[x], &[y]).unwrap() - 2.0 * x * y).abs() < 1e-12);
    }
    let e = ComponentCnd::euclidean_power(1.3).unwrap();
    assert_eq!(kgamma_eval(&e, &[0.4], &[0.4], &[2.0]).unwrap(), 0.0);
}

#[test]
fn user_gram_kernel() {
    let values = vec![vec![0.0, 1.0, 4.0], vec![1.0, 0.0, 1.0], vec![4.0, 1.0, 0.0]];
    let points = vec![vec![0.0], vec![1.0], vec![2.0]];
    let g = ComponentCnd::gram(values, points.clone()).unwrap();
    assert_eq!(cnd_eval(&g, &[0.0], &[2.0]).unwrap(), 4.0);
    assert!(cnd_eval(&g, &[0.0], &[5.0]).is_err());
    let asym = vec![vec![0.0, 1.0, 4.0], vec![2.0, 0.0, 1.0], vec![4.0, 1.0, 0.0]];
    assert!(ComponentCnd::gram(asym, points.clone()).is_err());
    let diag = vec![vec![0.0, 1.0, 4.0], vec![1.0, 1.0, 1.0], vec![4.0, 1.0, 0.0]];
    assert!(ComponentCnd::gram(diag, points).is_err());
    let shifted = ComponentCnd::shifted(ComponentCnd::squared_euclidean(), 0.5).unwrap();
    assert_eq!(cnd_eval(&shifted, &[1.0], &[1.0]).unwrap(), 0.5);
    assert!(!shifted.is_zero_diagonal());
}

#[test]
fn bernstein_examples() {
    let linear = BernsteinSpecK::product_form(3, vec![atom(vec![0.0; 3], 1.0)]).unwrap();
    let t = [0.5f64, 2.0, 3.0];
    assert!((bernstein_eval_g(&linear, &t).unwrap() - 3.0).abs() < 1e-15);
    let g = BernsteinSpecK::product_form(2, vec![atom(vec![1.0, 1.0], 1.0)]).unwrap();
    let expect = 4.0 * (1.0 - (-1.0f64).exp()).powi(2);
    assert!((g.eval(&[1.0, 1.0]).unwrap() - expect).abs() < 1e-15);
    assert!((expect - 1.598306).abs() < 1e-6);
    assert!(g.eval(&[-1.0, 1.0]).is_err());
}

#[test]
fn series_fallback_is_continuous() {
    for r in [1e-3, 0.5, 1.0, 4.0] {
        let s = 1e-8 / r;
        let below = bernstein_factor(r, s * 0.999);
        let above = bernstein_factor(r, s * 1.001);
        assert!(above > below);
        assert!((above - below) / above < 3e-3);
    }
    assert_eq!(bernstein_factor(0.0, 2.5), 2.5);
}

#[test]
fn order_k_validation() {
    let face = FaceTerm {
        face: SubsetIndex::new(3, vec![0, 1]).unwrap(),
        spec: BernsteinSpecK::product_form(2, vec![atom(vec![1.0, 1.0], 1.0)]).unwrap(),
    };
    assert!(BernsteinSpecK::order_k(3, 2, vec![face.clone()], vec![]).is_ok());
    assert!(BernsteinSpecK::order_k(3, 2, vec![], vec![atom(vec![1.0, 0.0, 0.0], 1.0)]).is_err());
    let g = BernsteinSpecK::order_k(3, 2, vec![face], vec![atom(vec![1.0, 2.0, 0.5], 1.0)]).unwrap();
    // zero on the boundary where fewer than two entries are positive
    assert_eq!(g.eval(&[0.0, 0.0, 5.0]).unwrap(), 0.0);
    assert_eq!(g.eval(&[3.0, 0.0, 0.0]).unwrap(), 0.0);
    assert!(g.eval(&[1.0, 1.0, 0.0]).unwrap() > 0.0);
}

#[test]
fn completely_monotone_examples() {
    let psi = CmFunctionSpec::power(2, 1.5).unwrap();
    assert!((cm_eval_psi(&psi, 4.0f64).unwrap() - 8.0).abs() < 1e-14);
    assert_eq!(e_ell(2, 0.0), 0.0);
    assert!((e_ell(2, 1.0) - (-1.0f64).exp()).abs() < 1e-15);
    assert!((e_ell(1, 2.0) - (1.0 - (-2.0f64).exp())).abs() < 1e-16);
    assert!(CmFunctionSpec::power(2, 2.5).is_err());
    assert!(CmFunctionSpec::power(2, 0.5).is_err());
    assert!(CmFunctionSpec::power(2, 2.0).unwrap().is_polynomial());
    assert!(!CmFunctionSpec::power(2, 1.5).unwrap().is_polynomial());
}

#[test]
fn e_ell_series_and_closed_form_agree() {
    for ell in 1..=5usize {
        for s in [0.01f64, 0.3, 1.0, 2.9, 3.1, 6.0] {
            let closed =
                (-s).exp() - (0..ell).map(|j| (-s).powi(j as i32) / (1..=j).product::<usize>() as f64).sum::<f64>();
            let signed = if ell % 2 == 0 { closed } else { -closed };
            assert!((e_ell(ell, s) - signed).abs() <= 1e-12 * (1.0 + signed.abs()));
        }
    }
}

#[test]
fn single_precision_special_functions() {
    let a = e_ell(3, 0.7f32) as f64;
    let b = e_ell(3, 0.7f64);
    assert!((a - b).abs() < 1e-6);
    let g = BernsteinSpecK::product_form(2, vec![atom(vec![1.0, 0.5], 1.0)]).unwrap();
    let a = g.eval(&[0.3f32, 1.2]).unwrap() as f64;
    let b = g.eval(&[0.3f64, 1.2]).unwrap();
    assert!((a - b).abs() < 1e-5);
}

fn vanishes_on_diagonal(lk: &LibraryKernel) -> bool {
    matches!(lk.spec, PdiKernelSpec::Bernstein { .. }) || lk.name == "dcov"
}

#[test]
fn kernel_evaluation_examples() {
    let spec = bernstein_atom(vec![0.0, 0.0], vec![ComponentCnd::squared_euclidean(); 2]).unwrap();
    assert!((pdi_eval(&spec, &pt(&[0.0, 0.0]), &pt(&[1.0, 2.0])).unwrap() - 4.0).abs() < 1e-14);
    let sum = PdiKernelSpec::sum_form(
        CmFunctionSpec::power(2, 1.5).unwrap(),
        vec![ComponentCnd::euclidean_power(1.0).unwrap(); 3],
    )
    .unwrap();
    assert!((pdi_eval(&sum, &pt(&[0.0, 0.0, 0.0]), &pt(&[1.0, 1.0, 2.0])).unwrap() - 8.0).abs() < 1e-13);
    for n in 1..=4 {
        for k in 1..=n {
            for lk in library(n, k).unwrap().into_iter().filter(vanishes_on_diagonal) {
                let x = pt(&vec![0.7; n]);
                assert_eq!(pdi_eval(&lk.spec, &x, &x).unwrap(), 0.0, "{}", lk.name);
            }
        }
    }
}

#[test]
fn induced_kernel_examples() {
    let spec = distance_multivariance(2, 1.0).unwrap();
    let x0 = pt(&[0.0, 0.0]);
    assert_eq!(induced_pd_eval(&spec, 2, &x0, &x0, &pt(&[1.0, 2.0])).unwrap(), 0.0);
    // K(x, x) = 2^n I(x, x0) for order n kernels vanishing on the extended diagonal
    for n in 2..=4 {
        for lk in library(n, n).unwrap().into_iter().filter(vanishes_on_diagonal) {
            let x0 = pt(&(0..n).map(|i| 0.1 * i as f64).collect::<Vec<_>>());
            let x = pt(&(0..n).map(|i| 1.0 - 0.3 * i as f64).collect::<Vec<_>>());
            let kxx = induced_pd_eval(&lk.spec, n, &x0, &x, &x).unwrap();
            let expect = (1 << n) as f64 * pdi_eval(&lk.spec, &x, &x0).unwrap();
            assert!((kxx - expect).abs() <= 1e-10 * (1.0 + expect.abs()), "{}", lk.name);
            assert!(kxx > 0.0, "{}", lk.name);
        }
    }
}

#[test]
fn induced_kernel_matches_measure_expansion() {
    let spec = sum_power(3, 2, 1.5).unwrap();
    let x0 = pt(&[0.0, 0.5, -1.0]);
    let x1 = pt(&[1.0, 0.2, 0.3]);
    let x2 = pt(&[-0.4, 1.1, 0.9]);
    let m1 = mu_k(&x1, &x0, 2).unwrap();
    let m2 = mu_k(&x2, &x0, 2).unwrap();
    let mut acc = 0.0;
    for (u, a) in m1.atoms() {
        for (v, b) in m2.atoms() {
            acc += a * b * pdi_eval(&spec, u, v).unwrap();
        }
    }
    let val = induced_pd_eval(&spec, 2, &x0, &x1, &x2).unwrap();
    assert!((val - acc).abs() < 1e-12 * (1.0 + acc.abs()));
}

#[test]
fn gram_examples() {
    let spec = distance_multivariance(1, 1.0).unwrap();
    let one = gram(|a, b| pdi_eval(&spec, a, b), &[pt(&[1.0])]).unwrap();
    assert_eq!(one.rows(), vec![vec![0.0]]);
    let two = gram(|a, b| pdi_eval(&spec, a, b), &[pt(&[1.0]), pt(&[4.0])]).unwrap();
    assert_eq!(two.size(), 2);
    assert_eq!(two.get(0, 1), two.get(1, 0));
    assert_eq!(two.get(0, 1), 3.0);
    let bad = gram(|a: &f64, b: &f64| Ok(a - b), &[0.0, 1.0]);
    assert!(bad.is_err());
}

#[test]
fn kronecker_sign_products() {
    let d = distance_multivariance(2, 1.0).unwrap();
    assert!((pdi_eval(&d, &pt(&[0.0, 0.0]), &pt(&[2.0, 3.0])).unwrap() - 6.0).abs() < 1e-14);

    let g = gaussian_product(2, 2, 1.0).unwrap();
    let v = pdi_eval(&g, &pt(&[0.0, 0.0]), &pt(&[1.0, 2.0])).unwrap();
    assert!((v - (-5.0f64).exp()).abs() < 1e-15);

    let norm =
        PdiKernelSpec::sum_form(CmFunctionSpec::power(1, 0.5).unwrap(), vec![ComponentCnd::squared_euclidean(); 2])
            .unwrap();
    let gauss =
        PdiKernelSpec::sum_form(CmFunctionSpec::exponential(0, 1.0).unwrap(), vec![ComponentCnd::squared_euclidean()])
            .unwrap();
    let spec = PdiKernelSpec::kronecker(
        vec![
            KroneckerFactor { components: SubsetIndex::new(3, vec![0, 1]).unwrap(), spec: norm },
            KroneckerFactor { components: SubsetIndex::new(3, vec![2]).unwrap(), spec: gauss },
        ],
        2,
    )
    .unwrap();
    let v = pdi_eval(&spec, &pt(&[0.0, 0.0, 0.0]), &pt(&[3.0, 4.0, 1.0])).unwrap();
    assert!((v + 5.0 * (-1.0f64).exp()).abs() < 1e-14);
}

#[test]
fn kronecker_order_validation() {
    let dm = distance_multivariance(1, 1.0).unwrap();
    let gauss =
        PdiKernelSpec::sum_form(CmFunctionSpec::exponential(0, 1.0).unwrap(), vec![ComponentCnd::squared_euclidean()])
            .unwrap();
    let factors = |a: PdiKernelSpec, b: PdiKernelSpec| {
        vec![
            KroneckerFactor { components: SubsetIndex::new(2, vec![0]).unwrap(), spec: a },
            KroneckerFactor { components: SubsetIndex::new(2, vec![1]).unwrap(), spec: b },
        ]
    };
    assert!(PdiKernelSpec::kronecker(factors(dm.clone(), gauss.clone()), 2).is_ok());
    assert!(PdiKernelSpec::kronecker(factors(dm.clone(), gauss.clone()), 1).is_err());
    assert!(PdiKernelSpec::kronecker(factors(gauss.clone(), gauss), 1).is_ok());
    assert!(PdiKernelSpec::kronecker(factors(dm.clone(), dm), 3).is_err());
}

#[test]
fn library_tags_and_presets() {
    for n in 1..=5 {
        for k in 1..=n {
            let lib = library(n, k).unwrap();
            assert!(lib.len() >= 6);
            for lk in &lib {
                assert_eq!(lk.order, k);
                assert_eq!(lk.spec.order(), k);
                assert_eq!(lk.spec.n(), n);
            }
        }
    }
    assert!(library(2, 3).is_err());
    assert_eq!(preset("dcov", 3, 3).unwrap().order(), 3);
    assert!(preset("dcov", 3, 2).is_err());
    assert_eq!(preset("dhsic-gauss", 3, 2).unwrap().order(), 2);
    assert_eq!(preset("lancaster-pow:1.5", 3, 2).unwrap().order(), 2);
    let b = preset("bernstein-atom:0.5", 2, 2).unwrap();
    let expect = bernstein_atom(vec![0.5, 0.5], vec![ComponentCnd::euclidean_power(1.0).unwrap(); 2]).unwrap();
    let (x, y) = (pt(&[0.1, 0.2]), pt(&[1.0, -1.0]));
    assert_eq!(pdi_eval(&b, &x, &y).unwrap(), pdi_eval(&expect, &x, &y).unwrap());
    assert!(preset("bernstein-atom:1,2,3", 2, 2).is_err());
    assert!(preset("nope", 2, 2).is_err());
}

#[test]
fn product_structure_detection() {
    let (g, s) = distance_multivariance(3, 1.0).unwrap().cnd_product().unwrap();
    assert_eq!(g.len(), 3);
    assert_eq!(s, 1.0);
    let (_, s) =
        bernstein_atom(vec![0.0; 2], vec![ComponentCnd::squared_euclidean(); 2]).unwrap().cnd_product().unwrap();
    assert_eq!(s, 1.0);
    assert!(bernstein_atom(vec![1.0; 2], vec![ComponentCnd::squared_euclidean(); 2]).unwrap().cnd_product().is_none());
    assert!(gaussian_product(2, 2, 1.0).unwrap().cnd_product().is_none());
    assert!(sum_power(2, 2, 1.5).unwrap().cnd_product().is_none());
}

fn coords(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-2.0f64..2.0, n)
}

proptest! {
    #[test]
    fn coordinate_swaps_leave_kernels_unchanged(a in coords(3), b in coords(3), mask in 0u8..8, k in 1usize..=3, pick in 0usize..16) {
        let lib = library(3, k).unwrap();
        let lk = &lib[pick % lib.len()];
        let (mut c, mut d) = (a.clone(), b.clone());
        for i in 0..3 {
            if mask >> i & 1 == 1 {
                std::mem::swap(&mut c[i], &mut d[i]);
            }
        }
        let v = pdi_eval(&lk.spec, &pt(&a), &pt(&b)).unwrap();
        let w = pdi_eval(&lk.spec, &pt(&c), &pt(&d)).unwrap();
        prop_assert!((v - w).abs() <= 1e-12 * (1.0 + v.abs()));
    }

    #[test]
    fn shared_coordinates_can_be_replaced(a in coords(4), b in coords(4), shared in coords(4), mask in 1u8..16, k in 1usize..=4, pick in 0usize..16) {
        let lib = library(4, k).unwrap();
        let lk = &lib[pick % lib.len()];
        let (mut c, mut d, mut e, mut f) = (a.clone(), b.clone(), a.clone(), b.clone());
        for i in 0..4 {
            if mask >> i & 1 == 0 {
                c[i] = a[i];
                d[i] = a[i];
                e[i] = shared[i];
                f[i] = shared[i];
            }
        }
        let v = pdi_eval(&lk.spec, &pt(&c), &pt(&d)).unwrap();
        let w = pdi_eval(&lk.spec, &pt(&e), &pt(&f)).unwrap();
        prop_assert!((v - w).abs() <= 1e-12 * (1.0 + v.abs()));
    }

    #[test]
    fn bernstein_functions_are_monotone(t in prop::collection::vec(0.0f64..5.0, 3), dt in prop::collection::vec(0.0f64..5.0, 3), k in 1usize..=3) {
        for lk in library(3, k).unwrap() {
            if let PdiKernelSpec::Bernstein { g, .. } = &lk.spec {
                let up: Vec<f64> = t.iter().zip(&dt).map(|(a, b)| a + b).collect();
                prop_assert!(g.eval(&t).unwrap() <= g.eval(&up).unwrap() * (1.0 + 1e-12) + 1e-15);
            }
        }
    }

    #[test]
    fn gram_is_symmetric(points in prop::collection::vec(coords(2), 1..8), x0 in coords(2)) {
        let spec = sum_power(2, 2, 1.5).unwrap();
        let pts: Vec<ProductPoint> = points.iter().map(|p| pt(p)).collect();
        let g = gram(|a, b| induced_pd_eval(&spec, 2, &pt(&x0), a, b), &pts).unwrap();
        for i in 0..g.size() {
            for j in 0..g.size() {
                prop_assert_eq!(g.get(i, j), g.get(j, i));
            }
        }
    }
}
