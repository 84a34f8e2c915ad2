use pdi_core::kernels::library::{distance_multivariance, gaussian_product, sum_power};
use pdi_core::kernels::{library, ComponentCnd};
use pdi_core::measures::{in_mk, mu_k, ProductPoint};
use pdi_core::stats::{
    fast_multivariance, generate_synthetic, interaction_measure, interaction_stat, naive_stat, permutation_test,
    resolve_engine, statistic_scale, Engine, Interaction, NullCalibration, SyntheticKind,
};
use pdi_core::{Dataset, DiscreteMeasure, PdiError, SpaceSignature, TestConfig};
use proptest::prelude::*;

/// `(3 - 3 * 2^2.5 + 3^2.5) / 8`, from the exact expansion over the eight
/// corners of the cube.
const XOR_GOLDEN: f64 = 0.20223681495534438;

fn xor_rows() -> Vec<Vec<f64>> {
    vec![vec![0.0, 0.0, 0.0], vec![0.0, 1.0, 1.0], vec![1.0, 0.0, 1.0], vec![1.0, 1.0, 0.0]]
}

fn project(rows: &[Vec<f64>], cols: &[usize]) -> Dataset {
    let r: Vec<Vec<f64>> = rows.iter().map(|row| cols.iter().map(|&c| row[c]).collect()).collect();
    Dataset::from_scalar_rows(&r).unwrap()
}

#[test]
fn naive_statistic_examples() {
    let spec = distance_multivariance(2, 1.0).unwrap();
    let mu = mu_k(&ProductPoint::scalars(&[0.0, 0.0]), &ProductPoint::scalars(&[1.0, 1.0]), 2).unwrap();
    assert!((naive_stat(&spec, &mu, 2).unwrap() - 4.0).abs() < 1e-14);
    let zero = DiscreteMeasure::zero(SpaceSignature::scalar(2).unwrap());
    assert_eq!(naive_stat(&spec, &zero, 2).unwrap(), 0.0);
}

#[test]
fn fast_engine_examples() {
    let gammas = vec![ComponentCnd::euclidean_power(1.0).unwrap(); 2];
    let one = Dataset::from_scalar_rows(&[vec![0.3, 0.4]]).unwrap();
    assert_eq!(fast_multivariance(&gammas, &one).unwrap(), 0.0);
    let two = Dataset::from_scalar_rows(&[vec![0.0, 0.0], vec![1.0, 1.0]]).unwrap();
    assert!((fast_multivariance(&gammas, &two).unwrap() - 0.25).abs() < 1e-15);
    let spec = distance_multivariance(2, 1.0).unwrap();
    let naive = interaction_stat(&spec, &two, 2, Interaction::Lancaster).unwrap();
    assert!((naive - 0.25).abs() < 1e-15);
}

#[test]
fn xor_is_pairwise_independent() {
    let rows = xor_rows();
    for pair in [[0, 1], [0, 2], [1, 2]] {
        let data = project(&rows, &pair);
        for lk in library(2, 2).unwrap() {
            let s = interaction_stat(&lk.spec, &data, 2, Interaction::Lancaster).unwrap();
            assert!(s.abs() < 1e-12, "{} on {:?}: {s}", lk.name, pair);
        }
    }
}

#[test]
fn xor_three_way_statistic() {
    let data = Dataset::from_scalar_rows(&xor_rows()).unwrap();
    let spec = sum_power(3, 3, 2.5).unwrap();
    for mode in [Interaction::Lancaster, Interaction::Streitberg] {
        let s = interaction_stat(&spec, &data, 3, mode).unwrap();
        assert!((s - XOR_GOLDEN).abs() < 1e-12, "{mode}: {s}");
    }
    let closed = (3.0 - 3.0 * 2f64.powf(2.5) + 3f64.powf(2.5)) / 8.0;
    assert!((closed - XOR_GOLDEN).abs() < 1e-15);
}

#[test]
fn interaction_measures_lie_in_their_spaces() {
    let data = generate_synthetic(&SyntheticKind::Independent { n: 3 }, 6, 4).unwrap();
    for k in 1..=3 {
        let m = interaction_measure(&data, k, Interaction::Lancaster).unwrap();
        assert!(in_mk(&m, k, 1e-12).unwrap());
    }
    let s = interaction_measure(&data, 3, Interaction::Streitberg).unwrap();
    assert!(in_mk(&s, 3, 1e-12).unwrap());
}

#[test]
fn statistics_are_nonnegative_across_the_library() {
    for n in 2..=3 {
        let data = generate_synthetic(&SyntheticKind::CommonFactor { n, loading: 0.6 }, 7, 2).unwrap();
        for k in 1..=n {
            let mu = interaction_measure(&data, k, Interaction::Lancaster).unwrap();
            for lk in library(n, k).unwrap() {
                let s = naive_stat(&lk.spec, &mu, k).unwrap();
                let scale = statistic_scale(&lk.spec, &mu).unwrap();
                assert!(s >= -1e-9 * scale, "{} n={n} k={k}: {s}", lk.name);
            }
        }
    }
}

#[test]
fn capacity_guard() {
    let data = generate_synthetic(&SyntheticKind::Independent { n: 5 }, 60, 1).unwrap();
    match interaction_measure(&data, 5, Interaction::Lancaster) {
        Err(PdiError::Capacity(msg)) => assert!(msg.contains("atoms")),
        other => panic!("expected a capacity error, got {other:?}"),
    }
}

#[test]
fn engine_resolution() {
    let mut cfg = TestConfig::new(distance_multivariance(3, 1.0).unwrap(), 3);
    assert_eq!(resolve_engine(&cfg, 3).unwrap(), Engine::Fast);
    cfg.engine = Engine::Naive;
    assert_eq!(resolve_engine(&cfg, 3).unwrap(), Engine::Naive);
    let mut cfg = TestConfig::new(sum_power(3, 3, 2.5).unwrap(), 3);
    assert_eq!(resolve_engine(&cfg, 3).unwrap(), Engine::Naive);
    cfg.engine = Engine::Fast;
    assert!(matches!(resolve_engine(&cfg, 3), Err(PdiError::Argument(_))));
    let mut cfg = TestConfig::new(gaussian_product(3, 2, 1.0).unwrap(), 2);
    cfg.engine = Engine::Fast;
    assert!(resolve_engine(&cfg, 3).is_err());
}

#[test]
fn config_validation() {
    let data = generate_synthetic(&SyntheticKind::Independent { n: 3 }, 10, 1).unwrap();
    let cfg = TestConfig::new(distance_multivariance(2, 1.0).unwrap(), 2);
    assert!(permutation_test(&cfg, &data).is_err());
    let cfg = TestConfig::new(distance_multivariance(3, 1.0).unwrap(), 2);
    assert!(permutation_test(&cfg, &data).is_err());
    let mut cfg = TestConfig::new(gaussian_product(3, 2, 1.0).unwrap(), 2);
    cfg.interaction = Interaction::Streitberg;
    assert!(permutation_test(&cfg, &data).is_err());
}

#[test]
fn permutation_report_fields() {
    let data = generate_synthetic(&SyntheticKind::Independent { n: 2 }, 20, 3).unwrap();
    let mut cfg = TestConfig::new(distance_multivariance(2, 1.0).unwrap(), 2);
    let r = permutation_test(&cfg, &data).unwrap();
    assert!(r.p_value.is_none());
    assert_eq!((r.n, r.k, r.sample_size, r.permutations), (2, 2, 20, 0));
    assert_eq!(r.engine, Engine::Fast);
    assert_eq!(r.null_calibration, NullCalibration::Exact);
    cfg.permutations = 49;
    cfg.seed = 11;
    let r = permutation_test(&cfg, &data).unwrap();
    let p = r.p_value.unwrap();
    assert!((1.0 / 50.0..=1.0).contains(&p));
    assert!((p * 50.0 - (p * 50.0).round()).abs() < 1e-9);

    let d3 = generate_synthetic(&SyntheticKind::Independent { n: 4 }, 5, 3).unwrap();
    let cfg = TestConfig::new(gaussian_product(4, 3, 1.0).unwrap(), 3);
    assert_eq!(permutation_test(&cfg, &d3).unwrap().null_calibration, NullCalibration::Heuristic);
}

#[test]
fn dependence_is_detected() {
    let data = generate_synthetic(&SyntheticKind::CommonFactor { n: 2, loading: 0.9 }, 40, 5).unwrap();
    let mut cfg = TestConfig::new(distance_multivariance(2, 1.0).unwrap(), 2);
    cfg.permutations = 99;
    cfg.seed = 1;
    assert!(permutation_test(&cfg, &data).unwrap().p_value.unwrap() <= 0.02);
}

#[test]
fn fast_and_naive_reports_agree() {
    let data = generate_synthetic(&SyntheticKind::CommonFactor { n: 3, loading: 0.5 }, 8, 5).unwrap();
    let mut cfg = TestConfig::new(distance_multivariance(3, 1.0).unwrap(), 3);
    cfg.permutations = 19;
    cfg.seed = 4;
    let fast = permutation_test(&cfg, &data).unwrap();
    cfg.engine = Engine::Naive;
    let naive = permutation_test(&cfg, &data).unwrap();
    assert!((fast.statistic - naive.statistic).abs() <= 1e-10 * naive.statistic.abs());
    assert_eq!(fast.p_value, naive.p_value);
    cfg.interaction = Interaction::Streitberg;
    let streit = permutation_test(&cfg, &data).unwrap();
    assert!((streit.statistic - naive.statistic).abs() <= 1e-10 * naive.statistic.abs());
}

#[test]
fn reports_do_not_depend_on_thread_count() {
    let data = generate_synthetic(&SyntheticKind::Independent { n: 3 }, 9, 8).unwrap();
    let mut cfg = TestConfig::new(sum_power(3, 2, 1.5).unwrap(), 2);
    cfg.permutations = 30;
    cfg.seed = 99;
    let run = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        let mut r = pool.install(|| permutation_test(&cfg, &data)).unwrap();
        r.elapsed_ms = 0;
        r
    };
    let a = run(1);
    assert_eq!(a, run(4));
    assert_eq!(a, run(1));
}

#[test]
fn synthetic_data() {
    let xor = generate_synthetic(&SyntheticKind::XorTriple, 50, 3).unwrap();
    for s in xor.samples() {
        let bits: Vec<f64> = (0..3).map(|i| s.component(i)[0]).collect();
        assert!(bits.iter().all(|&b| b == 0.0 || b == 1.0));
        assert_eq!(bits.iter().sum::<f64>() % 2.0, 0.0);
    }
    let a = generate_synthetic(&SyntheticKind::Decomposable { blocks: vec![2, 1], rho: 0.8 }, 30, 9).unwrap();
    assert_eq!(a, generate_synthetic(&SyntheticKind::Decomposable { blocks: vec![2, 1], rho: 0.8 }, 30, 9).unwrap());
    assert_eq!(a.n(), 3);
    assert!(generate_synthetic(&SyntheticKind::Independent { n: 0 }, 5, 1).is_err());
    assert!(generate_synthetic(&SyntheticKind::CommonFactor { n: 2, loading: 2.0 }, 5, 1).is_err());

    let big = generate_synthetic(&SyntheticKind::Independent { n: 2 }, 4000, 1).unwrap();
    let (x, y): (Vec<f64>, Vec<f64>) = big.samples().iter().map(|s| (s.component(0)[0], s.component(1)[0])).unzip();
    let corr = x.iter().zip(&y).map(|(a, b)| a * b).sum::<f64>() / 4000.0;
    assert!(corr.abs() < 0.1);
}

#[test]
fn dataset_validation() {
    assert!(Dataset::from_scalar_rows(&[]).is_err());
    assert!(Dataset::from_scalar_rows(&[vec![1.0, f64::NAN]]).is_err());
    assert!(Dataset::from_scalar_rows(&[vec![1.0, 2.0], vec![1.0]]).is_err());
}

fn small_data(n: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
    prop::collection::vec(prop::collection::vec(-3.0f64..3.0, n), 1..=6)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn fast_engine_matches_expansion(rows in (2usize..=3).prop_flat_map(small_data), beta in 0.3f64..=2.0) {
        let data = Dataset::from_scalar_rows(&rows).unwrap();
        let n = data.n();
        let gammas = vec![ComponentCnd::euclidean_power(beta).unwrap(); n];
        let fast = fast_multivariance(&gammas, &data).unwrap();
        let naive = interaction_stat(&distance_multivariance(n, beta).unwrap(), &data, n, Interaction::Lancaster).unwrap();
        let scale = naive.abs().max(1e-12);
        prop_assert!((fast - naive).abs() <= 1e-10 * scale.max(fast.abs()) + 1e-14);
    }
}
