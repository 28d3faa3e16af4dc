mod common;

use proptest::prelude::*;
use rand::Rng;

use narx_dd::estimators::min_norm_ls;
use narx_dd::features::{apply_map, build_regressors, FeatureMap, LagSpec, RegressorSet};
use narx_dd::sysdata::TimeSeries;

#[test]
fn rff_inner_products_approximate_the_gaussian_kernel() {
    let gamma = 0.6;
    let map = FeatureMap::rff(4, 100_000, gamma, 17).unwrap();
    let mut rng = common::rng(3);
    for _ in 0..10 {
        let x: Vec<f64> = (0..4).map(|_| rng.random_range(-1.0..1.0)).collect();
        let dir: Vec<f64> = (0..4).map(|_| rng.random_range(-1.0..1.0)).collect();
        let len = dir.iter().map(|v| v * v).sum::<f64>().sqrt();
        let r = rng.random_range(0.0..2.0);
        let xp: Vec<f64> = x.iter().zip(&dir).map(|(a, d)| a + r * d / len).collect();
        let dist2: f64 = x.iter().zip(&xp).map(|(a, b)| (a - b).powi(2)).sum();
        let (f, g) = (map.features(&x).unwrap(), map.features(&xp).unwrap());
        let k: f64 = f.iter().zip(&g).map(|(a, b)| a * b).sum();
        let want = (-gamma * dist2).exp();
        assert!((k - want).abs() < 0.02, "k={k} want={want} dist2={dist2}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rff_rows_are_bounded(seed in any::<u64>(), m in 1usize..200, x in prop::collection::vec(-50.0f64..50.0, 4)) {
        let map = FeatureMap::rff(4, m, 0.6, seed).unwrap();
        let f = map.features(&x).unwrap();
        let bound = (2.0 / m as f64).sqrt();
        prop_assert!(f.iter().all(|v| v.abs() <= bound * (1.0 + 1e-15)));
        prop_assert!(f.iter().map(|v| v * v).sum::<f64>().sqrt() <= 2f64.sqrt() * (1.0 + 1e-12));
        prop_assert_eq!(map.features(&x).unwrap(), f);
    }

    #[test]
    fn rbf_features_lie_in_unit_interval(seed in any::<u64>(), x in prop::collection::vec(-50.0f64..50.0, 4)) {
        let map = FeatureMap::rbf(4, 64, 0.25, 5.0, seed).unwrap();
        prop_assert!(map.features(&x).unwrap().iter().all(|&v| v > 0.0 && v <= 1.0));
    }

    #[test]
    fn regressors_shift_with_the_series(u in prop::collection::vec(-5.0f64..5.0, 8..30), seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let y: Vec<f64> = u.iter().map(|_| rng.random_range(-5.0..5.0)).collect();
        let lags = LagSpec::new(2, 3).unwrap();
        let full = build_regressors(&TimeSeries::from_vecs(u.clone(), y.clone()).unwrap(), lags).unwrap();
        let shifted = build_regressors(&TimeSeries::from_vecs(u[1..].to_vec(), y[1..].to_vec()).unwrap(), lags).unwrap();
        prop_assert_eq!(shifted.rows() + 1, full.rows());
        for i in 0..shifted.rows() {
            prop_assert_eq!(shifted.row(i), full.row(i + 1));
            prop_assert_eq!(shifted.targets()[i], full.targets()[i + 1]);
        }
        for i in 0..full.rows() {
            // Target y[t] never appears in its own regressor.
            let t = full.t_index() + i;
            prop_assert_eq!(full.targets()[i], y[t]);
            prop_assert_eq!(full.row(i)[0], u[t - 1]);
            prop_assert_eq!(full.row(i)[2], y[t - 1]);
        }
    }
}

#[test]
fn linear_map_is_exact_on_affine_arx_data() {
    let mut rng = common::rng(4);
    let n = 60;
    let u: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
    let mut y = vec![0.0; n];
    for t in 2..n {
        y[t] = 0.5 * u[t - 1] - 0.2 * u[t - 2] + 0.3 * y[t - 1] - 0.1 * y[t - 2] + 0.7;
    }
    let regs = build_regressors(&TimeSeries::from_vecs(u, y).unwrap(), LagSpec::default()).unwrap();
    let d = apply_map(&FeatureMap::linear(4).unwrap(), &regs).unwrap();
    let theta = min_norm_ls(&d).unwrap().theta;
    let want = [0.5, -0.2, 0.3, -0.1, 0.7];
    for (a, b) in theta.as_slice().iter().zip(want) {
        assert!((a - b).abs() < 1e-10, "{a} vs {b}");
    }
}

#[test]
fn apply_map_is_pure() {
    let regs = RegressorSet::from_rows(&[vec![0.1, 0.2, 0.3, 0.4], vec![-1.0, 2.0, 0.5, 0.0]], vec![1.0, 2.0]).unwrap();
    let map = FeatureMap::rff(4, 30, 0.6, 8).unwrap();
    assert_eq!(apply_map(&map, &regs).unwrap(), apply_map(&map, &regs).unwrap());
}
