mod common;

use common::*;
use nalgebra::DVector;
use proptest::prelude::*;
use rand::Rng;
use rand_distr::StandardNormal;

use narx_dd::estimators::{gradient_descent, min_norm_ls, subset_ensemble, GdOptions, ParameterVector};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn min_norm_beats_every_interpolant(seed in any::<u64>(), t in 1usize..=5, extra in 1usize..=3) {
        let m = (t + extra).min(8);
        prop_assert_eq!(min_norm_vs_null_space(seed, t, m, 20), Ok(()));
    }

    #[test]
    fn ridge_norm_is_non_increasing_in_lambda(seed in any::<u64>(), t in 1usize..=8, m in 1usize..=12) {
        prop_assert_eq!(ridge_norm_monotone(seed, t, m), Ok(()));
    }

    #[test]
    fn ridge_approaches_min_norm(seed in any::<u64>(), t in 2usize..=10, extra in 5usize..=20) {
        prop_assert_eq!(ridge_limit(seed, t, t + extra), Ok(()));
    }

    #[test]
    fn gradient_matches_central_differences(seed in any::<u64>(), t in 1usize..=10, m in 1usize..=10) {
        prop_assert_eq!(gradient_vs_fd(seed, t, m), Ok(()));
    }

    #[test]
    fn well_conditioned_min_norm_interpolates(seed in any::<u64>(), t in 1usize..=10, extra in 0usize..=20) {
        let d = well_conditioned(&mut rng(seed), t, t + extra + 2, 1e4);
        let r = min_norm_ls(&d).unwrap();
        prop_assert!(r.train_residual_mse <= 1e-8 * d.targets().norm_squared() / t as f64);
        prop_assert!(r.rank <= t.min(d.cols()));
        prop_assert!((r.theta.norm2() - r.theta.to_dvector().norm()).abs() <= 1e-12 * r.theta.norm2());
    }
}

#[test]
fn gradient_descent_reaches_min_norm() {
    let mut rng = rng(20);
    let d = well_conditioned(&mut rng, 20, 50, 1e3);
    let mn = min_norm_ls(&d).unwrap().theta.to_dvector();
    let gd = gradient_descent(&d, &ParameterVector::zeros(50), GdOptions::for_design(&d)).unwrap();
    let err = (gd.theta.to_dvector() - &mn).norm() / mn.norm();
    assert!(err < 1e-6, "relative error {err:e}");
}

#[test]
fn gradient_descent_keeps_the_null_space_offset() {
    let mut rng = rng(21);
    let (t, m) = (8, 20);
    let d = well_conditioned(&mut rng, t, m, 1e3);
    let phi = d.phi();
    let p = nalgebra::DMatrix::identity(m, m) - phi.transpose() * (phi * phi.transpose()).try_inverse().unwrap() * phi;
    let z = &p * DVector::from_fn(m, |_, _| rng.sample::<f64, _>(StandardNormal));
    let mn = min_norm_ls(&d).unwrap().theta.to_dvector();
    let start = ParameterVector::new(z.as_slice().to_vec()).unwrap();
    let gd = gradient_descent(&d, &start, GdOptions::for_design(&d)).unwrap();
    let offset = gd.theta.to_dvector() - mn;
    assert!((&offset - &z).norm() < 1e-8 * z.norm(), "offset drifted by {:e}", (&offset - &z).norm());
}

#[test]
fn ensemble_residual_is_bounded_by_its_worst_member() {
    // Members are single-column ridge fits; their residuals bound the average's.
    let mut rng = rng(22);
    let (t, m) = (6, 24);
    let d = well_conditioned(&mut rng, t, m, 1e3);
    let ens = subset_ensemble(&d, 50, 1e-3, 7).unwrap();
    let resid = (d.phi() * ens.theta.to_dvector() - d.targets()).norm();
    // Worst member residual over all size-T subsets drawn by an independent stream.
    let mut worst: f64 = 0.0;
    for k in 0..200u64 {
        let mut r = common::rng(1000 + k);
        let cols = rand::seq::index::sample(&mut r, m, t).into_vec();
        let a = d.phi().select_columns(cols.iter());
        let shift = 1e-3 * t as f64;
        let g = &a * a.transpose() + nalgebra::DMatrix::identity(t, t) * shift;
        let alpha = g.cholesky().unwrap().solve(d.targets());
        worst = worst.max((&a * (a.transpose() * alpha) - d.targets()).norm());
    }
    assert!(resid <= worst + 1e-9, "{resid} > {worst}");
}
