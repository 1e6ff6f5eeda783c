mod common;

use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;
use svm_geometry::classifiers::{self, SvmOptions};
use svm_geometry::geometry::{self, GapOptions};
use svm_geometry::kkt;
use svm_geometry::linalg::{self, DEFAULT_RANK_TOL};
use svm_geometry::regimes;
use svm_geometry::synth::{generate_gaussian_pair, GaussianPairConfig};
use svm_geometry::{direction_angle, Dataset, Error, Label};

use common::*;

fn vector(d: usize) -> impl Strategy<Value = DVector<f64>> {
    prop::collection::vec(-10.0f64..10.0, d).prop_map(DVector::from_vec)
}

fn nonzero_pair() -> impl Strategy<Value = (DVector<f64>, DVector<f64>)> {
    (1usize..6)
        .prop_flat_map(|d| (vector(d), vector(d)))
        .prop_filter("nonzero", |(u, v)| u.norm() > 1e-3 && v.norm() > 1e-3)
}

/// (n_plus, n_minus, d, separation, seed)
fn dataset() -> impl Strategy<Value = Dataset> {
    (1usize..8, 1usize..8, 1usize..6, 0.0f64..5.0, any::<u64>()).prop_map(|(p, m, d, sep, seed)| {
        generate_gaussian_pair(&GaussianPairConfig {
            n_plus: p,
            n_minus: m,
            d,
            separation: sep,
            seed,
        })
        .unwrap()
    })
}

fn config() -> ProptestConfig {
    let cases = std::env::var("PROPTEST_CASES")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(64);
    ProptestConfig {
        cases,
        max_global_rejects: 1024 + 4 * cases,
        ..ProptestConfig::default()
    }
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn angle_is_symmetric_and_scale_invariant((u, v) in nonzero_pair(), a in 0.1f64..10.0, b in -10.0f64..-0.1) {
        let base = direction_angle(&u, &v).unwrap();
        prop_assert!((base - direction_angle(&v, &u).unwrap()).abs() < 1e-12);
        prop_assert!((base - direction_angle(&(&u * a), &(&v * b)).unwrap()).abs() < 1e-9);
        prop_assert!((0.0..=std::f64::consts::FRAC_PI_2).contains(&base));
    }

    #[test]
    fn transform_preserves_predictions(data in dataset(), w in vector(5), b in -1.0f64..1.0, seed in any::<u64>()) {
        let d = data.dim();
        let w = DVector::from_iterator(d, w.iter().copied().take(d));
        prop_assume!(w.norm() > 1e-3);
        let mut r = rng(seed, 0);
        let m = DMatrix::from_fn(d, d, |i, j| if i == j { 2.0 } else { 0.0 } + log_uniform(&mut r, 0.01, 0.3));
        let inv_t = m.clone().try_inverse().unwrap().transpose();
        let moved = data.transform(&m).unwrap();
        let f = |x: &DVector<f64>, w: &DVector<f64>| w.dot(x) + b;
        for i in 0..data.len() {
            let before = f(&data.point(i), &w);
            let after = f(&moved.point(i), &(&inv_t * &w));
            prop_assert!((before - after).abs() <= 1e-9 * (1.0 + before.abs()));
        }
    }

    #[test]
    fn generator_is_reproducible(p in 1usize..20, m in 1usize..20, d in 1usize..10, seed in any::<u64>()) {
        let cfg = GaussianPairConfig { n_plus: p, n_minus: m, d, separation: 2.0, seed };
        let (a, b) = (generate_gaussian_pair(&cfg).unwrap(), generate_gaussian_pair(&cfg).unwrap());
        prop_assert_eq!(a.points(), b.points());
        prop_assert_eq!(a.labels(), b.labels());
    }

    #[test]
    fn pinv_satisfies_penrose(rows in 1usize..6, cols in 1usize..6, rank in 1usize..4, seed in any::<u64>()) {
        let mut r = rng(seed, 0);
        let k = rank.min(rows).min(cols);
        let a = DMatrix::from_fn(rows, k, |_, _| log_uniform(&mut r, 0.1, 2.0) - 1.0);
        let b = DMatrix::from_fn(k, cols, |_, _| log_uniform(&mut r, 0.1, 2.0) - 1.0);
        let m = a * b;
        let p = linalg::pinv(&m, DEFAULT_RANK_TOL);
        let scale = m.amax().max(1.0) * p.amax().max(1.0);
        prop_assert!((&m * &p * &m - &m).amax() <= 1e-8 * scale * m.amax().max(1.0));
        prop_assert!((&p * &m * &p - &p).amax() <= 1e-8 * scale * p.amax().max(1.0));
        prop_assert!(((&m * &p).transpose() - &m * &p).amax() <= 1e-8 * scale);
        prop_assert!(((&p * &m).transpose() - &p * &m).amax() <= 1e-8 * scale);
    }

    #[test]
    fn gap_bracket_and_witness(data in dataset()) {
        let g = geometry::gap(&data, &GapOptions::default()).unwrap();
        prop_assert!(g.lower <= g.upper + 1e-12);
        prop_assert!(g.gap >= 0.0 && g.gap <= geometry::diameter(&data) + 1e-9);
        prop_assert!(g.witness.max_violation(&data) <= 1e-9);
        prop_assert!((g.witness.direction().norm() - g.upper).abs() <= 1e-9 * (1.0 + g.upper));
    }

    #[test]
    fn soft_margin_fits_pass_kkt(data in dataset(), logc in -3.0f64..3.0) {
        let c = 10f64.powf(logc);
        let s = classifiers::soft_margin_svm(&data, c, &SvmOptions::default()).unwrap();
        let report = kkt::verify_kkt_soft(&data, &s, c);
        prop_assert!(report.passes(1e-6), "{:?}", report);
        // Weak duality gap closes at the optimum.
        prop_assert!((s.objective - s.dual_objective).abs() <= 1e-5 * (1.0 + s.objective.abs()));
    }

    #[test]
    fn support_partition_is_consistent(data in dataset(), logc in -3.0f64..3.0) {
        let c = 10f64.powf(logc);
        let s = classifiers::soft_margin_svm(&data, c, &SvmOptions::default()).unwrap();
        let cls = kkt::classify_support_vectors(&s, &data, 1e-6);
        let mut all: Vec<usize> = cls.support();
        all.extend(&cls.non_support);
        all.sort_unstable();
        prop_assert_eq!(all, (0..data.len()).collect::<Vec<_>>());
        for &i in cls.slack_plus.iter().chain(&cls.slack_minus) {
            prop_assert!((s.alpha[i] - c).abs() <= 1e-6 * c);
        }
        for &i in cls.margin_plus.iter().chain(&cls.margin_minus) {
            prop_assert!(s.alpha[i] > 0.0 && s.alpha[i] <= c);
        }
    }

    #[test]
    fn thresholds_bracket_regimes(data in dataset()) {
        let t = regimes::thresholds(&data).unwrap();
        let small = classifiers::soft_margin_svm(&data, 0.99 * t.c_small, &SvmOptions::default()).unwrap();
        let smaller = data.larger_class().flipped();
        let c = small.cost;
        prop_assert!(data.indices_of(smaller).iter().all(|&i| (small.alpha[i] - c).abs() <= 1e-8 * c));
        // At most n_s slack vectors in the larger class.
        let cls = kkt::classify_support_vectors(&small, &data, 1e-6);
        prop_assert!(cls.slack(smaller.flipped()).len() <= data.count(smaller));
        // Margin grows without bound as C shrinks.
        let nl = data.n_plus().max(data.n_minus()) as f64;
        prop_assert!(small.margin_width() >= (1.0 - 1e-9) / (nl * small.cost * t.diameter));
        if let Some(cl) = t.c_large {
            let large = classifiers::soft_margin_svm(&data, 1.01 * cl, &SvmOptions::default()).unwrap();
            let cls = kkt::classify_support_vectors(&large, &data, 1e-6);
            prop_assert_eq!(cls.slack_count(), 0);
        }
    }

    #[test]
    fn balanced_small_c_puts_weight_c_everywhere(m in 1usize..10, d in 1usize..6, seed in any::<u64>()) {
        let data = generate_gaussian_pair(&GaussianPairConfig { n_plus: m, n_minus: m, d, separation: 1.0, seed }).unwrap();
        let t = regimes::thresholds(&data).unwrap();
        let c = 0.5 * t.c_small;
        let s = classifiers::soft_margin_svm(&data, c, &SvmOptions::default()).unwrap();
        prop_assert!(s.alpha.iter().all(|a| (a - c).abs() <= 1e-8 * c));
    }

    #[test]
    fn mdp_matches_dense_reference(data in dataset()) {
        let ours = geometry::mdp_direction(&data, DEFAULT_RANK_TOL);
        let reference = mdp_reference(&data);
        match ours {
            Ok(v) => {
                prop_assert!(reference.norm() > 0.0);
                prop_assert!(direction_angle(&v, &reference).unwrap() <= 1e-6);
                prop_assert!((&v - &reference).norm() <= 1e-6 * reference.norm());
            }
            Err(_) => prop_assert!(reference.norm() <= 1e-9 * data.scale()),
        }
    }

    #[test]
    fn hard_margin_matches_gap(data in dataset()) {
        let opts = GapOptions { tol: Some(1e-10 * geometry::diameter(&data)), ..GapOptions::default() };
        let small = 1e-4 * geometry::diameter(&data);
        let g = match geometry::gap(&data, &opts) {
            Err(Error::GapNoConvergence { upper, .. }) if upper <= small => return Err(TestCaseError::reject("gap below range")),
            r => r.unwrap(),
        };
        // Hulls that nearly touch make the dual weights blow up like 1/G².
        prop_assume!(g.separable && g.gap > small);
        let h = classifiers::hard_margin_svm(&data, &SvmOptions::default()).unwrap();
        prop_assert!(kkt::verify_kkt_hard(&data, &h).passes(1e-6));
        prop_assert!((2.0 * h.margin_width() - g.gap).abs() <= 1e-6 * g.gap);
        prop_assert!(direction_angle(&h.model.w, &g.witness.direction()).unwrap() <= 1e-4);
    }

    #[test]
    fn zero_direction_lp_matches_solver(n_minus in 1usize..4, d in 1usize..3, logc in -3.0f64..3.0, seed in any::<u64>()) {
        let cfg = GaussianPairConfig { n_plus: 40, n_minus, d, separation: 0.5, seed };
        let data = generate_gaussian_pair(&cfg).unwrap();
        prop_assume!(geometry::zero_direction_optimal(&data).unwrap());
        let s = classifiers::soft_margin_svm(&data, 10f64.powf(logc), &SvmOptions::default()).unwrap();
        let f = data.points() * &s.model.w;
        prop_assert!(f.max() - f.min() <= 1e-4, "{}", f.max() - f.min());
    }

    #[test]
    fn support_count_bound_holds(n_minus in 1usize..6, d in 1usize..4, logc in -3.0f64..3.0, seed in any::<u64>()) {
        let data = generate_gaussian_pair(&GaussianPairConfig { n_plus: 40, n_minus, d, separation: 1.0, seed }).unwrap();
        let s = classifiers::soft_margin_svm(&data, 10f64.powf(logc), &SvmOptions::default()).unwrap();
        let r = regimes::support_count_check(&data, &s);
        prop_assert!(r.skipped.is_some() || r.holds, "{:?}", r);
    }
}

#[test]
fn fld_equals_md_after_whitening() {
    let data = generate_gaussian_pair(&GaussianPairConfig {
        n_plus: 30,
        n_minus: 25,
        d: 4,
        separation: 2.0,
        seed: 4,
    })
    .unwrap();
    let pooled = linalg::pooled_covariance(&data).unwrap();
    let w_inv = linalg::inverse_sqrt_spd(&pooled, DEFAULT_RANK_TOL).unwrap();
    let md_white = classifiers::mean_difference(&data.transform(&w_inv).unwrap()).unwrap();
    // Pull the whitened direction back to the original coordinates.
    let back = &w_inv * md_white.w;
    let fld = classifiers::fld(&data, DEFAULT_RANK_TOL).unwrap();
    assert!(direction_angle(&back, &fld.w).unwrap() < 1e-10);
    // Dense reference: solve the pooled system directly.
    let diff = data.class_mean(Label::Positive) - data.class_mean(Label::Negative);
    let reference = pooled.cholesky().unwrap().solve(&diff);
    assert!((&fld.w - reference).norm() < 1e-10 * fld.w.norm());
}

#[test]
fn positive_class_mean_near_first_axis() {
    let cfg = GaussianPairConfig {
        n_plus: 400,
        n_minus: 400,
        d: 10,
        separation: 2.0,
        seed: 12,
    };
    let data = generate_gaussian_pair(&cfg).unwrap();
    let mut e1 = DVector::zeros(10);
    e1[0] = 1.0;
    let dist = (data.class_mean(Label::Positive) - e1).norm();
    assert!(dist <= 3.0 * (10.0f64 / 400.0).sqrt(), "{dist}");
}

#[test]
fn zero_separation_means_are_close() {
    let cfg = GaussianPairConfig {
        n_plus: 2000,
        n_minus: 2000,
        d: 3,
        separation: 0.0,
        seed: 3,
    };
    let data = generate_gaussian_pair(&cfg).unwrap();
    let gap = (data.class_mean(Label::Positive) - data.class_mean(Label::Negative)).norm();
    assert!(gap < 5.0 * (2.0 * 3.0 / 2000.0f64).sqrt(), "{gap}");
}
