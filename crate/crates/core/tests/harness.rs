mod common;

use svm_geometry::classifiers::{InterceptMode, SvmOptions};
use svm_geometry::harness::{
    self, cross_validate, emit_plot_data, fold_assignment, ExperimentConfig, GridSpec, PathOptions,
};
use svm_geometry::regimes;
use svm_geometry::synth::{generate_gaussian_pair, GaussianPairConfig};
use svm_geometry::{Dataset, Label};

use common::*;

fn pair(n_plus: usize, n_minus: usize, d: usize, sep: f64, seed: u64) -> Dataset {
    generate_gaussian_pair(&GaussianPairConfig {
        n_plus,
        n_minus,
        d,
        separation: sep,
        seed,
    })
    .unwrap()
}

#[test]
fn stratified_folds_keep_both_classes() {
    let data = pair(21, 20, 2, 4.0, 1);
    let folds = fold_assignment(&data, 5, true, 9).unwrap();
    for f in 0..5 {
        let count = |l: Label| data.indices_of(l).iter().filter(|&&i| folds[i] == f).count();
        let (p, m) = (count(Label::Positive), count(Label::Negative));
        assert!((4..=5).contains(&p) && (4..=5).contains(&m), "fold {f}: {p}+{m}");
    }
}

#[test]
fn folds_are_deterministic_per_seed() {
    let data = pair(10, 10, 2, 1.0, 2);
    assert_eq!(
        fold_assignment(&data, 3, false, 5).unwrap(),
        fold_assignment(&data, 3, false, 5).unwrap()
    );
    assert_ne!(
        fold_assignment(&data, 3, false, 5).unwrap(),
        fold_assignment(&data, 3, false, 6).unwrap()
    );
    assert!(fold_assignment(&data, 1, false, 0).is_err());
    assert!(fold_assignment(&data, 21, false, 0).is_err());
}

#[test]
fn wide_gap_has_zero_cv_error() {
    let data = pair(15, 15, 2, 20.0, 3);
    let r = cross_validate(&data, 1.0, 5, false, InterceptMode::Standard, 0, &SvmOptions::default()).unwrap();
    assert_eq!(r.mean_error, Some(0.0));
}

#[test]
fn empty_class_folds_are_excluded() {
    let data = Dataset::from_rows(&[vec![1.0], vec![2.0], vec![-1.0]], &[1.0, 1.0, -1.0]).unwrap();
    let r = cross_validate(&data, 1.0, 3, false, InterceptMode::Standard, 0, &SvmOptions::default()).unwrap();
    assert_eq!(r.fold_errors.iter().filter(|e| e.is_none()).count(), 1);
}

#[test]
fn cv_mean_ignores_fold_order() {
    let data = pair(12, 10, 3, 1.5, 4);
    let folds = fold_assignment(&data, 4, false, 1).unwrap();
    let relabeled: Vec<usize> = folds.iter().map(|f| 3 - f).collect();
    let fit = |t: &Dataset| {
        let s = svm_geometry::classifiers::soft_margin_svm(t, 0.5, &SvmOptions::default())?;
        Ok(vec![s.model])
    };
    let a = harness::cv::cross_validate_multi(&data, &folds, 4, 1, fit).unwrap();
    let b = harness::cv::cross_validate_multi(&data, &relabeled, 4, 1, fit).unwrap();
    assert_eq!(a[0].mean_error, b[0].mean_error);
}

#[test]
fn small_c_cv_error_is_high_on_balanced_data() {
    let data = pair(20, 20, 2, 4.0, 7);
    let t = regimes::thresholds(&data).unwrap();
    let c = t.c_small / 5.0;
    let svm = SvmOptions::default();
    let plain = cross_validate(&data, c, 5, false, InterceptMode::Standard, 3, &svm).unwrap();
    let train = svm_geometry::classifiers::soft_margin_svm(&data, c, &svm).unwrap();
    let train_err = train.model.error_rate(&data).unwrap();
    assert!(plain.mean_error.unwrap() >= 0.3, "{:?}", plain.mean_error);
    assert!(train_err <= 0.1, "{train_err}");
}

#[test]
fn tuning_path_regimes_on_balanced_pair() {
    let data = (0..)
        .map(|k| gaussian(&mut rng(21, k), 20, 20, 2, 4.0))
        .find(|d| regimes::thresholds(d).unwrap().separable)
        .unwrap();
    let t = regimes::thresholds(&data).unwrap();
    let grid = harness::log_grid(t.c_small / 10.0, 10.0 * t.c_large.unwrap(), 12).unwrap();
    let curve = harness::tuning_path(&data, None, &grid, &PathOptions::default()).unwrap();
    assert_eq!(curve.rows.len(), 12);
    for row in &curve.rows {
        assert!(row.failure.is_none());
        for e in [row.train_error, row.cv_error].into_iter().flatten() {
            assert!((0.0..=1.0).contains(&e));
        }
        assert!(row.test_error.is_none());
        if row.c <= t.c_small {
            assert!(row.angle_to_md().unwrap() <= 1e-4);
        }
        if row.c >= t.c_large.unwrap() {
            assert!(row.angle_to_hard_margin().unwrap() <= 1e-4);
        }
    }
}

#[test]
fn single_point_classes_compute() {
    let data = Dataset::from_rows(&[vec![1.0, 0.0], vec![-1.0, 0.0]], &[1.0, -1.0]).unwrap();
    let grid = harness::log_grid(0.01, 10.0, 5).unwrap();
    let curve = harness::tuning_path(&data, None, &grid, &PathOptions::default()).unwrap();
    assert!(curve.rows.iter().all(|r| r.failure.is_none() && r.cv_error.is_none()));
}

#[test]
fn rejects_unsorted_grid() {
    let data = pair(5, 5, 2, 2.0, 1);
    assert!(harness::tuning_path(&data, None, &[1.0, 0.5], &PathOptions::default()).is_err());
}

#[test]
fn serialized_rows_reproduce_their_flags() {
    let data = pair(12, 9, 3, 3.0, 5);
    let test = pair(50, 50, 3, 3.0, 6);
    let grid = harness::log_grid(1e-3, 1e2, 6).unwrap();
    let curve = harness::tuning_path(&data, Some(&test), &grid, &PathOptions::default()).unwrap();
    let json = serde_json::to_string(&curve).unwrap();
    let back: harness::TuningCurve = serde_json::from_str(&json).unwrap();
    let hard = curve
        .thresholds
        .separable
        .then(|| svm_geometry::classifiers::hard_margin_svm(&data, &SvmOptions::default()).unwrap());
    for row in &back.rows {
        let sol = row.solution.as_ref().unwrap();
        let again = regimes::regime_report(&data, sol, hard.as_ref()).unwrap();
        assert_eq!(Some(again), row.report);
    }
}

#[test]
fn plot_files_and_manifest() {
    let data = pair(10, 10, 2, 4.0, 2);
    let test = pair(30, 30, 2, 4.0, 3);
    let grid = harness::log_grid(1e-3, 1e2, 5).unwrap();
    let opts = PathOptions::default();
    let dir = tempfile::tempdir().unwrap();

    let with_test = harness::tuning_path(&data, Some(&test), &grid, &opts).unwrap();
    let m = emit_plot_data(&with_test, dir.path().join("a")).unwrap();
    assert_eq!(m.thresholds, regimes::thresholds(&data).unwrap());
    for f in ["errors.csv", "margin.csv", "angles.csv", "manifest.json"] {
        assert!(dir.path().join("a").join(f).exists());
    }
    let errors = std::fs::read_to_string(dir.path().join("a/errors.csv")).unwrap();
    assert!(errors.lines().next().unwrap().ends_with("test_error"));
    assert_eq!(errors.lines().count(), 6);

    let without = harness::tuning_path(&data, None, &grid, &opts).unwrap();
    let m = emit_plot_data(&without, dir.path().join("b")).unwrap();
    assert!(!m.has_test_error && !m.notes.is_empty());
    let errors = std::fs::read_to_string(dir.path().join("b/errors.csv")).unwrap();
    assert!(!errors.contains("test_error"));

    // Same inputs give byte-identical files.
    emit_plot_data(&with_test, dir.path().join("c")).unwrap();
    let again = harness::tuning_path(&data, Some(&test), &grid, &opts).unwrap();
    emit_plot_data(&again, dir.path().join("d")).unwrap();
    for f in ["errors.csv", "margin.csv", "angles.csv", "manifest.json"] {
        assert_eq!(
            std::fs::read(dir.path().join("c").join(f)).unwrap(),
            std::fs::read(dir.path().join("d").join(f)).unwrap()
        );
    }
}

#[test]
fn small_experiment_is_deterministic() {
    let mut cfg = ExperimentConfig::intercept_study(17);
    cfg.generator = GaussianPairConfig {
        n_plus: 11,
        n_minus: 10,
        d: 5,
        separation: 2.0,
        seed: 0,
    };
    cfg.repetitions = 4;
    cfg.test_size = 200;
    cfg.grid = GridSpec {
        min: None,
        max: None,
        count: 8,
    };
    let a = harness::intercept_experiment(&cfg).unwrap();
    let b = harness::intercept_experiment(&cfg).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.completed, 4);
    assert!(a
        .repetitions
        .iter()
        .all(|r| r.test_error.iter().all(|e| (0.0..=1.0).contains(e))));
    let dir = tempfile::tempdir().unwrap();
    harness::emit_experiment_data(&a, dir.path()).unwrap();
    assert_eq!(
        std::fs::read_to_string(dir.path().join("repetitions.csv"))
            .unwrap()
            .lines()
            .count(),
        5
    );
}

#[test]
fn verify_suite_passes_on_generated_data() {
    for (p, m, d, seed) in [(12, 8, 2, 1), (6, 6, 12, 2), (15, 5, 3, 3)] {
        let data = (0..)
            .map(|k| gaussian(&mut rng(seed, k), p, m, d, 3.0))
            .find(|x| regimes::thresholds(x).unwrap().separable)
            .unwrap();
        let report = harness::verify_dataset(&data).unwrap();
        for c in &report.checks {
            eprintln!("{:?} {} {}", c.status, c.name, c.detail);
        }
        assert!(report.all_passed());
    }
}
