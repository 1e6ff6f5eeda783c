//! k-fold cross-validation with optional stratification.

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::classifiers::{self, InterceptMode, SvmOptions};
use crate::data::{Dataset, Label, LinearModel};
use crate::error::{Error, Result};
use crate::synth::task_rng;

/// Fold index of every point. Stratified assignment deals each class
/// round-robin, so every fold holds each class's share within one point.
pub fn fold_assignment(data: &Dataset, k: usize, stratified: bool, seed: u64) -> Result<Vec<usize>> {
    let n = data.len();
    if k < 2 || k > n {
        return Err(Error::InvalidConfig(format!("need 2 <= k <= n = {n}, got k = {k}")));
    }
    let mut rng = task_rng(seed, 0);
    let mut folds = vec![0; n];
    if stratified {
        let mut offset = 0;
        for label in [Label::Positive, Label::Negative] {
            let mut idx = data.indices_of(label);
            idx.shuffle(&mut rng);
            for (p, &i) in idx.iter().enumerate() {
                folds[i] = (offset + p) % k;
            }
            offset += idx.len();
        }
    } else {
        let mut idx: Vec<usize> = (0..n).collect();
        idx.shuffle(&mut rng);
        for (p, &i) in idx.iter().enumerate() {
            folds[i] = p % k;
        }
    }
    Ok(folds)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CvResult {
    /// Misclassified held-out points over all usable folds, divided by the
    /// number of held-out points in those folds. `None` if no fold is usable.
    pub mean_error: Option<f64>,
    /// Sample standard deviation of the per-fold error rates.
    pub std_error: Option<f64>,
    /// `None` for folds whose training part lacks a class.
    pub fold_errors: Vec<Option<f64>>,
}

#[derive(Default, Clone)]
struct Tally {
    wrong: usize,
    tested: usize,
    per_fold: Vec<Option<f64>>,
}

impl Tally {
    fn finish(self) -> CvResult {
        let rates: Vec<f64> = self.per_fold.iter().flatten().copied().collect();
        let std_error = (rates.len() >= 2).then(|| {
            let m = rates.iter().sum::<f64>() / rates.len() as f64;
            (rates.iter().map(|r| (r - m).powi(2)).sum::<f64>() / (rates.len() - 1) as f64).sqrt()
        });
        CvResult {
            mean_error: (self.tested > 0).then(|| self.wrong as f64 / self.tested as f64),
            std_error,
            fold_errors: self.per_fold,
        }
    }
}

/// Cross-validates a fitting procedure that returns `m` models per training
/// set (for instance one direction under several intercepts). Returns one
/// result per model.
pub fn cross_validate_multi<F>(data: &Dataset, folds: &[usize], k: usize, m: usize, fit: F) -> Result<Vec<CvResult>>
where
    F: Fn(&Dataset) -> Result<Vec<LinearModel>>,
{
    let mut tallies = vec![Tally::default(); m];
    for f in 0..k {
        let train: Vec<usize> = (0..data.len()).filter(|&i| folds[i] != f).collect();
        let test: Vec<usize> = (0..data.len()).filter(|&i| folds[i] == f).collect();
        let train_set = match data.subset(&train) {
            Ok(t) => t,
            Err(_) => {
                log::warn!("fold {f}: training part lacks a class; excluded");
                tallies.iter_mut().for_each(|t| t.per_fold.push(None));
                continue;
            }
        };
        if test.is_empty() {
            tallies.iter_mut().for_each(|t| t.per_fold.push(None));
            continue;
        }
        let models = fit(&train_set)?;
        let held_out = data.points().select_rows(test.iter());
        for (t, model) in tallies.iter_mut().zip(&models) {
            let pred = model.predict(&held_out)?;
            let wrong = test.iter().zip(&pred).filter(|&(&i, &p)| p != data.label(i)).count();
            t.wrong += wrong;
            t.tested += test.len();
            t.per_fold.push(Some(wrong as f64 / test.len() as f64));
        }
    }
    Ok(tallies.into_iter().map(Tally::finish).collect())
}

/// Cross-validated error of a soft-margin SVM with cost `c`.
pub fn cross_validate(
    data: &Dataset,
    c: f64,
    k: usize,
    stratified: bool,
    mode: InterceptMode,
    seed: u64,
    svm: &SvmOptions,
) -> Result<CvResult> {
    let folds = fold_assignment(data, k, stratified, seed)?;
    let mut out = cross_validate_multi(data, &folds, k, 1, |train| {
        let sol = classifiers::soft_margin_svm(train, c, svm)?;
        Ok(vec![classifiers::with_intercept(&sol, train, mode)?])
    })?;
    Ok(out.remove(0))
}
