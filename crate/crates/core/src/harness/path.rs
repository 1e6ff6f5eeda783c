//! Error, margin and angle curves over a grid of cost values.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classifiers::{self, InterceptMode, SoftMarginSolution, SvmOptions};
use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::harness::cv;
use crate::regimes::{self, RegimeReport, RegimeThresholds};

/// `count` log-spaced values from `min` to `max` inclusive.
pub fn log_grid(min: f64, max: f64, count: usize) -> Result<Vec<f64>> {
    if !min.is_finite() || !max.is_finite() || min <= 0.0 || max <= min || count < 2 {
        return Err(Error::InvalidConfig(format!(
            "grid needs 0 < min < max and count >= 2, got [{min}, {max}] x {count}"
        )));
    }
    let (lo, hi) = (min.ln(), max.ln());
    Ok((0..count)
        .map(|i| (lo + (hi - lo) * i as f64 / (count - 1) as f64).exp())
        .collect())
}

/// Grid spanning [C_small/100, 100·max(C_large, C_small)].
pub fn default_grid(t: &RegimeThresholds, count: usize) -> Result<Vec<f64>> {
    let top = t.c_large.unwrap_or(t.c_small).max(t.c_small);
    log_grid(t.c_small / 100.0, 100.0 * top, count)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PathOptions {
    /// Number of CV folds; 0 skips cross-validation.
    pub folds: usize,
    pub stratified: bool,
    pub intercept: InterceptMode,
    pub seed: u64,
    #[serde(skip)]
    pub svm: SvmOptions,
}

impl Default for PathOptions {
    fn default() -> Self {
        PathOptions {
            folds: 5,
            stratified: false,
            intercept: InterceptMode::Standard,
            seed: 0,
            svm: SvmOptions::default(),
        }
    }
}

/// One grid point. Numeric fields are `None` when not applicable or when
/// the fit failed (see `failure`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TuningRow {
    #[serde(rename = "C")]
    pub c: f64,
    pub train_error: Option<f64>,
    pub cv_error: Option<f64>,
    pub cv_std: Option<f64>,
    pub test_error: Option<f64>,
    pub margin_width: Option<f64>,
    pub report: Option<RegimeReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub solution: Option<SoftMarginSolution>,
    pub failure: Option<String>,
}

impl TuningRow {
    pub fn angle_to_md(&self) -> Option<f64> {
        self.report.as_ref().and_then(|r| r.angle_to_md)
    }

    pub fn angle_to_hard_margin(&self) -> Option<f64> {
        self.report.as_ref().and_then(|r| r.angle_to_hard_margin)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TuningCurve {
    pub c_grid: Vec<f64>,
    pub rows: Vec<TuningRow>,
    pub thresholds: RegimeThresholds,
    pub has_test: bool,
    pub intercept: InterceptMode,
}

fn row_at(
    data: &Dataset,
    test: Option<&Dataset>,
    c: f64,
    hard: Option<&SoftMarginSolution>,
    opts: &PathOptions,
) -> Result<TuningRow> {
    let sol = classifiers::soft_margin_svm(data, c, &opts.svm)?;
    let model = classifiers::with_intercept(&sol, data, opts.intercept)?;
    let (cv_error, cv_std) = if opts.folds >= 2 && opts.folds <= data.len() {
        let r = cv::cross_validate(
            data,
            c,
            opts.folds,
            opts.stratified,
            opts.intercept,
            opts.seed,
            &opts.svm,
        )?;
        (r.mean_error, r.std_error)
    } else {
        (None, None)
    };
    let test_error = match test {
        Some(t) => Some(model.error_rate(t)?),
        None => None,
    };
    Ok(TuningRow {
        c,
        train_error: Some(model.error_rate(data)?),
        cv_error,
        cv_std,
        test_error,
        margin_width: Some(sol.margin_width()),
        report: Some(regimes::regime_report(data, &sol, hard)?),
        solution: Some(sol),
        failure: None,
    })
}

/// Fits the SVM at every grid value. A failing grid point becomes a row
/// with `failure` set; the rest of the curve is still computed.
pub fn tuning_path(data: &Dataset, test: Option<&Dataset>, c_grid: &[f64], opts: &PathOptions) -> Result<TuningCurve> {
    if c_grid.is_empty()
        || c_grid.iter().any(|c| c.is_nan())
        || c_grid.windows(2).any(|w| w[1] <= w[0])
        || c_grid[0] <= 0.0
    {
        return Err(Error::InvalidConfig(
            "C grid must be positive and strictly ascending".into(),
        ));
    }
    if let Some(t) = test {
        if t.dim() != data.dim() {
            return Err(Error::DimensionMismatch {
                expected: data.dim(),
                got: t.dim(),
            });
        }
    }
    let thresholds = regimes::thresholds(data)?;
    let hard = if thresholds.separable {
        classifiers::hard_margin_svm(data, &opts.svm)
            .map_err(|e| log::warn!("hard-margin fit failed: {e}"))
            .ok()
    } else {
        None
    };
    let rows = c_grid
        .par_iter()
        .map(|&c| {
            row_at(data, test, c, hard.as_ref(), opts).unwrap_or_else(|e| {
                log::warn!("C = {c}: {e}");
                TuningRow {
                    c,
                    train_error: None,
                    cv_error: None,
                    cv_std: None,
                    test_error: None,
                    margin_width: None,
                    report: None,
                    solution: None,
                    failure: Some(e.to_string()),
                }
            })
        })
        .collect();
    Ok(TuningCurve {
        c_grid: c_grid.to_vec(),
        rows,
        thresholds,
        has_test: test.is_some(),
        intercept: opts.intercept,
    })
}
