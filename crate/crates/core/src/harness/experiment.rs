//! Repeated train/tune/test comparison of SVM intercepts against the mean
//! difference classifier on Gaussian data.

use rand::RngCore;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classifiers::{self, InterceptMode, SvmOptions};
use crate::error::{Error, Result};
use crate::harness::cv::{cross_validate_multi, fold_assignment, CvResult};
use crate::harness::path::{default_grid, log_grid};
use crate::regimes;
use crate::synth::{generate_with, task_rng, GaussianPairConfig};

pub const MODES: [InterceptMode; 3] = [
    InterceptMode::Standard,
    InterceptMode::Centroid,
    InterceptMode::Adaptive,
];

/// Log-spaced C grid. Missing bounds default to the data-dependent range
/// [C_small/100, 100·max(C_large, C_small)] of each training set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    #[serde(default)]
    pub min: Option<f64>,
    #[serde(default)]
    pub max: Option<f64>,
    pub count: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Class sizes, dimension and separation; its `seed` is unused.
    pub generator: GaussianPairConfig,
    pub grid: GridSpec,
    pub folds: usize,
    pub stratified: bool,
    /// Intercept whose error is reported as the headline figure. All three
    /// intercepts are always evaluated.
    pub intercept_mode: InterceptMode,
    pub repetitions: usize,
    pub test_size: usize,
    #[serde(default)]
    pub seed: u64,
}

impl ExperimentConfig {
    /// 51 + 50 points in 100 dimensions, means at ±e1, 5-fold CV and a
    /// 2000-point test set, repeated 200 times.
    pub fn intercept_study(seed: u64) -> Self {
        ExperimentConfig {
            generator: GaussianPairConfig {
                n_plus: 51,
                n_minus: 50,
                d: 100,
                separation: 2.0,
                seed,
            },
            grid: GridSpec {
                min: None,
                max: None,
                count: 30,
            },
            folds: 5,
            stratified: false,
            intercept_mode: InterceptMode::Adaptive,
            repetitions: 200,
            test_size: 2000,
            seed,
        }
    }

    pub fn named(name: &str, seed: u64) -> Result<Self> {
        match name {
            "intercept-study" => Ok(Self::intercept_study(seed)),
            other => Err(Error::InvalidConfig(format!("unknown experiment '{other}'"))),
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.generator.validate()?;
        if self.folds < 2 {
            return Err(Error::InvalidConfig("folds must be at least 2".into()));
        }
        if self.repetitions < 1 {
            return Err(Error::InvalidConfig("repetitions must be at least 1".into()));
        }
        if self.grid.count < 2 {
            return Err(Error::InvalidConfig("grid count must be at least 2".into()));
        }
        if self.test_size < 2 {
            return Err(Error::InvalidConfig("test set needs at least 2 points".into()));
        }
        Ok(())
    }

    fn test_config(&self) -> GaussianPairConfig {
        let g = &self.generator;
        let n = (g.n_plus + g.n_minus) as f64;
        let plus = ((self.test_size as f64 * g.n_plus as f64 / n).round() as usize).clamp(1, self.test_size - 1);
        GaussianPairConfig {
            n_plus: plus,
            n_minus: self.test_size - plus,
            ..*g
        }
    }
}

/// Outcome of one repetition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RepetitionResult {
    pub repetition: usize,
    /// CV-selected C per intercept mode (standard, centroid, adaptive).
    pub selected_c: [f64; 3],
    /// Test error per intercept mode at its selected C.
    pub test_error: [f64; 3],
    pub md_test_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeSummary {
    pub mode: InterceptMode,
    pub mean_test_error: f64,
    pub std_test_error: f64,
}

/// Mean of a − b over repetitions with its paired t statistic.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairedDifference {
    pub name: String,
    pub mean: f64,
    pub std: f64,
    pub t_statistic: f64,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSummary {
    pub config: ExperimentConfig,
    pub completed: usize,
    pub failures: Vec<String>,
    /// Headline error for `config.intercept_mode`.
    pub mean_test_error: f64,
    pub modes: Vec<ModeSummary>,
    pub md_mean_test_error: f64,
    pub paired: Vec<PairedDifference>,
    pub repetitions: Vec<RepetitionResult>,
}

fn mean_std(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let m = xs.iter().sum::<f64>() / n;
    let var = if xs.len() > 1 {
        xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    (m, var.sqrt())
}

fn paired(name: &str, a: &[f64], b: &[f64]) -> PairedDifference {
    let diffs: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    let (mean, std) = mean_std(&diffs);
    let se = std / (diffs.len() as f64).sqrt();
    PairedDifference {
        name: name.into(),
        mean,
        std,
        t_statistic: if se > 0.0 { mean / se } else { f64::NAN },
        count: diffs.len(),
    }
}

/// Index of the smallest CV error; ties go to the larger C.
fn select(cv: &[Option<f64>]) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (i, e) in cv.iter().enumerate() {
        if let Some(e) = *e {
            if best.is_none_or(|(_, b)| e <= b) {
                best = Some((i, e));
            }
        }
    }
    best.map(|(i, _)| i)
}

/// Runs one repetition with its own random streams.
pub fn run_repetition(cfg: &ExperimentConfig, r: usize) -> Result<RepetitionResult> {
    let svm = SvmOptions::default();
    let base = 3 * r as u64;
    let train = generate_with(&cfg.generator, &mut task_rng(cfg.seed, base))?;
    let test = generate_with(&cfg.test_config(), &mut task_rng(cfg.seed, base + 1))?;
    let fold_seed = task_rng(cfg.seed, base + 2).next_u64();

    let grid = match (cfg.grid.min, cfg.grid.max) {
        (Some(lo), Some(hi)) => log_grid(lo, hi, cfg.grid.count)?,
        _ => {
            let t = regimes::thresholds(&train)?;
            let g = default_grid(&t, cfg.grid.count)?;
            log_grid(
                cfg.grid.min.unwrap_or(g[0]),
                cfg.grid.max.unwrap_or(g[g.len() - 1]),
                cfg.grid.count,
            )?
        }
    };
    let folds = fold_assignment(&train, cfg.folds, cfg.stratified, fold_seed)?;
    let mut cv: Vec<Vec<CvResult>> = Vec::with_capacity(grid.len());
    for &c in &grid {
        cv.push(cross_validate_multi(&train, &folds, cfg.folds, MODES.len(), |t| {
            let sol = classifiers::soft_margin_svm(t, c, &svm)?;
            MODES.iter().map(|&m| classifiers::with_intercept(&sol, t, m)).collect()
        })?);
    }

    let mut selected_c = [0.0; 3];
    let mut test_error = [0.0; 3];
    for (k, &mode) in MODES.iter().enumerate() {
        let errors: Vec<Option<f64>> = cv.iter().map(|row| row[k].mean_error).collect();
        let i = select(&errors).ok_or_else(|| Error::InvalidConfig("no usable cross-validation fold".into()))?;
        let sol = classifiers::soft_margin_svm(&train, grid[i], &svm)?;
        selected_c[k] = grid[i];
        test_error[k] = classifiers::with_intercept(&sol, &train, mode)?.error_rate(&test)?;
    }
    let md_test_error = classifiers::mean_difference(&train)?.error_rate(&test)?;
    Ok(RepetitionResult {
        repetition: r,
        selected_c,
        test_error,
        md_test_error,
    })
}

/// Runs all repetitions in parallel. A failing repetition is logged and
/// skipped; the run fails only if none completes.
pub fn intercept_experiment(cfg: &ExperimentConfig) -> Result<ExperimentSummary> {
    cfg.validate()?;
    let outcomes: Vec<Result<RepetitionResult>> = (0..cfg.repetitions)
        .into_par_iter()
        .map(|r| run_repetition(cfg, r))
        .collect();
    let mut reps = Vec::new();
    let mut failures = Vec::new();
    for (r, o) in outcomes.into_iter().enumerate() {
        match o {
            Ok(x) => reps.push(x),
            Err(e) => {
                log::warn!("repetition {r} failed: {e}");
                failures.push(format!("repetition {r}: {e}"));
            }
        }
    }
    if reps.is_empty() {
        return Err(Error::InvalidConfig(format!(
            "all repetitions failed: {}",
            failures.join("; ")
        )));
    }
    let col = |k: usize| -> Vec<f64> { reps.iter().map(|r| r.test_error[k]).collect() };
    let md: Vec<f64> = reps.iter().map(|r| r.md_test_error).collect();
    let modes: Vec<ModeSummary> = MODES
        .iter()
        .enumerate()
        .map(|(k, &mode)| {
            let (m, s) = mean_std(&col(k));
            ModeSummary {
                mode,
                mean_test_error: m,
                std_test_error: s,
            }
        })
        .collect();
    let headline = MODES.iter().position(|&m| m == cfg.intercept_mode).unwrap_or(0);
    Ok(ExperimentSummary {
        config: *cfg,
        completed: reps.len(),
        failures,
        mean_test_error: modes[headline].mean_test_error,
        md_mean_test_error: mean_std(&md).0,
        paired: vec![
            paired("standard_minus_adaptive", &col(0), &col(2)),
            paired("standard_minus_centroid", &col(0), &col(1)),
            paired("standard_minus_md", &col(0), &md),
        ],
        modes,
        repetitions: reps,
    })
}
