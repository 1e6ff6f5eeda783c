//! CSV and JSON files for plotting tuning curves and experiment results.

use std::fs::File;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::harness::experiment::ExperimentSummary;
use crate::harness::path::TuningCurve;
use crate::regimes::RegimeThresholds;

/// Describes the files written for one tuning curve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlotManifest {
    pub files: Vec<String>,
    pub thresholds: RegimeThresholds,
    pub has_test_error: bool,
    pub notes: Vec<String>,
}

fn cell(v: Option<f64>) -> String {
    v.map(|x| format!("{x:?}")).unwrap_or_default()
}

fn write_table(path: &Path, header: &[&str], rows: impl Iterator<Item = Vec<String>>) -> Result<()> {
    let mut w = csv::Writer::from_writer(File::create(path)?);
    w.write_record(header)?;
    for r in rows {
        w.write_record(&r)?;
    }
    w.flush()?;
    Ok(())
}

/// Writes `errors.csv`, `margin.csv`, `angles.csv` and `manifest.json`
/// into `dir`, creating it if needed.
pub fn emit_plot_data(curve: &TuningCurve, dir: impl AsRef<Path>) -> Result<PlotManifest> {
    let dir = dir.as_ref();
    std::fs::create_dir_all(dir)?;

    let mut header = vec!["C", "train_error", "cv_error", "cv_std"];
    if curve.has_test {
        header.push("test_error");
    }
    write_table(
        &dir.join("errors.csv"),
        &header,
        curve.rows.iter().map(|r| {
            let mut v = vec![
                format!("{:?}", r.c),
                cell(r.train_error),
                cell(r.cv_error),
                cell(r.cv_std),
            ];
            if curve.has_test {
                v.push(cell(r.test_error));
            }
            v
        }),
    )?;
    write_table(
        &dir.join("margin.csv"),
        &["C", "margin_width"],
        curve
            .rows
            .iter()
            .map(|r| vec![format!("{:?}", r.c), cell(r.margin_width)]),
    )?;
    write_table(
        &dir.join("angles.csv"),
        &["C", "angle_to_md", "angle_to_hard_margin"],
        curve.rows.iter().map(|r| {
            vec![
                format!("{:?}", r.c),
                cell(r.angle_to_md()),
                cell(r.angle_to_hard_margin()),
            ]
        }),
    )?;

    let mut notes = Vec::new();
    if !curve.has_test {
        notes.push("no test set; errors.csv has no test_error column".to_string());
    }
    if !curve.thresholds.separable {
        notes.push("classes overlap; C_large and hard-margin angles are undefined".to_string());
    }
    let failed = curve.rows.iter().filter(|r| r.failure.is_some()).count();
    if failed > 0 {
        notes.push(format!("{failed} grid points failed to fit; their cells are empty"));
    }
    let manifest = PlotManifest {
        files: ["errors.csv", "margin.csv", "angles.csv"].map(String::from).to_vec(),
        thresholds: curve.thresholds,
        has_test_error: curve.has_test,
        notes,
    };
    serde_json::to_writer_pretty(File::create(dir.join("manifest.json"))?, &manifest)?;
    Ok(manifest)
}

/// Writes `repetitions.csv` and `summary.json` into `dir`.
pub fn emit_experiment_data(summary: &ExperimentSummary, dir: impl AsRef<Path>) -> Result<()> {
    let dir = dir.as_ref();
    std::fs::create_dir_all(dir)?;
    write_table(
        &dir.join("repetitions.csv"),
        &[
            "repetition",
            "c_standard",
            "c_centroid",
            "c_adaptive",
            "err_standard",
            "err_centroid",
            "err_adaptive",
            "err_md",
        ],
        summary.repetitions.iter().map(|r| {
            let mut v = vec![r.repetition.to_string()];
            v.extend(r.selected_c.iter().map(|x| format!("{x:?}")));
            v.extend(r.test_error.iter().map(|x| format!("{x:?}")));
            v.push(format!("{:?}", r.md_test_error));
            v
        }),
    )?;
    serde_json::to_writer_pretty(File::create(dir.join("summary.json"))?, summary)?;
    Ok(())
}
