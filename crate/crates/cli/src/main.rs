use std::fs::File;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use svm_geometry::classifiers::{self, InterceptMode, SvmOptions};
use svm_geometry::harness::{self, ExperimentConfig, PathOptions};
use svm_geometry::io::{load_dataset_csv, save_dataset_csv};
use svm_geometry::linalg::DEFAULT_RANK_TOL;
use svm_geometry::regimes;
use svm_geometry::synth::{generate_gaussian_pair, GaussianPairConfig};
use svm_geometry::Dataset;

#[derive(Parser)]
#[command(name = "svmgeo", version, about = "Linear SVM geometry toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fit one classifier and print it as JSON.
    Fit(FitArgs),
    /// Fit the SVM over a grid of C values.
    Path(PathArgs),
    /// Cross-validated error of the SVM at one C.
    Cv(CvArgs),
    /// Run the intercept comparison experiment.
    Experiment(ExperimentArgs),
    /// Check the regime characterizations on a dataset.
    Verify(VerifyArgs),
    /// Draw a Gaussian two-class dataset to CSV.
    Gen(GenArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Classifier {
    Svm,
    Hard,
    Md,
    Fld,
    Mdp,
}

#[derive(Clone, Copy, ValueEnum)]
enum Intercept {
    Standard,
    Centroid,
    Adaptive,
}

impl From<Intercept> for InterceptMode {
    fn from(i: Intercept) -> Self {
        match i {
            Intercept::Standard => InterceptMode::Standard,
            Intercept::Centroid => InterceptMode::Centroid,
            Intercept::Adaptive => InterceptMode::Adaptive,
        }
    }
}

#[derive(Args)]
struct SolverArgs {
    /// Stopping tolerance on the maximal KKT violation.
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
    #[arg(long, default_value_t = 1_000_000)]
    max_iter: usize,
}

impl SolverArgs {
    fn options(&self) -> SvmOptions {
        SvmOptions {
            tol: self.tol,
            max_iter: self.max_iter,
            ..SvmOptions::default()
        }
    }
}

#[derive(Args)]
struct FitArgs {
    /// CSV with feature columns and a final ±1 label column.
    #[arg(long)]
    data: PathBuf,
    #[arg(long, value_enum, default_value = "svm")]
    classifier: Classifier,
    /// Cost parameter (soft-margin SVM only).
    #[arg(long = "c")]
    c: Option<f64>,
    #[arg(long, value_enum, default_value = "standard")]
    intercept: Intercept,
    #[command(flatten)]
    solver: SolverArgs,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct PathArgs {
    #[arg(long)]
    data: PathBuf,
    /// Optional held-out test set.
    #[arg(long)]
    test: Option<PathBuf>,
    #[arg(long)]
    grid_min: Option<f64>,
    #[arg(long)]
    grid_max: Option<f64>,
    #[arg(long, default_value_t = 30)]
    grid_count: usize,
    /// CV folds; 0 disables cross-validation.
    #[arg(long, default_value_t = 5)]
    folds: usize,
    #[arg(long)]
    stratified: bool,
    #[arg(long, value_enum, default_value = "standard")]
    intercept: Intercept,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    solver: SolverArgs,
    /// Directory for plot CSVs and manifest.
    #[arg(long)]
    plot_dir: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CvArgs {
    #[arg(long)]
    data: PathBuf,
    #[arg(long = "c")]
    c: f64,
    #[arg(long, default_value_t = 5)]
    folds: usize,
    #[arg(long)]
    stratified: bool,
    #[arg(long, value_enum, default_value = "standard")]
    intercept: Intercept,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    solver: SolverArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ExperimentArgs {
    /// Named configuration (`intercept-study`).
    #[arg(long, conflicts_with = "config")]
    name: Option<String>,
    /// JSON file holding an experiment configuration.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: u64,
    /// Override the number of repetitions.
    #[arg(long)]
    repetitions: Option<usize>,
    /// Directory for the per-repetition CSV and summary JSON.
    #[arg(long)]
    plot_dir: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    data: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GenArgs {
    /// JSON generator configuration; overrides the size flags.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, default_value_t = 20)]
    n_plus: usize,
    #[arg(long, default_value_t = 20)]
    n_minus: usize,
    #[arg(long, default_value_t = 2)]
    d: usize,
    #[arg(long, default_value_t = 4.0)]
    separation: f64,
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

fn emit<T: Serialize>(value: &T, out: Option<&Path>) -> Result<()> {
    match out {
        Some(p) => {
            let f = File::create(p).with_context(|| format!("creating {}", p.display()))?;
            serde_json::to_writer_pretty(f, value)?;
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            serde_json::to_writer_pretty(&mut lock, value)?;
            writeln!(lock)?;
        }
    }
    Ok(())
}

fn load(path: &Path) -> Result<Dataset> {
    load_dataset_csv(path).with_context(|| format!("reading {}", path.display()))
}

fn fit(a: &FitArgs) -> Result<()> {
    let data = load(&a.data)?;
    let opts = a.solver.options();
    match a.classifier {
        Classifier::Svm => {
            let Some(c) = a.c else {
                bail!("--c is required for the soft-margin SVM")
            };
            let sol = classifiers::soft_margin_svm(&data, c, &opts)?;
            let mut sol_out = sol.clone();
            sol_out.model = classifiers::with_intercept(&sol, &data, a.intercept.into())?;
            emit(&sol_out, a.out.as_deref())
        }
        Classifier::Hard => {
            let sol = classifiers::hard_margin_svm(&data, &opts)?;
            let mut sol_out = sol.clone();
            sol_out.model = classifiers::with_intercept(&sol, &data, a.intercept.into())?;
            emit(&sol_out, a.out.as_deref())
        }
        Classifier::Md => emit(&classifiers::mean_difference(&data)?, a.out.as_deref()),
        Classifier::Fld => emit(&classifiers::fld(&data, DEFAULT_RANK_TOL)?, a.out.as_deref()),
        Classifier::Mdp => emit(&classifiers::mdp_classifier(&data, DEFAULT_RANK_TOL)?, a.out.as_deref()),
    }
}

fn path(a: &PathArgs) -> Result<()> {
    let data = load(&a.data)?;
    let test = a.test.as_deref().map(load).transpose()?;
    let grid = match (a.grid_min, a.grid_max) {
        (Some(lo), Some(hi)) => harness::log_grid(lo, hi, a.grid_count)?,
        (lo, hi) => {
            let g = harness::default_grid(&regimes::thresholds(&data)?, a.grid_count)?;
            harness::log_grid(lo.unwrap_or(g[0]), hi.unwrap_or(g[g.len() - 1]), a.grid_count)?
        }
    };
    let opts = PathOptions {
        folds: a.folds,
        stratified: a.stratified,
        intercept: a.intercept.into(),
        seed: a.seed,
        svm: a.solver.options(),
    };
    let curve = harness::tuning_path(&data, test.as_ref(), &grid, &opts)?;
    if let Some(dir) = &a.plot_dir {
        harness::emit_plot_data(&curve, dir)?;
    }
    emit(&curve, a.out.as_deref())
}

fn cv(a: &CvArgs) -> Result<()> {
    let data = load(&a.data)?;
    let r = harness::cross_validate(
        &data,
        a.c,
        a.folds,
        a.stratified,
        a.intercept.into(),
        a.seed,
        &a.solver.options(),
    )?;
    emit(&r, a.out.as_deref())
}

fn experiment(a: &ExperimentArgs) -> Result<()> {
    let mut cfg = match (&a.name, &a.config) {
        (Some(name), None) => ExperimentConfig::named(name, a.seed)?,
        (None, Some(p)) => {
            let f = File::open(p).with_context(|| format!("reading {}", p.display()))?;
            let mut cfg: ExperimentConfig = serde_json::from_reader(f)?;
            cfg.seed = a.seed;
            cfg
        }
        _ => bail!("give exactly one of --name or --config"),
    };
    if let Some(r) = a.repetitions {
        cfg.repetitions = r;
    }
    let summary = harness::intercept_experiment(&cfg)?;
    if let Some(dir) = &a.plot_dir {
        harness::emit_experiment_data(&summary, dir)?;
    }
    emit(&summary, a.out.as_deref())
}

fn verify(a: &VerifyArgs) -> Result<()> {
    let data = load(&a.data)?;
    let report = harness::verify_dataset(&data)?;
    emit(&report, a.out.as_deref())?;
    if !report.all_passed() {
        bail!("one or more checks failed");
    }
    Ok(())
}

fn gen(a: &GenArgs) -> Result<()> {
    let cfg = match &a.config {
        Some(p) => {
            let f = File::open(p).with_context(|| format!("reading {}", p.display()))?;
            let mut cfg: GaussianPairConfig = serde_json::from_reader(f)?;
            cfg.seed = a.seed;
            cfg
        }
        None => GaussianPairConfig {
            n_plus: a.n_plus,
            n_minus: a.n_minus,
            d: a.d,
            separation: a.separation,
            seed: a.seed,
        },
    };
    let data = generate_gaussian_pair(&cfg)?;
    save_dataset_csv(&data, &a.out).with_context(|| format!("writing {}", a.out.display()))?;
    Ok(())
}

fn main() -> Result<()> {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match Cli::parse().command {
        Command::Fit(a) => fit(&a),
        Command::Path(a) => path(&a),
        Command::Cv(a) => cv(&a),
        Command::Experiment(a) => experiment(&a),
        Command::Verify(a) => verify(&a),
        Command::Gen(a) => gen(&a),
    }
}
