//! Mean difference, Fisher, maximal data piling and SVM classifiers.

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::data::{zero_direction_tol, Dataset, Label, LinearModel};
use crate::error::{Error, Result};
use crate::geometry::{self, GapOptions};
use crate::linalg;
use crate::serde_vec;
use crate::smo::{self, SmoOptions};

/// Options for the dual SVM solver.
pub type SvmOptions = SmoOptions;

/// x̄+ − x̄− with the hyperplane halfway between the class means.
pub fn mean_difference(data: &Dataset) -> Result<LinearModel> {
    let mp = data.class_mean(Label::Positive);
    let mm = data.class_mean(Label::Negative);
    let w = &mp - &mm;
    if w.norm() <= zero_direction_tol(data.scale()) {
        return Err(Error::DegenerateDirection("class means coincide".into()));
    }
    let b = -0.5 * w.dot(&(mp + mm));
    Ok(LinearModel::new(w, b))
}

/// Fisher's linear discriminant, Σ̂_pool⁻¹(x̄+ − x̄−).
///
/// Requires n − 2 ≥ d and a numerically full-rank pooled covariance.
pub fn fld(data: &Dataset, rank_tol: f64) -> Result<LinearModel> {
    let (n, d) = (data.len(), data.dim());
    if n < d + 2 {
        return Err(Error::RankDeficient(format!(
            "pooled covariance is singular with n = {n}, d = {d}; use the maximal data piling classifier"
        )));
    }
    let pooled = linalg::pooled_covariance(data)?;
    if linalg::rank(&pooled, rank_tol) < d {
        return Err(Error::RankDeficient(
            "pooled covariance is singular; use the maximal data piling classifier".into(),
        ));
    }
    let mp = data.class_mean(Label::Positive);
    let mm = data.class_mean(Label::Negative);
    let diff = &mp - &mm;
    let w = pooled
        .lu()
        .solve(&diff)
        .ok_or_else(|| Error::RankDeficient("pooled covariance is singular".into()))?;
    if w.norm() <= zero_direction_tol(data.scale()) {
        return Err(Error::DegenerateDirection("class means coincide".into()));
    }
    let b = -0.5 * w.dot(&(mp + mm));
    Ok(LinearModel::new(w, b))
}

/// Maximal data piling direction with the intercept at the midpoint of the
/// projected class means (the two piles when d ≥ n − 1).
pub fn mdp_classifier(data: &Dataset, rank_tol: f64) -> Result<LinearModel> {
    let w = geometry::mdp_direction(data, rank_tol)?;
    let pp = w.dot(&data.class_mean(Label::Positive));
    let pm = w.dot(&data.class_mean(Label::Negative));
    Ok(LinearModel::new(w, -0.5 * (pp + pm)))
}

mod serde_cost {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(c: &f64, s: S) -> Result<S::Ok, S::Error> {
        if c.is_finite() {
            s.serialize_some(c)
        } else {
            s.serialize_none()
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::INFINITY))
    }
}

/// A fitted soft- or hard-margin SVM with its dual variables.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SoftMarginSolution {
    #[serde(flatten)]
    pub model: LinearModel,
    #[serde(with = "serde_vec")]
    pub alpha: DVector<f64>,
    #[serde(with = "serde_vec")]
    pub xi: DVector<f64>,
    /// Cost parameter; `f64::INFINITY` for hard margin (JSON `null`).
    #[serde(rename = "C", with = "serde_cost")]
    pub cost: f64,
    /// Primal objective ½‖w‖² + C Σξ.
    pub objective: f64,
    /// Dual objective Σα − ½‖w‖².
    pub dual_objective: f64,
    pub iterations: usize,
    /// Maximal pairwise KKT violation reported by the solver.
    pub kkt_violation: f64,
}

impl SoftMarginSolution {
    pub fn is_hard_margin(&self) -> bool {
        !self.cost.is_finite()
    }

    pub fn w(&self) -> &DVector<f64> {
        &self.model.w
    }

    pub fn b(&self) -> f64 {
        self.model.b
    }

    /// 1/‖w‖.
    pub fn margin_width(&self) -> f64 {
        self.model.margin_width()
    }

    /// Dual weight carried by one class.
    pub fn class_weight(&self, data: &Dataset, label: Label) -> f64 {
        data.indices_of(label).iter().map(|&i| self.alpha[i]).sum()
    }

    /// α above which a point counts as a support vector: 1e-8·C, or
    /// 1e-8·max α for hard margin.
    pub fn support_threshold(&self) -> f64 {
        if self.cost.is_finite() {
            1e-8 * self.cost
        } else {
            1e-8 * self.alpha.max().max(0.0)
        }
    }

    pub fn support_indices(&self) -> Vec<usize> {
        let t = self.support_threshold();
        (0..self.alpha.len()).filter(|&i| self.alpha[i] > t).collect()
    }
}

fn build_solution(data: &Dataset, cost: f64, dual: smo::DualSolution) -> SoftMarginSolution {
    let y = data.y_vector();
    let ya = dual.alpha.component_mul(&y);
    let w = data.points().transpose() * ya;
    let f = data.points() * &w;
    let xi = DVector::from_iterator(
        data.len(),
        (0..data.len()).map(|i| (1.0 - y[i] * (f[i] + dual.b)).max(0.0)),
    );
    let half_norm = 0.5 * w.norm_squared();
    let objective = if cost.is_finite() {
        half_norm + cost * xi.sum()
    } else {
        half_norm
    };
    let dual_objective = dual.alpha.sum() - half_norm;
    SoftMarginSolution {
        model: LinearModel::new(w, dual.b),
        alpha: dual.alpha,
        xi,
        cost,
        objective,
        dual_objective,
        iterations: dual.iterations,
        kkt_violation: dual.violation,
    }
}

/// Soft-margin linear SVM with cost `c`, solved in the dual.
pub fn soft_margin_svm(data: &Dataset, c: f64, opts: &SvmOptions) -> Result<SoftMarginSolution> {
    if !c.is_finite() || c <= 0.0 {
        return Err(Error::InvalidConfig(format!("C must be positive and finite, got {c}")));
    }
    let y: Vec<f64> = (0..data.len()).map(|i| data.y(i)).collect();
    let dual = smo::solve(&data.gram(), &y, c, opts)?;
    Ok(build_solution(data, c, dual))
}

/// Hard-margin linear SVM. Fails with `NotSeparable` unless a separating
/// direction is certified first.
pub fn hard_margin_svm(data: &Dataset, opts: &SvmOptions) -> Result<SoftMarginSolution> {
    let g = geometry::gap(data, &GapOptions::default())?;
    if !g.separable {
        return Err(Error::NotSeparable { gap_upper: g.upper });
    }
    let y: Vec<f64> = (0..data.len()).map(|i| data.y(i)).collect();
    let dual = smo::solve(&data.gram(), &y, f64::INFINITY, opts)?;
    Ok(build_solution(data, f64::INFINITY, dual))
}

/// Intercept placing the hyperplane halfway between the SVM centroids
/// m± = (1/A) Σ_{I±} α_i x_i.
///
/// The returned value is b = −½ w·(m+ + m−), so that f(m+) = −f(m−).
pub fn centroid_intercept(sol: &SoftMarginSolution, data: &Dataset) -> Result<f64> {
    let centroid = |label: Label| -> Result<DVector<f64>> {
        let idx = data.indices_of(label);
        let total: f64 = idx.iter().map(|&i| sol.alpha[i]).sum();
        if total <= 0.0 {
            return Err(Error::NoSupportVectors);
        }
        let mut m = DVector::zeros(data.dim());
        for &i in &idx {
            m += data.point(i) * sol.alpha[i];
        }
        Ok(m / total)
    };
    let mp = centroid(Label::Positive)?;
    let mm = centroid(Label::Negative)?;
    Ok(-0.5 * sol.model.w.dot(&(mp + mm)))
}

/// True when every point of at least one class is a support vector.
pub fn one_class_fully_supported(sol: &SoftMarginSolution, data: &Dataset) -> bool {
    let t = sol.support_threshold();
    [Label::Positive, Label::Negative]
        .iter()
        .any(|&l| data.indices_of(l).iter().all(|&i| sol.alpha[i] > t))
}

/// Centroid intercept when one class is entirely support vectors, else the
/// solver's own intercept.
pub fn adaptive_intercept(sol: &SoftMarginSolution, data: &Dataset) -> Result<f64> {
    if sol.alpha.sum() <= 0.0 {
        return Err(Error::NoSupportVectors);
    }
    if one_class_fully_supported(sol, data) {
        centroid_intercept(sol, data)
    } else {
        Ok(sol.model.b)
    }
}

/// Which intercept to attach to a fitted SVM direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum InterceptMode {
    #[default]
    Standard,
    Centroid,
    Adaptive,
}

impl std::str::FromStr for InterceptMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "standard" => Ok(InterceptMode::Standard),
            "centroid" => Ok(InterceptMode::Centroid),
            "adaptive" => Ok(InterceptMode::Adaptive),
            other => Err(Error::InvalidConfig(format!("unknown intercept mode '{other}'"))),
        }
    }
}

/// The fitted direction with the intercept chosen by `mode`.
pub fn with_intercept(sol: &SoftMarginSolution, data: &Dataset, mode: InterceptMode) -> Result<LinearModel> {
    let b = match mode {
        InterceptMode::Standard => sol.model.b,
        InterceptMode::Centroid => centroid_intercept(sol, data)?,
        InterceptMode::Adaptive => adaptive_intercept(sol, data)?,
    };
    Ok(LinearModel::new(sol.model.w.clone(), b))
}
