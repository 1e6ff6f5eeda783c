//! Cost thresholds and executable checks of the small-C, large-C and
//! data-piling characterizations of the SVM direction.

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::classifiers::{self, SoftMarginSolution};
use crate::data::{direction_angle, Dataset, Label};
use crate::error::{Error, Result};
use crate::geometry::{self, GapOptions, GapResult};
use crate::kkt::{self, SupportClassification};
use crate::linalg;

/// C_small = 2/(max(n+, n−)·D²) and, for separable data, C_large = 2/G².
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegimeThresholds {
    pub c_small: f64,
    pub c_large: Option<f64>,
    pub diameter: f64,
    pub gap: f64,
    pub separable: bool,
}

impl RegimeThresholds {
    pub fn from_parts(data: &Dataset, diameter: f64, gap: &GapResult) -> Self {
        let larger = data.n_plus().max(data.n_minus()) as f64;
        RegimeThresholds {
            c_small: 2.0 / (larger * diameter * diameter),
            c_large: gap.separable.then(|| 2.0 / (gap.gap * gap.gap)),
            diameter,
            gap: gap.gap,
            separable: gap.separable,
        }
    }
}

pub fn thresholds(data: &Dataset) -> Result<RegimeThresholds> {
    thresholds_with(data, &GapOptions::default())
}

pub fn thresholds_with(data: &Dataset, opts: &GapOptions) -> Result<RegimeThresholds> {
    let g = geometry::gap(data, opts)?;
    Ok(RegimeThresholds::from_parts(data, geometry::diameter(data), &g))
}

/// Decomposition of the SVM direction in the small-C unbalanced regime,
/// w = s·(Σ_{M_l} α_i x_i + C Σ_{L_l} x_i − C Σ_{I_s} x_i), where l is the
/// larger class, s the smaller one and s = ±1 the sign of the larger class.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CroppedMd {
    pub larger: Label,
    pub margin_indices: Vec<usize>,
    pub slack_indices: Vec<usize>,
    /// Σ_{M_l} α_i.
    pub margin_weight: f64,
    /// |Σ_{M_l} α_i − C(n_s − |L_l|)|.
    pub constraint_residual: f64,
    /// ‖w − decomposition‖.
    pub decomposition_residual: f64,
    pub angle_to_md: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum SmallCRegime {
    ExactMD { angle_to_md: f64 },
    CroppedMD(CroppedMd),
    NotInRegime,
}

fn all_slack_at_c(sol: &SoftMarginSolution, idx: &[usize], cls: &SupportClassification, label: Label) -> bool {
    let c = sol.cost;
    cls.slack(label).len() == idx.len() && idx.iter().all(|&i| (sol.alpha[i] - c).abs() <= 1e-8 * c)
}

/// Recognizes the small-C regime: every point of the smaller class is a
/// slack vector with weight C. Balanced data then give the mean difference
/// direction (`ExactMD` when the angle is within `angle_tol`); unbalanced
/// data give the cropped decomposition with its residuals.
pub fn check_small_c_regime(data: &Dataset, sol: &SoftMarginSolution, angle_tol: f64) -> Result<SmallCRegime> {
    if sol.is_hard_margin() {
        return Ok(SmallCRegime::NotInRegime);
    }
    let c = sol.cost;
    let cls = kkt::classify_support_vectors(sol, data, 1e-8);
    let md = classifiers::mean_difference(data).map(|m| m.w);
    let angle_to_md = match &md {
        Ok(w_md) => direction_angle(&sol.model.w, w_md).unwrap_or(f64::NAN),
        Err(_) => f64::NAN,
    };

    // With equal class sizes either class may play the smaller one.
    let candidates: Vec<Label> = if data.is_balanced() {
        vec![Label::Negative, Label::Positive]
    } else {
        vec![data.larger_class().flipped()]
    };
    let Some(smaller) = candidates
        .into_iter()
        .find(|&l| all_slack_at_c(sol, &data.indices_of(l), &cls, l))
    else {
        return Ok(SmallCRegime::NotInRegime);
    };
    let larger = smaller.flipped();

    if data.is_balanced() && angle_to_md <= angle_tol {
        return Ok(SmallCRegime::ExactMD { angle_to_md });
    }

    let margin_indices = cls.margin(larger).to_vec();
    let slack_indices = cls.slack(larger).to_vec();
    let margin_weight: f64 = margin_indices.iter().map(|&i| sol.alpha[i]).sum();
    let n_small = data.count(smaller) as f64;
    let constraint_residual = (margin_weight - c * (n_small - slack_indices.len() as f64)).abs();

    let mut decomposition = DVector::zeros(data.dim());
    for &i in &margin_indices {
        decomposition += data.point(i) * sol.alpha[i];
    }
    for &i in &slack_indices {
        decomposition += data.point(i) * c;
    }
    for i in data.indices_of(smaller) {
        decomposition -= data.point(i) * c;
    }
    decomposition *= larger.sign();
    let decomposition_residual = (&sol.model.w - decomposition).norm();

    Ok(SmallCRegime::CroppedMD(CroppedMd {
        larger,
        margin_indices,
        slack_indices,
        margin_weight,
        constraint_residual,
        decomposition_residual,
        angle_to_md,
    }))
}

/// True when every training point is assigned to the larger class.
pub fn check_margin_bounce(data: &Dataset, sol: &SoftMarginSolution) -> bool {
    let larger = data.larger_class();
    match sol.model.predict(data.points()) {
        Ok(pred) => pred.iter().all(|&p| p == larger),
        Err(_) => false,
    }
}

/// Relative distance between a soft-margin fit and the hard-margin fit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HardMarginComparison {
    pub angle: f64,
    /// ‖w_soft − w_hard‖ / ‖w_hard‖.
    pub relative_w: f64,
    /// |b_soft − b_hard| / (‖w_hard‖·scale).
    pub relative_b: f64,
}

impl HardMarginComparison {
    pub fn equivalent(&self, tol: f64) -> bool {
        self.relative_w <= tol && self.relative_b <= tol
    }
}

pub fn compare_to_hard_margin(
    data: &Dataset,
    soft: &SoftMarginSolution,
    hard: &SoftMarginSolution,
) -> Result<HardMarginComparison> {
    let wh = hard.model.w.norm();
    Ok(HardMarginComparison {
        angle: direction_angle(&soft.model.w, &hard.model.w)?,
        relative_w: (&soft.model.w - &hard.model.w).norm() / wh,
        relative_b: (soft.model.b - hard.model.b).abs() / (wh * data.scale()),
    })
}

/// Fits the hard-margin SVM and reports whether `sol` coincides with it.
/// Fails with `NotSeparable` when the classes overlap.
pub fn check_hard_margin_equiv(data: &Dataset, sol: &SoftMarginSolution, tol: f64) -> Result<bool> {
    let hard = classifiers::hard_margin_svm(data, &classifiers::SvmOptions::default())?;
    Ok(compare_to_hard_margin(data, sol, &hard)?.equivalent(tol))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum MdpEquivalence {
    /// The SVM direction is the MDP direction of the whole dataset.
    FullMDP { angle: f64 },
    /// The SVM direction is the MDP direction of its support vectors.
    CroppedMDP { support: Vec<usize>, angle: f64 },
    /// Neither identity holds at the tolerance.
    NotEquivalent {
        angle_full: Option<f64>,
        angle_cropped: Option<f64>,
    },
    /// Neither identity is claimed for this dimension.
    NotApplicable { reason: String },
}

/// Compares a hard-margin direction with the MDP direction of the data and
/// of its support vectors.
pub fn check_mdp_equiv(data: &Dataset, sol: &SoftMarginSolution, angle_tol: f64) -> Result<MdpEquivalence> {
    let (n, d) = (data.len(), data.dim());
    let w = &sol.model.w;
    let mut angle_full = None;
    if d + 1 >= n {
        let a = direction_angle(w, &geometry::mdp_direction(data, linalg::DEFAULT_RANK_TOL)?)?;
        if a <= angle_tol {
            return Ok(MdpEquivalence::FullMDP { angle: a });
        }
        angle_full = Some(a);
    }
    let support = sol.support_indices();
    if d + 1 < support.len() {
        return Ok(match angle_full {
            Some(_) => MdpEquivalence::NotEquivalent {
                angle_full,
                angle_cropped: None,
            },
            None => MdpEquivalence::NotApplicable {
                reason: format!("{} support vectors exceed d + 1 = {}", support.len(), d + 1),
            },
        });
    }
    let sub = data.subset(&support)?;
    let a = direction_angle(w, &geometry::mdp_direction(&sub, linalg::DEFAULT_RANK_TOL)?)?;
    if a <= angle_tol {
        Ok(MdpEquivalence::CroppedMDP { support, angle: a })
    } else {
        Ok(MdpEquivalence::NotEquivalent {
            angle_full,
            angle_cropped: Some(a),
        })
    }
}

/// Outcome of the larger-class support-vector count bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SupportCountCheck {
    pub larger_class_support: usize,
    /// n_s + d − 1.
    pub bound: usize,
    /// n_s + d + 1, a looser variant.
    pub loose_bound: usize,
    pub holds: bool,
    pub holds_loose: bool,
    /// Set when the data are not in general position and the check is
    /// report-only.
    pub skipped: Option<String>,
}

/// Heuristic general-position screen: no repeated points and an affine
/// hull of full dimension min(d, n − 1).
pub fn general_position_issue(data: &Dataset) -> Option<String> {
    let n = data.len();
    for i in 0..n {
        for j in (i + 1)..n {
            if data.points().row(i) == data.points().row(j) {
                return Some(format!("points {i} and {j} coincide"));
            }
        }
    }
    let xc = linalg::centered(data.points(), &data.mean());
    let r = linalg::rank(&xc, 1e-9);
    let want = data.dim().min(n - 1);
    (r < want).then(|| format!("affine hull has dimension {r}, expected {want}"))
}

pub fn support_count_check(data: &Dataset, sol: &SoftMarginSolution) -> SupportCountCheck {
    let larger = data.larger_class();
    let n_small = data.count(larger.flipped());
    let t = sol.support_threshold();
    let count = data.indices_of(larger).iter().filter(|&&i| sol.alpha[i] > t).count();
    let bound = n_small + data.dim() - 1;
    let loose_bound = n_small + data.dim() + 1;
    SupportCountCheck {
        larger_class_support: count,
        bound,
        loose_bound,
        holds: count <= bound,
        holds_loose: count <= loose_bound,
        skipped: general_position_issue(data).or_else(|| vanishing_w(data)),
    }
}

/// With w = 0 optimal every point lies on the margin and the dual optimum
/// is a face, so the support set is not determined by the problem.
fn vanishing_w(data: &Dataset) -> Option<String> {
    matches!(geometry::zero_direction_optimal(data), Ok(true))
        .then(|| "w = 0 is optimal; the dual optimum is not unique".to_string())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Regime {
    ExactMD,
    CroppedMD,
    Intermediate,
    HardMarginEquiv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassSupportCounts {
    pub margin: usize,
    pub slack: usize,
}

/// Summary of one fit at one value of C.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegimeReport {
    #[serde(rename = "C")]
    pub c: f64,
    pub regime: Regime,
    pub margin_bounce: bool,
    pub angle_to_md: Option<f64>,
    pub angle_to_mdp: Option<f64>,
    pub angle_to_hard_margin: Option<f64>,
    pub support_plus: ClassSupportCounts,
    pub support_minus: ClassSupportCounts,
    pub kkt_violation: f64,
    /// Whether the positive label is the smaller class in the input.
    pub labels_flipped: bool,
}

/// Angle tolerance used to flag regime membership in reports.
pub const REPORT_ANGLE_TOL: f64 = 1e-4;

/// Builds the report for a soft-margin fit; `hard` is the hard-margin fit
/// when the data are separable.
pub fn regime_report(
    data: &Dataset,
    sol: &SoftMarginSolution,
    hard: Option<&SoftMarginSolution>,
) -> Result<RegimeReport> {
    if sol.model.w.len() != data.dim() {
        return Err(Error::DimensionMismatch {
            expected: data.dim(),
            got: sol.model.w.len(),
        });
    }
    let w = &sol.model.w;
    let nonzero = w.norm() > 0.0;
    let angle_to_md = match classifiers::mean_difference(data) {
        Ok(md) if nonzero => Some(direction_angle(w, &md.w)?),
        _ => None,
    };
    let angle_to_mdp = match geometry::mdp_direction(data, linalg::DEFAULT_RANK_TOL) {
        Ok(v) if nonzero => Some(direction_angle(w, &v)?),
        _ => None,
    };
    let hard_cmp = match hard {
        Some(h) if nonzero => Some(compare_to_hard_margin(data, sol, h)?),
        _ => None,
    };
    let small = check_small_c_regime(data, sol, REPORT_ANGLE_TOL)?;
    let regime = match (&small, hard_cmp) {
        (SmallCRegime::ExactMD { .. }, _) => Regime::ExactMD,
        (SmallCRegime::CroppedMD(_), _) => Regime::CroppedMD,
        (_, Some(h)) if h.angle <= REPORT_ANGLE_TOL && h.relative_w <= 1e-3 => Regime::HardMarginEquiv,
        _ => Regime::Intermediate,
    };
    let cls = kkt::classify_support_vectors(sol, data, 1e-8);
    let counts = |l: Label| ClassSupportCounts {
        margin: cls.margin(l).len(),
        slack: cls.slack(l).len(),
    };
    Ok(RegimeReport {
        c: sol.cost,
        regime,
        margin_bounce: check_margin_bounce(data, sol),
        angle_to_md,
        angle_to_mdp,
        angle_to_hard_margin: hard_cmp.map(|h| h.angle),
        support_plus: counts(Label::Positive),
        support_minus: counts(Label::Negative),
        kkt_violation: kkt::verify_kkt(data, sol).max_violation(),
        labels_flipped: data.n_plus() < data.n_minus(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classifiers::{hard_margin_svm, soft_margin_svm, SvmOptions};

    fn two_point() -> Dataset {
        Dataset::from_rows(&[vec![1.0, 0.0], vec![-1.0, 0.0]], &[1.0, -1.0]).unwrap()
    }

    #[test]
    fn threshold_formulas() {
        let t = thresholds(&two_point()).unwrap();
        assert!((t.diameter - 2.0).abs() < 1e-12);
        assert!((t.c_small - 0.5).abs() < 1e-12);
        assert!((t.c_large.unwrap() - 0.5).abs() < 1e-9);

        let rows: Vec<Vec<f64>> = (0..40).map(|i| vec![if i < 20 { 1.0 } else { -1.0 }, 0.0]).collect();
        let labels: Vec<f64> = (0..40).map(|i| if i < 20 { 1.0 } else { -1.0 }).collect();
        let t = thresholds(&Dataset::from_rows(&rows, &labels).unwrap()).unwrap();
        assert!((t.c_small - 0.025).abs() < 1e-12);

        let sq = Dataset::from_rows(&[vec![0.0, 0.0], vec![2.0, 0.0], vec![0.0, 2.0]], &[-1.0, 1.0, 1.0]).unwrap();
        assert!((thresholds(&sq).unwrap().c_large.unwrap() - 1.0).abs() < 1e-7);
    }

    #[test]
    fn non_separable_has_no_c_large() {
        let d = Dataset::from_rows(&[vec![0.0], vec![2.0], vec![1.0]], &[1.0, 1.0, -1.0]).unwrap();
        let t = thresholds(&d).unwrap();
        assert!(!t.separable);
        assert!(t.c_large.is_none());
    }

    #[test]
    fn two_point_soft_equals_hard_above_c_large() {
        let d = two_point();
        let s = soft_margin_svm(&d, 1.0, &SvmOptions::default()).unwrap();
        assert!(check_hard_margin_equiv(&d, &s, 1e-12).unwrap());
        assert!(!check_margin_bounce(&d, &s));
    }

    #[test]
    fn three_point_is_full_mdp() {
        let d = Dataset::from_rows(&[vec![0.0, 0.0], vec![2.0, 0.0], vec![0.0, 2.0]], &[-1.0, 1.0, 1.0]).unwrap();
        let h = hard_margin_svm(&d, &SvmOptions::default()).unwrap();
        assert!(matches!(
            check_mdp_equiv(&d, &h, 1e-6).unwrap(),
            MdpEquivalence::FullMDP { .. }
        ));
    }

    #[test]
    fn support_count_skips_duplicates() {
        let d = Dataset::from_rows(&[vec![1.0, 0.0], vec![1.0, 0.0], vec![-1.0, 0.0]], &[1.0, 1.0, -1.0]).unwrap();
        let s = soft_margin_svm(&d, 1.0, &SvmOptions::default()).unwrap();
        let r = support_count_check(&d, &s);
        assert!(r.skipped.is_some());
    }

    #[test]
    fn large_c_is_not_small_c_regime() {
        let d = Dataset::from_rows(&[vec![0.0, 0.0], vec![2.0, 0.0], vec![0.0, 2.0]], &[-1.0, 1.0, 1.0]).unwrap();
        let s = soft_margin_svm(&d, 10.0, &SvmOptions::default()).unwrap();
        assert_eq!(check_small_c_regime(&d, &s, 1e-4).unwrap(), SmallCRegime::NotInRegime);
        let h = hard_margin_svm(&d, &SvmOptions::default()).unwrap();
        let r = regime_report(&d, &s, Some(&h)).unwrap();
        assert_eq!(r.regime, Regime::HardMarginEquiv);
    }
}
