//! KKT verification for fitted SVMs and the margin/slack vector taxonomy.
//!
//! Violations are measured in the units of the decision function
//! `y_i f(x_i)`, except the dual-side conditions, which are measured in
//! units of α relative to C (or to max α for hard margin).

use serde::{Deserialize, Serialize};

use crate::classifiers::SoftMarginSolution;
use crate::data::{Dataset, Label};

/// Worst violation of each optimality condition.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct KktReport {
    /// ‖w − Σ α_i y_i x_i‖∞.
    pub w_expansion: f64,
    /// |Σ_{I+} α − Σ_{I−} α| / scale.
    pub weight_balance: f64,
    /// max(−α_i, α_i − C) / scale.
    pub box_constraint: f64,
    /// max(0, 1 − ξ_i − y_i f(x_i)) and max(0, −ξ_i).
    pub slack_consistency: f64,
    /// min(α_i / scale, |y_i f(x_i) − 1 + ξ_i|).
    pub complementary_slackness: f64,
    /// min(ξ_i, 1 − α_i/C); zero for hard margin.
    pub slack_weight: f64,
    /// Class balance written over the margin/slack partition, divided by scale.
    pub class_balance: f64,
}

impl KktReport {
    pub fn max_violation(&self) -> f64 {
        [
            self.w_expansion,
            self.weight_balance,
            self.box_constraint,
            self.slack_consistency,
            self.complementary_slackness,
            self.slack_weight,
            self.class_balance,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }

    pub fn passes(&self, tol: f64) -> bool {
        self.max_violation() <= tol
    }
}

fn alpha_scale(sol: &SoftMarginSolution) -> f64 {
    if sol.cost.is_finite() {
        sol.cost
    } else {
        sol.alpha.amax().max(f64::MIN_POSITIVE)
    }
}

fn common(data: &Dataset, sol: &SoftMarginSolution, cost: f64) -> KktReport {
    let n = data.len();
    let y = data.y_vector();
    let expansion = data.points().transpose() * sol.alpha.component_mul(&y);
    let w_expansion = (&sol.model.w - expansion).amax();
    let scale = alpha_scale(sol);
    let weight_balance = sol.alpha.dot(&y).abs() / scale;
    let f = data.points() * &sol.model.w;
    let mut r = KktReport {
        w_expansion,
        weight_balance,
        ..KktReport::default()
    };
    for i in 0..n {
        let a = sol.alpha[i];
        let xi = sol.xi[i];
        let margin = y[i] * (f[i] + sol.model.b);
        r.box_constraint = r.box_constraint.max(-a / scale).max((a - cost) / scale);
        r.slack_consistency = r.slack_consistency.max(1.0 - xi - margin).max(-xi);
        let cs = (a.max(0.0) / scale).min((margin - 1.0 + xi).abs());
        r.complementary_slackness = r.complementary_slackness.max(cs);
    }
    r
}

/// Checks the hard-margin optimality system. Never fails; a violated
/// condition shows up as a large entry in the report.
pub fn verify_kkt_hard(data: &Dataset, sol: &SoftMarginSolution) -> KktReport {
    let mut r = common(data, sol, f64::INFINITY);
    // Hard margin has no slack: any positive ξ is a primal violation.
    r.slack_consistency = r.slack_consistency.max(sol.xi.amax());
    r
}

/// Checks the soft-margin optimality system at cost `c`, with μ_i = C − α_i.
pub fn verify_kkt_soft(data: &Dataset, sol: &SoftMarginSolution, c: f64) -> KktReport {
    let mut r = common(data, sol, c);
    for i in 0..data.len() {
        let xi = sol.xi[i].max(0.0);
        let mu = 1.0 - sol.alpha[i] / c;
        r.slack_weight = r.slack_weight.max(xi.min(mu.abs()));
    }
    // ξ below the solver's accuracy is treated as zero.
    let cls = classify_support_vectors(sol, data, 1e-6);
    let side = |margin: &[usize], slack: &[usize]| -> f64 {
        c * slack.len() as f64 + margin.iter().map(|&i| sol.alpha[i]).sum::<f64>()
    };
    r.class_balance = (side(&cls.margin_plus, &cls.slack_plus) - side(&cls.margin_minus, &cls.slack_minus)).abs() / c;
    r
}

/// Checks whichever system matches the solution's cost parameter.
pub fn verify_kkt(data: &Dataset, sol: &SoftMarginSolution) -> KktReport {
    if sol.is_hard_margin() {
        verify_kkt_hard(data, sol)
    } else {
        verify_kkt_soft(data, sol, sol.cost)
    }
}

/// Partition of the training indices into margin vectors M±, slack
/// vectors L± and non-support points.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SupportClassification {
    pub margin_plus: Vec<usize>,
    pub margin_minus: Vec<usize>,
    pub slack_plus: Vec<usize>,
    pub slack_minus: Vec<usize>,
    pub non_support: Vec<usize>,
}

impl SupportClassification {
    pub fn margin(&self, label: Label) -> &[usize] {
        match label {
            Label::Positive => &self.margin_plus,
            Label::Negative => &self.margin_minus,
        }
    }

    pub fn slack(&self, label: Label) -> &[usize] {
        match label {
            Label::Positive => &self.slack_plus,
            Label::Negative => &self.slack_minus,
        }
    }

    pub fn support_count(&self, label: Label) -> usize {
        self.margin(label).len() + self.slack(label).len()
    }

    pub fn support(&self) -> Vec<usize> {
        let mut s: Vec<usize> = self
            .margin_plus
            .iter()
            .chain(&self.margin_minus)
            .chain(&self.slack_plus)
            .chain(&self.slack_minus)
            .copied()
            .collect();
        s.sort_unstable();
        s
    }

    pub fn slack_count(&self) -> usize {
        self.slack_plus.len() + self.slack_minus.len()
    }
}

/// Splits points into margin, slack and non-support sets. α counts as
/// positive above 1e-8·C (1e-8·max α for hard margin); ξ counts as positive
/// above `tol`.
pub fn classify_support_vectors(sol: &SoftMarginSolution, data: &Dataset, tol: f64) -> SupportClassification {
    let active = sol.support_threshold();
    let mut out = SupportClassification::default();
    for i in 0..data.len() {
        let plus = data.label(i) == Label::Positive;
        if sol.alpha[i] <= active {
            out.non_support.push(i);
        } else if sol.xi[i] > tol {
            if plus {
                &mut out.slack_plus
            } else {
                &mut out.slack_minus
            }
            .push(i);
        } else if plus {
            out.margin_plus.push(i);
        } else {
            out.margin_minus.push(i);
        }
    }
    out
}
