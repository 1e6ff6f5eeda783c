//! Runs every executable regime check on one dataset.

use serde::{Deserialize, Serialize};

use crate::classifiers::{self, SoftMarginSolution, SvmOptions};
use crate::data::{direction_angle, Dataset};
use crate::error::Result;
use crate::geometry::{self, GapOptions};
use crate::kkt;
use crate::linalg::DEFAULT_RANK_TOL;
use crate::regimes::{self, MdpEquivalence, RegimeThresholds, SmallCRegime};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub name: String,
    pub status: Status,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub n_plus: usize,
    pub n_minus: usize,
    pub d: usize,
    pub thresholds: RegimeThresholds,
    pub checks: Vec<CheckOutcome>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }
}

struct Checks(Vec<CheckOutcome>);

impl Checks {
    fn push(&mut self, name: &str, ok: bool, detail: String) {
        let status = if ok { Status::Pass } else { Status::Fail };
        self.0.push(CheckOutcome {
            name: name.into(),
            status,
            detail,
        });
    }

    fn skip(&mut self, name: &str, detail: impl Into<String>) {
        self.0.push(CheckOutcome {
            name: name.into(),
            status: Status::Skipped,
            detail: detail.into(),
        });
    }

    fn error(&mut self, name: &str, e: impl std::fmt::Display) {
        self.push(name, false, format!("error: {e}"));
    }
}

fn norm_bounds(checks: &mut Checks, data: &Dataset, t: &RegimeThresholds, sol: &SoftMarginSolution, tag: &str) {
    let c = sol.cost;
    let larger = data.n_plus().max(data.n_minus()) as f64;
    let w = sol.model.w.norm();
    let upper = larger * c * t.diameter;
    let mut ok = w <= upper * (1.0 + 1e-9);
    let mut detail = format!("|w| = {w:.6e}, n_l C D = {upper:.6e}");
    let cls = kkt::classify_support_vectors(sol, data, 1e-8);
    if cls.slack_count() > 0 {
        let lower = c * t.gap;
        ok &= w >= lower * (1.0 - 1e-6);
        detail.push_str(&format!(", C G = {lower:.6e}"));
    }
    checks.push(&format!("norm bounds at {tag}"), ok, detail);
}

/// Fits at 0.9·C_small, 0.4·C_small, 2·C_large and hard margin, and checks
/// each regime characterization that applies to the data.
pub fn verify_dataset(data: &Dataset) -> Result<VerifyReport> {
    let svm = SvmOptions::default();
    let gap_opts = GapOptions {
        tol: Some(1e-10 * geometry::diameter(data)),
        ..GapOptions::default()
    };
    let t = regimes::thresholds_with(data, &gap_opts)?;
    let mut checks = Checks(Vec::new());
    let n = data.len();

    let small = classifiers::soft_margin_svm(data, 0.9 * t.c_small, &svm);
    let bounce = classifiers::soft_margin_svm(data, 0.4 * t.c_small, &svm);
    let hard = if t.separable {
        Some(classifiers::hard_margin_svm(data, &svm))
    } else {
        None
    };
    let large = t.c_large.map(|cl| classifiers::soft_margin_svm(data, 2.0 * cl, &svm));

    let fits: Vec<(&str, &Result<SoftMarginSolution>)> = [
        Some(("0.9 C_small", &small)),
        Some(("0.4 C_small", &bounce)),
        large.as_ref().map(|l| ("2 C_large", l)),
        hard.as_ref().map(|h| ("hard margin", h)),
    ]
    .into_iter()
    .flatten()
    .collect();
    for (tag, fit) in &fits {
        match fit {
            Ok(sol) => {
                let v = kkt::verify_kkt(data, sol).max_violation();
                checks.push(&format!("KKT at {tag}"), v <= 1e-6, format!("max violation {v:.3e}"));
                if !sol.is_hard_margin() {
                    norm_bounds(&mut checks, data, &t, sol, tag);
                }
            }
            Err(e) => checks.error(&format!("fit at {tag}"), e),
        }
    }

    match &small {
        Ok(sol) => match regimes::check_small_c_regime(data, sol, 1e-4)? {
            SmallCRegime::ExactMD { angle_to_md } => {
                let all_c = sol.alpha.iter().all(|&a| (a - sol.cost).abs() <= 1e-8 * sol.cost);
                checks.push("small C", all_c, format!("exact MD, angle {angle_to_md:.3e}"))
            }
            SmallCRegime::CroppedMD(m) => {
                let ok = !data.is_balanced()
                    && m.constraint_residual <= 1e-6 * sol.cost * n as f64
                    && m.decomposition_residual <= 1e-6 * sol.model.w.norm();
                checks.push(
                    "small C",
                    ok,
                    format!(
                        "cropped MD, constraint residual {:.3e}, decomposition residual {:.3e}",
                        m.constraint_residual, m.decomposition_residual
                    ),
                )
            }
            SmallCRegime::NotInRegime => checks.push("small C", false, "smaller class is not entirely slack".into()),
        },
        Err(e) => checks.error("small C", e),
    }

    match &bounce {
        Ok(sol) => {
            let b = regimes::check_margin_bounce(data, sol);
            if data.is_balanced() {
                checks.skip("margin bounce", format!("balanced classes; measured bounce = {b}"));
            } else {
                checks.push("margin bounce", b, format!("all predicted larger class: {b}"));
            }
        }
        Err(e) => checks.error("margin bounce", e),
    }

    match (&large, &hard) {
        (Some(Ok(l)), Some(Ok(h))) => {
            let cmp = regimes::compare_to_hard_margin(data, l, h)?;
            checks.push(
                "large C",
                cmp.angle <= 1e-4 && cmp.relative_w <= 1e-3,
                format!("angle {:.3e}, relative |dw| {:.3e}", cmp.angle, cmp.relative_w),
            );
        }
        _ => checks.skip("large C", "classes are not separable"),
    }

    if let Some(Ok(h)) = &hard {
        let two_rho = 2.0 * h.margin_width();
        let rel = (two_rho - t.gap).abs() / t.gap;
        checks.push(
            "hard margin width",
            rel <= 1e-6,
            format!("2 rho = {two_rho:.9e}, G = {:.9e}", t.gap),
        );

        match regimes::check_mdp_equiv(data, h, 1e-6)? {
            MdpEquivalence::FullMDP { angle } => checks.push("MDP", true, format!("full MDP, angle {angle:.3e}")),
            MdpEquivalence::CroppedMDP { support, angle } => checks.push(
                "MDP",
                true,
                format!("MDP of {} support vectors, angle {angle:.3e}", support.len()),
            ),
            MdpEquivalence::NotEquivalent {
                angle_full,
                angle_cropped,
            } => checks.push(
                "MDP",
                false,
                format!("angles full {angle_full:?}, support {angle_cropped:?}"),
            ),
            MdpEquivalence::NotApplicable { reason } => checks.skip("MDP", reason),
        }

        if data.dim() + 1 >= n {
            let lp = geometry::cp_intersection_lp(data)?;
            let piles = geometry::has_complete_piling(data, &h.model.w, 1e-6)?.piled;
            checks.push(
                "piling LP",
                lp.is_feasible() == piles,
                format!("LP feasible {}, hard margin piles {piles}", lp.is_feasible()),
            );
        } else {
            checks.skip("piling LP", "d < n - 1");
        }
    }

    if data.dim() + 1 >= n {
        match geometry::solve_affine_piling(data, DEFAULT_RANK_TOL)? {
            geometry::AffinePiling::Piling { certificate, .. } => {
                let mdp = geometry::mdp_direction(data, DEFAULT_RANK_TOL)?;
                let a = direction_angle(&certificate.v, &mdp)?;
                checks.push("affine piling", a <= 1e-6, format!("angle to MDP {a:.3e}"));
            }
            geometry::AffinePiling::NoPiling { rank, required } => {
                checks.skip("affine piling", format!("rank {rank} < {required}"))
            }
        }
    } else {
        checks.skip("affine piling", "d < n - 1");
    }

    for (tag, fit) in &fits {
        if let Ok(sol) = fit {
            let r = regimes::support_count_check(data, sol);
            let name = format!("support count at {tag}");
            let detail = format!(
                "{} larger-class support vectors, bound {} (loose {})",
                r.larger_class_support, r.bound, r.loose_bound
            );
            match r.skipped {
                Some(why) => checks.skip(&name, format!("{detail}; {why}")),
                None => checks.push(&name, r.holds, detail),
            }
        }
    }

    Ok(VerifyReport {
        n_plus: data.n_plus(),
        n_minus: data.n_minus(),
        d: data.dim(),
        thresholds: t,
        checks: checks.0,
    })
}
