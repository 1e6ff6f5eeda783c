//! Two-class geometry: diameter, gap between convex hulls, complete data
//! piling, convex directions, and the affine-piling direction.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::data::{Dataset, Label};
use crate::error::{Error, Result};
use crate::linalg;
use crate::serde_vec;
use crate::simplex::{self, LpOutcome, SimplexOptions, StandardLp};

/// Certifies complete data piling along `v`: `v·x_i + b = a·y_i` for every i.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PilingCertificate {
    /// Unit-norm piling direction, oriented so that `a > 0`.
    #[serde(with = "serde_vec")]
    pub v: DVector<f64>,
    /// Intercept placing the hyperplane midway between the two piles.
    pub b: f64,
    /// Half the distance between the projected classes.
    pub a: f64,
}

impl PilingCertificate {
    /// Largest |v·x_i + b − a·y_i| over the dataset.
    pub fn max_residual(&self, data: &Dataset) -> f64 {
        (0..data.len())
            .map(|i| (data.point(i).dot(&self.v) + self.b - self.a * data.y(i)).abs())
            .fold(0.0, f64::max)
    }
}

/// Convex weights over each class and the hull points they produce.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HullWitness {
    /// Weights over the positive indices, in dataset order.
    pub lambda_plus: Vec<f64>,
    /// Weights over the negative indices, in dataset order.
    pub lambda_minus: Vec<f64>,
    #[serde(with = "serde_vec")]
    pub c_plus: DVector<f64>,
    #[serde(with = "serde_vec")]
    pub c_minus: DVector<f64>,
}

impl HullWitness {
    fn from_weights(data: &Dataset, lambda_plus: Vec<f64>, lambda_minus: Vec<f64>) -> Self {
        let c_plus = combine(data, &data.indices_of(Label::Positive), &lambda_plus);
        let c_minus = combine(data, &data.indices_of(Label::Negative), &lambda_minus);
        HullWitness {
            lambda_plus,
            lambda_minus,
            c_plus,
            c_minus,
        }
    }

    /// c+ − c−.
    pub fn direction(&self) -> DVector<f64> {
        &self.c_plus - &self.c_minus
    }

    /// Largest violation of: weights ≥ 0, each class summing to 1, and c±
    /// reproducing the weighted sums (relative to the data scale).
    pub fn max_violation(&self, data: &Dataset) -> f64 {
        let neg = self
            .lambda_plus
            .iter()
            .chain(&self.lambda_minus)
            .map(|&l| (-l).max(0.0))
            .fold(0.0, f64::max);
        let sum_p = (self.lambda_plus.iter().sum::<f64>() - 1.0).abs();
        let sum_m = (self.lambda_minus.iter().sum::<f64>() - 1.0).abs();
        let cp = combine(data, &data.indices_of(Label::Positive), &self.lambda_plus);
        let cm = combine(data, &data.indices_of(Label::Negative), &self.lambda_minus);
        let scale = data.scale();
        let rec = ((&cp - &self.c_plus).norm() / scale).max((&cm - &self.c_minus).norm() / scale);
        neg.max(sum_p).max(sum_m).max(rec)
    }
}

fn combine(data: &Dataset, idx: &[usize], weights: &[f64]) -> DVector<f64> {
    let mut out = DVector::zeros(data.dim());
    for (&i, &w) in idx.iter().zip(weights) {
        out += data.point(i) * w;
    }
    out
}

/// Largest distance between a positive and a negative point (exhaustive).
pub fn diameter(data: &Dataset) -> f64 {
    let pos = data.indices_of(Label::Positive);
    let neg = data.indices_of(Label::Negative);
    let x = data.points();
    let mut best = 0.0_f64;
    for &i in &pos {
        for &j in &neg {
            let d2 = (x.row(i) - x.row(j)).norm_squared();
            best = best.max(d2);
        }
    }
    best.sqrt()
}

#[derive(Debug, Clone, Copy)]
pub struct GapOptions {
    /// Absolute bracket width at which to stop; `None` means 1e-8·diameter.
    pub tol: Option<f64>,
    pub max_iter: usize,
}

impl Default for GapOptions {
    fn default() -> Self {
        GapOptions {
            tol: None,
            max_iter: 1_000_000,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GapResult {
    /// Distance between the hulls; 0 when they intersect (within tolerance).
    pub gap: f64,
    /// Certified lower bound (may be ≤ 0 when the hulls meet).
    pub lower: f64,
    /// Distance between the witness points.
    pub upper: f64,
    /// True when a strictly separating direction was certified.
    pub separable: bool,
    pub witness: HullWitness,
    pub iterations: usize,
}

/// Minimum distance between the two class hulls by pairwise Frank–Wolfe
/// (move weight from the worst active vertex to the best vertex within one
/// class, exact line search).
///
/// The iteration keeps a bracket `[lower, upper]` on the gap: `upper` is
/// ‖c+ − c−‖ for the current weights, `lower` is the separation of the two
/// classes along z = c+ − c−. It stops when the bracket is narrower than
/// the tolerance, or when `upper` itself is below it. If the iteration
/// budget runs out with no separating direction found, the intersection LP
/// decides whether the hulls meet.
pub fn gap(data: &Dataset, opts: &GapOptions) -> Result<GapResult> {
    let tol = opts.tol.unwrap_or_else(|| 1e-8 * diameter(data).max(f64::MIN_POSITIVE));
    let pos = data.indices_of(Label::Positive);
    let neg = data.indices_of(Label::Negative);
    let gram = data.gram();
    let n = data.len();

    // Signed weights: +λ on positives, −λ on negatives, so z = Σ w_i x_i.
    let mut lam = vec![0.0; n];
    for &i in &pos {
        lam[i] = 1.0 / pos.len() as f64;
    }
    for &j in &neg {
        lam[j] = 1.0 / neg.len() as f64;
    }
    let signed = |lam: &[f64]| -> DVector<f64> { DVector::from_iterator(n, (0..n).map(|i| data.y(i) * lam[i])) };
    // proj_i = x_i·z, maintained through the Gram matrix.
    let mut proj = &gram * signed(&lam);
    let mut iterations = 0usize;

    loop {
        let zz = signed(&lam).dot(&proj).max(0.0);
        let upper = zz.sqrt();

        let (s_p, min_p) = argbest(&pos, |i| proj[i], |a, b| a < b);
        let (a_p, _) = argbest(
            &pos.iter().copied().filter(|&i| lam[i] > 0.0).collect::<Vec<_>>(),
            |i| proj[i],
            |a, b| a > b,
        );
        let (s_m, max_m) = argbest(&neg, |j| proj[j], |a, b| a > b);
        let (a_m, _) = argbest(
            &neg.iter().copied().filter(|&j| lam[j] > 0.0).collect::<Vec<_>>(),
            |j| proj[j],
            |a, b| a < b,
        );
        let lower = if upper > 0.0 { (min_p - max_m) / upper } else { 0.0 };

        let delta_p = proj[a_p] - proj[s_p];
        let delta_m = proj[s_m] - proj[a_m];
        let converged = upper <= tol || upper - lower <= tol || (delta_p <= 0.0 && delta_m <= 0.0);
        if converged {
            // Report the bracket from the witness itself; the running
            // values carry rounding from the incremental updates.
            let witness = HullWitness::from_weights(
                data,
                pos.iter().map(|&i| lam[i]).collect(),
                neg.iter().map(|&j| lam[j]).collect(),
            );
            let z = witness.direction();
            let upper = z.norm();
            let p = data.points() * &z;
            let lower = if upper > 0.0 {
                let min_p = pos.iter().map(|&i| p[i]).fold(f64::INFINITY, f64::min);
                let max_m = neg.iter().map(|&j| p[j]).fold(f64::NEG_INFINITY, f64::max);
                (min_p - max_m) / upper
            } else {
                0.0
            };
            let separable = lower > 0.0 && upper > tol;
            return Ok(GapResult {
                gap: if separable { upper } else { 0.0 },
                lower,
                upper,
                separable,
                witness,
                iterations,
            });
        }
        if iterations >= opts.max_iter {
            // Near-touching hulls stall the iteration just above zero; settle
            // that case exactly with the intersection LP.
            if lower <= 0.0 && hulls_intersect(data, 1e-9 * diameter(data).max(1.0))? {
                let witness = HullWitness::from_weights(
                    data,
                    pos.iter().map(|&i| lam[i]).collect(),
                    neg.iter().map(|&j| lam[j]).collect(),
                );
                return Ok(GapResult {
                    gap: 0.0,
                    lower,
                    upper,
                    separable: false,
                    witness,
                    iterations,
                });
            }
            return Err(Error::GapNoConvergence {
                iterations,
                lower: lower.max(0.0),
                upper,
            });
        }

        // Transfer weight from vertex `from` to vertex `to` of one class.
        let (from, to, delta) = if delta_p >= delta_m {
            (a_p, s_p, delta_p)
        } else {
            (a_m, s_m, delta_m)
        };
        let curvature = gram[(to, to)] + gram[(from, from)] - 2.0 * gram[(to, from)];
        let step = if curvature > 0.0 {
            (delta / curvature).min(lam[from])
        } else {
            lam[from]
        };
        if step == lam[from] {
            lam[to] += lam[from];
            lam[from] = 0.0;
        } else {
            lam[from] -= step;
            lam[to] += step;
        }
        let sign = data.y(to);
        for k in 0..n {
            proj[k] += sign * step * (gram[(k, to)] - gram[(k, from)]);
        }
        iterations += 1;
        if iterations.is_multiple_of(1000) {
            affine_correction(&gram, data, &mut lam);
        }
        if iterations.is_multiple_of(500) {
            proj = &gram * signed(&lam);
        }
    }
}

/// Moves the weights toward the nearest point of the affine hulls spanned by
/// the active vertices, dropping a vertex whenever its weight reaches zero.
/// The distance never increases.
fn affine_correction(gram: &DMatrix<f64>, data: &Dataset, lam: &mut [f64]) {
    let n = lam.len();
    let objective = |lam: &[f64]| -> f64 {
        let v = DVector::from_iterator(n, (0..n).map(|i| data.y(i) * lam[i]));
        v.dot(&(gram * &v))
    };
    let start = lam.to_vec();
    let before = objective(lam);
    for _ in 0..n {
        let active: Vec<usize> = (0..n).filter(|&i| lam[i] > 0.0).collect();
        let k = active.len();
        // Stationarity Q_AA β + μ+ 1+ + μ− 1− = 0 with one weight sum per class.
        let mut sys = DMatrix::zeros(k + 2, k + 2);
        let mut rhs = DVector::zeros(k + 2);
        for (r, &i) in active.iter().enumerate() {
            for (c, &j) in active.iter().enumerate() {
                sys[(r, c)] = data.y(i) * data.y(j) * gram[(i, j)];
            }
            let row = if data.y(i) > 0.0 { k } else { k + 1 };
            sys[(r, row)] = 1.0;
            sys[(row, r)] = 1.0;
        }
        rhs[k] = 1.0;
        rhs[k + 1] = 1.0;
        let sol = linalg::pinv(&sys, 1e-13) * &rhs;
        if sol.iter().any(|v| !v.is_finite()) || (&sys * &sol - &rhs).amax() > 1e-9 * (1.0 + sys.amax() * sol.amax()) {
            break;
        }
        let mut theta = 1.0;
        let mut blocking = None;
        for (r, &i) in active.iter().enumerate() {
            if sol[r] < 0.0 {
                let t = lam[i] / (lam[i] - sol[r]);
                if t < theta {
                    theta = t;
                    blocking = Some(i);
                }
            }
        }
        for (r, &i) in active.iter().enumerate() {
            lam[i] += theta * (sol[r] - lam[i]);
            lam[i] = lam[i].max(0.0);
        }
        match blocking {
            Some(i) => lam[i] = 0.0,
            None => break,
        }
    }
    if objective(lam) > before {
        lam.copy_from_slice(&start);
    }
}

fn argbest(idx: &[usize], value: impl Fn(usize) -> f64, better: impl Fn(f64, f64) -> bool) -> (usize, f64) {
    let mut best = idx[0];
    let mut best_v = value(best);
    for &i in &idx[1..] {
        let v = value(i);
        if better(v, best_v) {
            best = i;
            best_v = v;
        }
    }
    (best, best_v)
}

/// Σ̂⁻(x̄+ − x̄−) with the global covariance Σ̂ (divisor n−1).
pub fn mdp_direction(data: &Dataset, rank_tol: f64) -> Result<DVector<f64>> {
    let diff = data.class_mean(Label::Positive) - data.class_mean(Label::Negative);
    if diff.norm() <= crate::data::zero_direction_tol(data.scale()) {
        return Err(Error::DegenerateDirection("class means coincide".into()));
    }
    let w = linalg::pinv(&linalg::global_covariance(data), rank_tol) * diff;
    if w.norm() <= crate::data::zero_direction_tol(data.scale()) {
        return Err(Error::DegenerateDirection(
            "mean difference lies in the covariance null space".into(),
        ));
    }
    Ok(w)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub enum AffinePiling {
    Piling {
        certificate: PilingCertificate,
        /// Solution of X v + b·1 = y with v in the affine span of the data.
        #[serde(with = "serde_vec")]
        raw_v: DVector<f64>,
        raw_b: f64,
    },
    /// The centered data matrix has rank below n − 1.
    NoPiling { rank: usize, required: usize },
}

impl AffinePiling {
    pub fn certificate(&self) -> Option<&PilingCertificate> {
        match self {
            AffinePiling::Piling { certificate, .. } => Some(certificate),
            AffinePiling::NoPiling { .. } => None,
        }
    }
}

/// The unique complete-data-piling direction lying in the affine hull of
/// the data, when the data are affinely independent (requires d ≥ n − 1).
///
/// Subtracting the mean equation from `X v + b·1 = y` leaves
/// `(X − 1x̄ᵀ) v = y − ȳ1`; the minimum-norm solution lies in the row space
/// of the centered data, i.e. in the directions of the affine hull.
pub fn solve_affine_piling(data: &Dataset, rank_tol: f64) -> Result<AffinePiling> {
    let n = data.len();
    let mean = data.mean();
    let xc = linalg::centered(data.points(), &mean);
    let r = linalg::rank(&xc, rank_tol);
    if r < n - 1 {
        return Ok(AffinePiling::NoPiling {
            rank: r,
            required: n - 1,
        });
    }
    let y = data.y_vector();
    let ybar = y.mean();
    let yc = y.map(|v| v - ybar);
    let raw_v = linalg::pinv(&xc, rank_tol) * yc;
    let raw_b = ybar - mean.dot(&raw_v);
    let norm = raw_v.norm();
    if norm <= crate::data::zero_direction_tol(data.scale()) {
        return Ok(AffinePiling::NoPiling {
            rank: r,
            required: n - 1,
        });
    }
    Ok(AffinePiling::Piling {
        certificate: PilingCertificate {
            v: &raw_v / norm,
            b: raw_b / norm,
            a: 1.0 / norm,
        },
        raw_v,
        raw_b,
    })
}

/// Least-squares fit of `v·x_i + b ≈ a·y_i`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct PilingFit {
    pub piled: bool,
    pub a: f64,
    pub b: f64,
    pub max_residual: f64,
}

/// Whether `v` piles each class onto a single projected value.
///
/// Residuals and `a` are compared against `tol·‖v‖·scale`, where scale is
/// the largest point norm (at least 1).
pub fn has_complete_piling(data: &Dataset, v: &DVector<f64>, tol: f64) -> Result<PilingFit> {
    if v.len() != data.dim() {
        return Err(Error::DimensionMismatch {
            expected: data.dim(),
            got: v.len(),
        });
    }
    if v.norm() == 0.0 {
        return Err(Error::InvalidDirection("zero vector".into()));
    }
    let proj = data.points() * v;
    let mean_of = |label: Label| {
        let idx = data.indices_of(label);
        idx.iter().map(|&i| proj[i]).sum::<f64>() / idx.len() as f64
    };
    let (pp, pm) = (mean_of(Label::Positive), mean_of(Label::Negative));
    let a = 0.5 * (pp - pm);
    let mid = 0.5 * (pp + pm);
    let max_residual = (0..data.len())
        .map(|i| (proj[i] - mid - a * data.y(i)).abs())
        .fold(0.0, f64::max);
    let thresh = tol * v.norm() * data.scale();
    Ok(PilingFit {
        piled: max_residual <= thresh && a.abs() > thresh,
        a,
        b: -mid,
        max_residual,
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConvexDirection {
    pub is_convex: bool,
    /// +1 if `v ∝ c+ − c−` with a positive factor, −1 if negative.
    pub orientation: Option<i8>,
    pub witness: Option<HullWitness>,
}

/// Decides whether `v` (or −v) is a positive multiple of c+ − c− for some
/// hull points c±, by LP feasibility of
///
/// ```text
/// Σ_{I+} μ_i x_i − Σ_{I−} μ_j x_j = ±v,   Σ_{I+} μ_i = Σ_{I−} μ_j,   μ ≥ 0.
/// ```
pub fn is_convex_direction(data: &Dataset, v: &DVector<f64>, tol: f64) -> Result<ConvexDirection> {
    if v.len() != data.dim() {
        return Err(Error::DimensionMismatch {
            expected: data.dim(),
            got: v.len(),
        });
    }
    if v.norm() == 0.0 {
        return Err(Error::InvalidDirection("zero vector".into()));
    }
    let pos = data.indices_of(Label::Positive);
    let neg = data.indices_of(Label::Negative);
    let (np, nm, d) = (pos.len(), neg.len(), data.dim());
    let unit = v / v.norm() * data.scale();
    let opts = SimplexOptions {
        feasibility_tol: tol,
        ..SimplexOptions::default()
    };
    for orientation in [1i8, -1] {
        let mut a = DMatrix::zeros(d + 1, np + nm);
        for (col, &i) in pos.iter().enumerate() {
            for k in 0..d {
                a[(k, col)] = data.points()[(i, k)];
            }
            a[(d, col)] = 1.0;
        }
        for (col, &j) in neg.iter().enumerate() {
            for k in 0..d {
                a[(k, np + col)] = -data.points()[(j, k)];
            }
            a[(d, np + col)] = -1.0;
        }
        let mut b = DVector::zeros(d + 1);
        for k in 0..d {
            b[k] = f64::from(orientation) * unit[k];
        }
        let lp = StandardLp {
            a,
            b,
            c: DVector::zeros(np + nm),
        };
        if let LpOutcome::Optimal { x, .. } = simplex::solve(&lp, &opts)? {
            let total: f64 = x.rows(0, np).sum();
            if total <= 0.0 {
                continue;
            }
            let lp_ = x.rows(0, np).iter().map(|w| w / total).collect();
            let total_m: f64 = x.rows(np, nm).sum();
            let lm = x.rows(np, nm).iter().map(|w| w / total_m).collect();
            return Ok(ConvexDirection {
                is_convex: true,
                orientation: Some(orientation),
                witness: Some(HullWitness::from_weights(data, lp_, lm)),
            });
        }
    }
    Ok(ConvexDirection {
        is_convex: false,
        orientation: None,
        witness: None,
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub enum CpIntersection {
    /// `v` is both a convex direction and a complete-data-piling direction.
    Feasible {
        #[serde(with = "serde_vec")]
        v: DVector<f64>,
        /// Intercept with `X v + b·1 = y`.
        b: f64,
        witness: HullWitness,
    },
    Infeasible {
        residual: f64,
    },
}

impl CpIntersection {
    pub fn is_feasible(&self) -> bool {
        matches!(self, CpIntersection::Feasible { .. })
    }
}

/// Feasibility LP for a direction that is simultaneously convex and
/// completely piling:
///
/// ```text
/// X v + b·1 = y,   v = Σ_{I+} α_i x_i − Σ_{I−} β_j x_j,
/// Σ α = Σ β,   α, β ≥ 0.
/// ```
///
/// The class weights are tied to each other but not normalized to one,
/// since `X v + b·1 = y` already fixes the scale of v (half-distance a = 1).
/// Substituting v leaves a program over (α, β, b) in inner products only.
pub fn cp_intersection_lp(data: &Dataset) -> Result<CpIntersection> {
    cp_intersection_lp_with(data, &SimplexOptions::default())
}

pub fn cp_intersection_lp_with(data: &Dataset, opts: &SimplexOptions) -> Result<CpIntersection> {
    let pos = data.indices_of(Label::Positive);
    let neg = data.indices_of(Label::Negative);
    let (np, nm, n) = (pos.len(), neg.len(), data.len());
    let gram = data.gram();
    // Columns: α (np), β (nm), b⁺, b⁻.
    let cols = np + nm + 2;
    let mut a = DMatrix::zeros(n + 1, cols);
    let mut rhs = DVector::zeros(n + 1);
    for i in 0..n {
        for (c, &j) in pos.iter().enumerate() {
            a[(i, c)] = gram[(i, j)];
        }
        for (c, &j) in neg.iter().enumerate() {
            a[(i, np + c)] = -gram[(i, j)];
        }
        a[(i, np + nm)] = 1.0;
        a[(i, np + nm + 1)] = -1.0;
        rhs[i] = data.y(i);
    }
    for c in 0..np {
        a[(n, c)] = 1.0;
    }
    for c in 0..nm {
        a[(n, np + c)] = -1.0;
    }
    let lp = StandardLp {
        a,
        b: rhs,
        c: DVector::zeros(cols),
    };
    match simplex::solve(&lp, opts)? {
        LpOutcome::Infeasible { residual } => Ok(CpIntersection::Infeasible { residual }),
        LpOutcome::Unbounded => Err(Error::LinearProgram("feasibility program reported unbounded".into())),
        LpOutcome::Optimal { x, .. } => {
            let alpha: Vec<f64> = x.rows(0, np).iter().copied().collect();
            let beta: Vec<f64> = x.rows(np, nm).iter().copied().collect();
            let total: f64 = alpha.iter().sum();
            if total <= 0.0 {
                return Ok(CpIntersection::Infeasible { residual: 0.0 });
            }
            let v = combine(data, &pos, &alpha) - combine(data, &neg, &beta);
            let b = x[np + nm] - x[np + nm + 1];
            let total_m: f64 = beta.iter().sum();
            let witness = HullWitness::from_weights(
                data,
                alpha.iter().map(|w| w / total).collect(),
                beta.iter().map(|w| w / total_m).collect(),
            );
            Ok(CpIntersection::Feasible { v, b, witness })
        }
    }
}

/// Whether the two class hulls share a point (LP feasibility of
/// Σλ+x = Σλ−x with both weight vectors on the simplex).
pub fn hulls_intersect(data: &Dataset, feasibility_tol: f64) -> Result<bool> {
    let pos = data.indices_of(Label::Positive);
    let neg = data.indices_of(Label::Negative);
    let (np, nm, d) = (pos.len(), neg.len(), data.dim());
    let mut a = DMatrix::zeros(d + 2, np + nm);
    for (c, &i) in pos.iter().enumerate() {
        for k in 0..d {
            a[(k, c)] = data.points()[(i, k)];
        }
        a[(d, c)] = 1.0;
    }
    for (c, &j) in neg.iter().enumerate() {
        for k in 0..d {
            a[(k, np + c)] = -data.points()[(j, k)];
        }
        a[(d + 1, np + c)] = 1.0;
    }
    let mut b = DVector::zeros(d + 2);
    b[d] = 1.0;
    b[d + 1] = 1.0;
    let lp = StandardLp {
        a,
        b,
        c: DVector::zeros(np + nm),
    };
    let opts = SimplexOptions {
        feasibility_tol,
        ..SimplexOptions::default()
    };
    Ok(simplex::solve(&lp, &opts)?.is_feasible())
}

/// Whether w = 0 solves the soft-margin problem for every C. This holds
/// when the smaller class's point sum is Σ α_i x_i over the larger class
/// with 0 ≤ α_i ≤ 1 and Σ α_i = n_s (the larger class's reduced hull
/// contains the smaller class's mean). The dual then attains its ceiling
/// 2·n_s·C, and its optimum is a face rather than a point.
pub fn zero_direction_optimal(data: &Dataset) -> Result<bool> {
    let larger = data.larger_class();
    let big = data.indices_of(larger);
    let small = data.indices_of(larger.flipped());
    let (m, d) = (big.len(), data.dim());
    // Variables (α, s) with α + s = 1.
    let mut a = DMatrix::zeros(d + 1 + m, 2 * m);
    let mut b = DVector::zeros(d + 1 + m);
    for (c, &i) in big.iter().enumerate() {
        for k in 0..d {
            a[(k, c)] = data.points()[(i, k)];
        }
        a[(d, c)] = 1.0;
        a[(d + 1 + c, c)] = 1.0;
        a[(d + 1 + c, m + c)] = 1.0;
        b[d + 1 + c] = 1.0;
    }
    for &j in &small {
        for k in 0..d {
            b[k] += data.points()[(j, k)];
        }
    }
    b[d] = small.len() as f64;
    let lp = StandardLp {
        a,
        b,
        c: DVector::zeros(2 * m),
    };
    Ok(simplex::solve(&lp, &SimplexOptions::default())?.is_feasible())
}
