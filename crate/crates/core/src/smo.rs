//! Pairwise coordinate solver for the linear SVM dual
//!
//! ```text
//! minimize ½ αᵀQα − 1ᵀα   s.t.  yᵀα = 0,  0 ≤ α_i ≤ C,
//! ```
//!
//! with Q_ij = y_i y_j ⟨x_i, x_j⟩. `C = +∞` gives the hard-margin dual.
//!
//! Each step moves weight between the pair that most violates the KKT
//! conditions (second-order choice of the partner), and iteration stops once
//! the maximal violation m(α) − M(α) drops below the tolerance. The
//! active set is periodically, and finally, re-solved exactly as a linear
//! system.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::linalg;

const TAU: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmoOptions {
    /// Stopping threshold on the maximal KKT violation.
    pub tol: f64,
    pub max_iter: usize,
    /// Re-solve the final active set exactly.
    pub polish: bool,
}

impl Default for SmoOptions {
    fn default() -> Self {
        SmoOptions {
            tol: 1e-6,
            max_iter: 1_000_000,
            polish: true,
        }
    }
}

#[derive(Debug, Clone)]
pub struct DualSolution {
    pub alpha: DVector<f64>,
    pub b: f64,
    pub iterations: usize,
    /// m(α) − M(α) at the returned point.
    pub violation: f64,
}

struct State<'a> {
    gram: &'a DMatrix<f64>,
    y: &'a [f64],
    c: f64,
    alpha: DVector<f64>,
    grad: DVector<f64>,
}

impl State<'_> {
    fn in_up(&self, t: usize) -> bool {
        if self.y[t] > 0.0 {
            self.alpha[t] < self.c
        } else {
            self.alpha[t] > 0.0
        }
    }

    fn in_low(&self, t: usize) -> bool {
        if self.y[t] > 0.0 {
            self.alpha[t] > 0.0
        } else {
            self.alpha[t] < self.c
        }
    }

    fn score(&self, t: usize) -> f64 {
        -self.y[t] * self.grad[t]
    }

    /// (m, M) over the up/low sets.
    fn extremes(&self) -> (f64, f64) {
        let n = self.y.len();
        let mut m = f64::NEG_INFINITY;
        let mut big_m = f64::INFINITY;
        for t in 0..n {
            let s = self.score(t);
            if self.in_up(t) && s > m {
                m = s;
            }
            if self.in_low(t) && s < big_m {
                big_m = s;
            }
        }
        (m, big_m)
    }

    fn violation(&self) -> f64 {
        let (m, big_m) = self.extremes();
        if m.is_finite() && big_m.is_finite() {
            (m - big_m).max(0.0)
        } else {
            0.0
        }
    }

    fn select_pair(&self, tol: f64) -> Option<(usize, usize, f64)> {
        let n = self.y.len();
        let mut i = None;
        let mut m = f64::NEG_INFINITY;
        for t in 0..n {
            if self.in_up(t) {
                let s = self.score(t);
                if s > m {
                    m = s;
                    i = Some(t);
                }
            }
        }
        let i = i?;
        let kii = self.gram[(i, i)];
        let mut j = None;
        let mut best = f64::INFINITY;
        let mut big_m = f64::INFINITY;
        for t in 0..n {
            if !self.in_low(t) {
                continue;
            }
            let s = self.score(t);
            big_m = big_m.min(s);
            let gap = m - s;
            if gap > 0.0 {
                let a = (kii + self.gram[(t, t)] - 2.0 * self.gram[(i, t)]).max(TAU);
                let obj = -gap * gap / a;
                if obj < best {
                    best = obj;
                    j = Some(t);
                }
            }
        }
        if m - big_m <= tol {
            return None;
        }
        j.map(|j| (i, j, m - big_m))
    }

    fn step(&mut self, i: usize, j: usize) {
        let (yi, yj) = (self.y[i], self.y[j]);
        let gap = self.score(i) - self.score(j);
        let a = (self.gram[(i, i)] + self.gram[(j, j)] - 2.0 * self.gram[(i, j)]).max(TAU);
        // α_i moves by +y_i·s, α_j by −y_j·s.
        let bound_i = if yi > 0.0 {
            self.c - self.alpha[i]
        } else {
            self.alpha[i]
        };
        let bound_j = if yj > 0.0 {
            self.alpha[j]
        } else {
            self.c - self.alpha[j]
        };
        let s = (gap / a).min(bound_i).min(bound_j);
        if s <= 0.0 {
            return;
        }
        self.alpha[i] += yi * s;
        self.alpha[j] -= yj * s;
        if s == bound_i {
            self.alpha[i] = if yi > 0.0 { self.c } else { 0.0 };
        }
        if s == bound_j {
            self.alpha[j] = if yj > 0.0 { 0.0 } else { self.c };
        }
        let n = self.y.len();
        for k in 0..n {
            self.grad[k] += self.y[k] * s * (self.gram[(k, i)] - self.gram[(k, j)]);
        }
    }

    fn refresh_gradient(&mut self) {
        self.grad = gradient(self.gram, self.y, &self.alpha);
    }

    /// Intercept from free vectors, or the midpoint of the feasible interval
    /// when every α sits at a bound.
    fn intercept(&self) -> f64 {
        let n = self.y.len();
        let mut free_sum = 0.0;
        let mut free_count = 0usize;
        let mut lower = f64::NEG_INFINITY;
        let mut upper = f64::INFINITY;
        for t in 0..n {
            let r = self.score(t);
            let at_zero = self.alpha[t] <= 0.0;
            let at_c = self.alpha[t] >= self.c;
            if !at_zero && !at_c {
                free_sum += r;
                free_count += 1;
            } else if (self.y[t] > 0.0) == at_zero {
                lower = lower.max(r);
            } else {
                upper = upper.min(r);
            }
        }
        if free_count > 0 {
            free_sum / free_count as f64
        } else if lower.is_finite() && upper.is_finite() {
            0.5 * (lower + upper)
        } else if lower.is_finite() {
            lower
        } else {
            upper
        }
    }

    /// ½ αᵀQα − 1ᵀα from the current gradient.
    fn objective(&self) -> f64 {
        0.5 * self
            .alpha
            .iter()
            .zip(self.grad.iter())
            .map(|(a, g)| a * (g - 1.0))
            .sum::<f64>()
    }

    /// Moves toward the minimizer of the dual over the affine set fixed by
    /// the current bounded coordinates, or along a descent ray when there is
    /// none, pinning each coordinate that hits a bound and re-solving. The
    /// result is kept only if the objective does not increase and, when
    /// `strict`, the violation does not exceed max(before, tol).
    fn polish(&mut self, strict: Option<f64>) {
        let n = self.y.len();
        let saved = self.alpha.clone();
        let (obj_before, viol_before) = (self.objective(), self.violation());
        for _ in 0..n {
            let free: Vec<usize> = (0..n)
                .filter(|&t| self.alpha[t] > 0.0 && self.alpha[t] < self.c)
                .collect();
            if free.is_empty() {
                break;
            }
            let at_c: Vec<usize> = if self.c.is_finite() {
                (0..n).filter(|&t| self.alpha[t] >= self.c).collect()
            } else {
                Vec::new()
            };
            let k = free.len();
            let mut sys = DMatrix::zeros(k + 1, k + 1);
            let mut rhs = DVector::zeros(k + 1);
            for (r, &i) in free.iter().enumerate() {
                for (col, &j) in free.iter().enumerate() {
                    sys[(r, col)] = self.y[i] * self.y[j] * self.gram[(i, j)];
                }
                sys[(r, k)] = self.y[i];
                let bounded: f64 = at_c
                    .iter()
                    .map(|&j| self.y[i] * self.y[j] * self.gram[(i, j)] * self.c)
                    .sum();
                rhs[r] = 1.0 - bounded;
            }
            for (col, &j) in free.iter().enumerate() {
                sys[(k, col)] = self.y[j];
            }
            rhs[k] = -at_c.iter().map(|&j| self.y[j] * self.c).sum::<f64>();
            let sol = linalg::pinv(&sys, 1e-13) * &rhs;
            if sol.iter().any(|v| !v.is_finite()) {
                break;
            }
            // When the system is inconsistent, the dual is unbounded below on
            // the affine set, and rhs − K K⁺ rhs restricted to the free
            // coordinates is a descent ray.
            let residual = &rhs - &sys * &sol;
            let ray = residual.amax() > 1e-9 * (1.0 + rhs.amax() + sys.amax() * sol.amax());
            let mut dir: Vec<f64> = free
                .iter()
                .enumerate()
                .map(|(r, &i)| if ray { residual[r] } else { sol[r] - self.alpha[i] })
                .collect();
            // Keep Σ y α fixed exactly.
            let drift = free.iter().zip(&dir).map(|(&i, v)| self.y[i] * v).sum::<f64>() / k as f64;
            for (v, &i) in dir.iter_mut().zip(&free) {
                *v -= self.y[i] * drift;
            }
            // Exact line search on the quadratic, capped by the box.
            let qd: Vec<f64> = free
                .iter()
                .map(|&i| {
                    free.iter()
                        .zip(&dir)
                        .map(|(&j, v)| self.y[i] * self.y[j] * self.gram[(i, j)] * v)
                        .sum()
                })
                .collect();
            let curvature: f64 = qd.iter().zip(&dir).map(|(a, b)| a * b).sum();
            let slope: f64 = free.iter().zip(&dir).map(|(&i, v)| self.grad[i] * v).sum();
            if slope >= 0.0 {
                break;
            }
            let mut theta = if curvature > 0.0 {
                -slope / curvature
            } else {
                f64::INFINITY
            };
            let mut blocking = None;
            for (r, &i) in free.iter().enumerate() {
                let (a, v) = (self.alpha[i], dir[r]);
                let (t, bound) = if v < 0.0 {
                    (a / -v, 0.0)
                } else if v > 0.0 {
                    ((self.c - a) / v, self.c)
                } else {
                    continue;
                };
                if t < theta {
                    theta = t;
                    blocking = Some((i, bound));
                }
            }
            if !theta.is_finite() {
                break;
            }
            for (r, &i) in free.iter().enumerate() {
                self.alpha[i] = (self.alpha[i] + theta * dir[r]).clamp(0.0, self.c);
            }
            match blocking {
                Some((i, bound)) => self.alpha[i] = bound,
                None => {
                    self.refresh_gradient();
                    break;
                }
            }
            self.refresh_gradient();
        }
        self.refresh_gradient();
        let worse = self.objective() > obj_before + 1e-14 * (1.0 + obj_before.abs())
            || strict.is_some_and(|tol| self.violation() > viol_before.max(tol));
        if worse {
            self.alpha = saved;
            self.refresh_gradient();
        }
    }
}

/// G = Qα − 1.
pub fn gradient(gram: &DMatrix<f64>, y: &[f64], alpha: &DVector<f64>) -> DVector<f64> {
    let ya = DVector::from_iterator(y.len(), alpha.iter().zip(y).map(|(a, yy)| a * yy));
    let k_ya = gram * ya;
    DVector::from_iterator(y.len(), (0..y.len()).map(|k| y[k] * k_ya[k] - 1.0))
}

/// Solves the dual for the given Gram matrix, labels and cost `c`
/// (`f64::INFINITY` for the hard-margin problem).
pub fn solve(gram: &DMatrix<f64>, y: &[f64], c: f64, opts: &SmoOptions) -> Result<DualSolution> {
    let n = y.len();
    assert_eq!(gram.nrows(), n);
    assert!(c > 0.0);
    let mut st = State {
        gram,
        y,
        c,
        alpha: DVector::zeros(n),
        grad: DVector::from_element(n, -1.0),
    };
    let mut iterations = 0;
    while let Some((i, j, _)) = st.select_pair(opts.tol) {
        if iterations >= opts.max_iter {
            st.refresh_gradient();
            return Err(Error::NoConvergence {
                iterations,
                violation: st.violation(),
            });
        }
        st.step(i, j);
        iterations += 1;
        // Periodic exact refresh bounds the drift of the incremental update.
        // Ill-conditioned problems (tiny margins) converge slowly, so the
        // current free set is also tried as the final one.
        if iterations.is_multiple_of(1000) {
            st.refresh_gradient();
            if opts.polish {
                st.polish(None);
                if st.violation() <= opts.tol {
                    break;
                }
            }
        }
    }
    st.refresh_gradient();
    if opts.polish {
        st.polish(Some(opts.tol));
    }
    Ok(DualSolution {
        b: st.intercept(),
        violation: st.violation(),
        alpha: st.alpha,
        iterations,
    })
}
