//! Dense two-phase simplex for small standard-form linear programs
//!
//! ```text
//! minimize cᵀx  subject to  A x = b,  x ≥ 0.
//! ```
//!
//! Pivoting follows Bland's rule (lowest-index entering and leaving
//! variables), which rules out cycling.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// A standard-form linear program.
#[derive(Debug, Clone)]
pub struct StandardLp {
    pub a: DMatrix<f64>,
    pub b: DVector<f64>,
    pub c: DVector<f64>,
}

#[derive(Debug, Clone, Copy)]
pub struct SimplexOptions {
    /// Entries smaller than this are treated as zero when pivoting.
    pub pivot_tol: f64,
    /// Largest phase-one residual accepted as feasible (after row scaling).
    pub feasibility_tol: f64,
    pub max_pivots: usize,
}

impl Default for SimplexOptions {
    fn default() -> Self {
        SimplexOptions {
            pivot_tol: 1e-11,
            feasibility_tol: 1e-9,
            max_pivots: 100_000,
        }
    }
}

#[derive(Debug, Clone)]
pub enum LpOutcome {
    Optimal {
        x: DVector<f64>,
        objective: f64,
    },
    /// Phase one could not drive the artificial residual below tolerance.
    Infeasible {
        residual: f64,
    },
    Unbounded,
}

impl LpOutcome {
    pub fn is_feasible(&self) -> bool {
        !matches!(self, LpOutcome::Infeasible { .. })
    }
}

struct Tableau {
    // m constraint rows followed by one objective row; last column is the rhs.
    t: DMatrix<f64>,
    basis: Vec<usize>,
    pivots: usize,
}

impl Tableau {
    fn rows(&self) -> usize {
        self.t.nrows() - 1
    }

    fn rhs_col(&self) -> usize {
        self.t.ncols() - 1
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.t[(r, c)];
        let ncols = self.t.ncols();
        for j in 0..ncols {
            self.t[(r, j)] /= p;
        }
        for i in 0..self.t.nrows() {
            if i == r {
                continue;
            }
            let f = self.t[(i, c)];
            if f != 0.0 {
                for j in 0..ncols {
                    let v = self.t[(r, j)];
                    self.t[(i, j)] -= f * v;
                }
                self.t[(i, c)] = 0.0;
            }
        }
        self.basis[r] = c;
        self.pivots += 1;
    }

    /// Runs Bland's-rule iterations over columns `0..active_cols`.
    /// Returns false if the objective is unbounded below.
    fn optimize(&mut self, active_cols: usize, opts: &SimplexOptions) -> Result<bool> {
        let obj = self.rows();
        let rhs = self.rhs_col();
        loop {
            if self.pivots >= opts.max_pivots {
                return Err(Error::LinearProgram(format!(
                    "pivot limit {} exceeded",
                    opts.max_pivots
                )));
            }
            let Some(enter) = (0..active_cols).find(|&j| self.t[(obj, j)] < -opts.pivot_tol) else {
                return Ok(true);
            };
            let mut leave: Option<(usize, f64)> = None;
            for i in 0..obj {
                let a = self.t[(i, enter)];
                if a > opts.pivot_tol {
                    let ratio = self.t[(i, rhs)] / a;
                    leave = match leave {
                        None => Some((i, ratio)),
                        Some((li, lr)) => {
                            if ratio < lr - 1e-12 * lr.abs().max(1.0)
                                || ((ratio - lr).abs() <= 1e-12 * lr.abs().max(1.0) && self.basis[i] < self.basis[li])
                            {
                                Some((i, ratio))
                            } else {
                                Some((li, lr))
                            }
                        }
                    };
                }
            }
            match leave {
                None => return Ok(false),
                Some((r, _)) => self.pivot(r, enter),
            }
        }
    }
}

/// Solves a standard-form LP by the two-phase method.
pub fn solve(lp: &StandardLp, opts: &SimplexOptions) -> Result<LpOutcome> {
    let (m, n) = lp.a.shape();
    if lp.b.len() != m || lp.c.len() != n {
        return Err(Error::LinearProgram("inconsistent LP dimensions".into()));
    }
    if lp
        .a
        .iter()
        .chain(lp.b.iter())
        .chain(lp.c.iter())
        .any(|v| !v.is_finite())
    {
        return Err(Error::LinearProgram("non-finite LP data".into()));
    }

    // Row-equilibrate and make the rhs nonnegative.
    let mut a = lp.a.clone();
    let mut b = lp.b.clone();
    for i in 0..m {
        let scale = a.row(i).amax().max(b[i].abs());
        if scale > 0.0 {
            for j in 0..n {
                a[(i, j)] /= scale;
            }
            b[i] /= scale;
        }
        if b[i] < 0.0 {
            for j in 0..n {
                a[(i, j)] = -a[(i, j)];
            }
            b[i] = -b[i];
        }
    }

    // Columns: n structural, m artificial, rhs.
    let mut t = DMatrix::zeros(m + 1, n + m + 1);
    for i in 0..m {
        for j in 0..n {
            t[(i, j)] = a[(i, j)];
        }
        t[(i, n + i)] = 1.0;
        t[(i, n + m)] = b[i];
    }
    // Phase-one objective row: minimize the artificial sum, written in
    // reduced form with respect to the artificial basis.
    for j in 0..n {
        t[(m, j)] = -(0..m).map(|i| a[(i, j)]).sum::<f64>();
    }
    t[(m, n + m)] = -b.sum();
    let mut tab = Tableau {
        t,
        basis: (n..n + m).collect(),
        pivots: 0,
    };

    tab.optimize(n + m, opts)?;
    let residual = -tab.t[(m, n + m)];
    if residual > opts.feasibility_tol {
        return Ok(LpOutcome::Infeasible { residual });
    }

    // Drive remaining artificials out of the basis; drop redundant rows.
    let mut keep_rows: Vec<usize> = Vec::with_capacity(m);
    for r in 0..m {
        if tab.basis[r] >= n {
            if let Some(c) = (0..n).find(|&j| tab.t[(r, j)].abs() > opts.pivot_tol.max(1e-9)) {
                tab.pivot(r, c);
                keep_rows.push(r);
            }
        } else {
            keep_rows.push(r);
        }
    }

    // Phase two on the structural columns only.
    let m2 = keep_rows.len();
    let mut t2 = DMatrix::zeros(m2 + 1, n + 1);
    let mut basis2 = Vec::with_capacity(m2);
    for (new_r, &r) in keep_rows.iter().enumerate() {
        for j in 0..n {
            t2[(new_r, j)] = tab.t[(r, j)];
        }
        t2[(new_r, n)] = tab.t[(r, n + m)].max(0.0);
        basis2.push(tab.basis[r]);
    }
    for j in 0..n {
        t2[(m2, j)] = lp.c[j];
    }
    for (r, &bj) in basis2.iter().enumerate() {
        let cb = lp.c[bj];
        if cb != 0.0 {
            for j in 0..=n {
                let v = t2[(r, j)];
                t2[(m2, j)] -= cb * v;
            }
        }
    }
    let mut tab2 = Tableau {
        t: t2,
        basis: basis2,
        pivots: tab.pivots,
    };
    if !tab2.optimize(n, opts)? {
        return Ok(LpOutcome::Unbounded);
    }
    let mut x = DVector::zeros(n);
    for (r, &bj) in tab2.basis.iter().enumerate() {
        x[bj] = tab2.t[(r, n)];
    }
    let objective = lp.c.dot(&x);
    Ok(LpOutcome::Optimal { x, objective })
}
