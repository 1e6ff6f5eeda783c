//! Labeled two-class datasets and linear models.

use std::f64::consts::FRAC_PI_2;

use nalgebra::{DMatrix, DVector, RowDVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Class label of an observation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Label {
    Positive,
    Negative,
}

impl Label {
    /// +1.0 or -1.0.
    pub fn sign(self) -> f64 {
        match self {
            Label::Positive => 1.0,
            Label::Negative => -1.0,
        }
    }

    pub fn flipped(self) -> Label {
        match self {
            Label::Positive => Label::Negative,
            Label::Negative => Label::Positive,
        }
    }

    /// Parses +1 / -1 (any numeric spelling of them). Returns `None` for
    /// anything else.
    pub fn from_value(v: f64) -> Option<Label> {
        if v == 1.0 {
            Some(Label::Positive)
        } else if v == -1.0 {
            Some(Label::Negative)
        } else {
            None
        }
    }
}

/// A two-class dataset: an n×d point matrix (rows are observations) with ±1 labels.
///
/// Construction validates that there are at least two points, at least one
/// per class, and that every coordinate is finite.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    points: DMatrix<f64>,
    labels: Vec<Label>,
}

impl Dataset {
    pub fn new(points: DMatrix<f64>, labels: Vec<Label>) -> Result<Self> {
        let n = points.nrows();
        if labels.len() != n {
            return Err(Error::InvalidDataset(format!(
                "{} points but {} labels",
                n,
                labels.len()
            )));
        }
        if n < 2 {
            return Err(Error::InvalidDataset(format!("need at least 2 points, got {n}")));
        }
        if points.ncols() == 0 {
            return Err(Error::InvalidDataset("dimension must be at least 1".into()));
        }
        if !labels.contains(&Label::Positive) || !labels.contains(&Label::Negative) {
            return Err(Error::InvalidDataset("both classes must be present".into()));
        }
        if let Some(idx) = points.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidDataset(format!(
                "non-finite coordinate at row {}",
                idx % n
            )));
        }
        Ok(Dataset { points, labels })
    }

    /// Builds a dataset from row vectors and numeric ±1 labels.
    pub fn from_rows(rows: &[Vec<f64>], labels: &[f64]) -> Result<Self> {
        let d = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().position(|r| r.len() != d) {
            return Err(Error::InvalidDataset(format!(
                "row {bad} has {} coordinates, expected {d}",
                rows[bad].len()
            )));
        }
        let labels = labels
            .iter()
            .enumerate()
            .map(|(i, &v)| {
                Label::from_value(v).ok_or_else(|| Error::InvalidDataset(format!("label {v} at row {i} is not ±1")))
            })
            .collect::<Result<Vec<_>>>()?;
        let points = DMatrix::from_fn(rows.len(), d, |i, j| rows[i][j]);
        Dataset::new(points, labels)
    }

    pub fn points(&self) -> &DMatrix<f64> {
        &self.points
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.points.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn dim(&self) -> usize {
        self.points.ncols()
    }

    /// The i-th observation as a column vector.
    pub fn point(&self, i: usize) -> DVector<f64> {
        self.points.row(i).transpose()
    }

    pub fn label(&self, i: usize) -> Label {
        self.labels[i]
    }

    /// Numeric label y_i ∈ {−1, +1}.
    pub fn y(&self, i: usize) -> f64 {
        self.labels[i].sign()
    }

    pub fn y_vector(&self) -> DVector<f64> {
        DVector::from_iterator(self.len(), self.labels.iter().map(|l| l.sign()))
    }

    pub fn indices_of(&self, label: Label) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.labels[i] == label).collect()
    }

    pub fn count(&self, label: Label) -> usize {
        self.labels.iter().filter(|&&l| l == label).count()
    }

    pub fn n_plus(&self) -> usize {
        self.count(Label::Positive)
    }

    pub fn n_minus(&self) -> usize {
        self.count(Label::Negative)
    }

    /// The larger class; ties resolve to `Positive`.
    pub fn larger_class(&self) -> Label {
        if self.n_plus() >= self.n_minus() {
            Label::Positive
        } else {
            Label::Negative
        }
    }

    pub fn is_balanced(&self) -> bool {
        self.n_plus() == self.n_minus()
    }

    pub fn class_mean(&self, label: Label) -> DVector<f64> {
        let idx = self.indices_of(label);
        let mut sum = DVector::zeros(self.dim());
        for &i in &idx {
            sum += self.points.row(i).transpose();
        }
        sum / idx.len() as f64
    }

    pub fn mean(&self) -> DVector<f64> {
        self.points.row_mean().transpose()
    }

    /// Largest point norm, floored at 1. Used to scale absolute tolerances.
    pub fn scale(&self) -> f64 {
        self.points.row_iter().map(|r| r.norm()).fold(1.0_f64, f64::max)
    }

    /// Gram matrix of inner products, n×n.
    pub fn gram(&self) -> DMatrix<f64> {
        &self.points * self.points.transpose()
    }

    pub fn subset(&self, indices: &[usize]) -> Result<Dataset> {
        let points = self.points.select_rows(indices.iter());
        let labels = indices.iter().map(|&i| self.labels[i]).collect();
        Dataset::new(points, labels)
    }

    /// Returns a copy with labels swapped when the negative class is larger,
    /// so that n+ ≥ n−, together with whether the swap happened.
    pub fn normalized(&self) -> (Dataset, bool) {
        if self.n_plus() >= self.n_minus() {
            (self.clone(), false)
        } else {
            let labels = self.labels.iter().map(|l| l.flipped()).collect();
            (
                Dataset {
                    points: self.points.clone(),
                    labels,
                },
                true,
            )
        }
    }

    /// Replaces every point x by m·x; labels are unchanged.
    pub fn transform(&self, m: &DMatrix<f64>) -> Result<Dataset> {
        if m.nrows() != self.dim() || m.ncols() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: if m.ncols() != self.dim() { m.ncols() } else { m.nrows() },
            });
        }
        if m.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidConfig("transform matrix has non-finite entries".into()));
        }
        Dataset::new(&self.points * m.transpose(), self.labels.clone())
    }

    /// Appends another dataset's rows.
    pub fn concat(&self, other: &Dataset) -> Result<Dataset> {
        if other.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: other.dim(),
            });
        }
        let n = self.len() + other.len();
        let points = DMatrix::from_fn(n, self.dim(), |i, j| {
            if i < self.len() {
                self.points[(i, j)]
            } else {
                other.points[(i - self.len(), j)]
            }
        });
        let mut labels = self.labels.clone();
        labels.extend_from_slice(&other.labels);
        Dataset::new(points, labels)
    }
}

/// A linear classifier f(x) = w·x + b.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearModel {
    #[serde(with = "crate::serde_vec")]
    pub w: DVector<f64>,
    pub b: f64,
}

impl LinearModel {
    pub fn new(w: DVector<f64>, b: f64) -> Self {
        LinearModel { w, b }
    }

    pub fn decision(&self, x: &DVector<f64>) -> f64 {
        self.w.dot(x) + self.b
    }

    /// Decision values for every row of `points`.
    pub fn decision_values(&self, points: &DMatrix<f64>) -> Result<DVector<f64>> {
        if points.ncols() != self.w.len() {
            return Err(Error::DimensionMismatch {
                expected: self.w.len(),
                got: points.ncols(),
            });
        }
        Ok(points * &self.w + DVector::from_element(points.nrows(), self.b))
    }

    /// sign(w·x + b) for each row; an exact zero maps to `Positive`.
    pub fn predict(&self, points: &DMatrix<f64>) -> Result<Vec<Label>> {
        Ok(self
            .decision_values(points)?
            .iter()
            .map(|&f| if f >= 0.0 { Label::Positive } else { Label::Negative })
            .collect())
    }

    pub fn predict_one(&self, x: &RowDVector<f64>) -> Result<Label> {
        if x.len() != self.w.len() {
            return Err(Error::DimensionMismatch {
                expected: self.w.len(),
                got: x.len(),
            });
        }
        let f = (x * &self.w)[0] + self.b;
        Ok(if f >= 0.0 { Label::Positive } else { Label::Negative })
    }

    /// Fraction of `data` misclassified.
    pub fn error_rate(&self, data: &Dataset) -> Result<f64> {
        let pred = self.predict(data.points())?;
        let wrong = pred.iter().zip(data.labels()).filter(|(p, l)| p != l).count();
        Ok(wrong as f64 / data.len() as f64)
    }

    /// Margin width 1/‖w‖.
    pub fn margin_width(&self) -> f64 {
        1.0 / self.w.norm()
    }
}

/// Threshold below which a normal vector is treated as the zero direction.
pub fn zero_direction_tol(scale: f64) -> f64 {
    1e-12 * scale.max(1.0)
}

/// Angle in [0, π/2] between the lines spanned by `u` and `v`.
pub fn direction_angle(u: &DVector<f64>, v: &DVector<f64>) -> Result<f64> {
    if u.len() != v.len() {
        return Err(Error::DimensionMismatch {
            expected: u.len(),
            got: v.len(),
        });
    }
    let (nu, nv) = (u.norm(), v.norm());
    if nu == 0.0 || nv == 0.0 || !nu.is_finite() || !nv.is_finite() {
        return Err(Error::InvalidDirection("zero or non-finite vector".into()));
    }
    // atan2 of the wedge norm and |u·v| is accurate at every angle and
    // exactly zero for proportional vectors.
    let n = u.len();
    let mut wedge = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            let c = u[i] * v[j] - u[j] * v[i];
            wedge += c * c;
        }
    }
    Ok(wedge.sqrt().atan2(u.dot(v).abs()).clamp(0.0, FRAC_PI_2))
}

/// Whether two vectors span the same line, up to `tol` radians.
pub fn directions_equivalent(u: &DVector<f64>, v: &DVector<f64>, tol: f64) -> Result<bool> {
    Ok(direction_angle(u, v)? <= tol)
}
