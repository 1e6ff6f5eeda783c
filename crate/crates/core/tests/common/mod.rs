#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use svm_geometry::synth::task_rng;
use svm_geometry::{Dataset, Label};

pub fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    task_rng(seed, stream)
}

/// Gaussian classes centered at ±(sep/2)·e1 with unit covariance.
pub fn gaussian(rng: &mut ChaCha8Rng, n_plus: usize, n_minus: usize, d: usize, sep: f64) -> Dataset {
    let n = n_plus + n_minus;
    let mut pts = DMatrix::zeros(n, d);
    let mut labels = Vec::with_capacity(n);
    for i in 0..n {
        let l = if i < n_plus { Label::Positive } else { Label::Negative };
        for j in 0..d {
            pts[(i, j)] = StandardNormal.sample(rng);
        }
        pts[(i, 0)] += l.sign() * sep / 2.0;
        labels.push(l);
    }
    Dataset::new(pts, labels).unwrap()
}

/// Draws until the classes are separable.
pub fn separable(rng: &mut ChaCha8Rng, n_plus: usize, n_minus: usize, d: usize, sep: f64) -> Dataset {
    loop {
        let data = gaussian(rng, n_plus, n_minus, d, sep);
        let g = svm_geometry::geometry::gap(&data, &Default::default()).unwrap();
        if g.separable {
            return data;
        }
    }
}

pub fn log_uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    (lo.ln() + rng.random::<f64>() * (hi.ln() - lo.ln())).exp()
}

/// Euclidean projection onto {α : yᵀα = 0, 0 ≤ α ≤ c}. The projection is
/// clip(v − λy) for the λ making yᵀα vanish, found by bisection.
pub fn project(v: &DVector<f64>, y: &DVector<f64>, c: f64) -> DVector<f64> {
    let at = |lam: f64| v.zip_map(y, |vi, yi| (vi - lam * yi).clamp(0.0, c));
    let balance = |lam: f64| at(lam).dot(y);
    let mut lo = -(v.amax() + c + 1.0);
    let mut hi = -lo;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        if balance(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    at(0.5 * (lo + hi))
}

/// Dual maximizer by accelerated projected gradient with restarts, run
/// for at most `iterations` steps or until α is a fixed point of the
/// projected gradient map. Returns (α, dual objective Σα − ½αᵀQα).
pub fn pg_oracle(data: &Dataset, c: f64, iterations: usize) -> (DVector<f64>, f64) {
    let y = data.y_vector();
    let k = data.gram();
    let q = DMatrix::from_fn(k.nrows(), k.ncols(), |i, j| y[i] * y[j] * k[(i, j)]);
    let l = q.symmetric_eigenvalues().amax().max(1e-12);
    let obj = |a: &DVector<f64>| a.sum() - 0.5 * a.dot(&(&q * a));
    let n = data.len();
    let mut x = DVector::zeros(n);
    let mut z = x.clone();
    let mut t = 1.0f64;
    for it in 0..iterations {
        if it % 100 == 0 {
            let g = DVector::from_element(n, 1.0) - &q * &x;
            if (project(&(&x + g / l), &y, c) - &x).amax() <= 1e-14 * (1.0 + c) {
                break;
            }
        }
        let grad = DVector::from_element(n, 1.0) - &q * &z;
        let next = project(&(&z + grad / l), &y, c);
        let t_next = 0.5 * (1.0 + (1.0 + 4.0 * t * t).sqrt());
        if obj(&next) < obj(&x) {
            // Restart the momentum when the objective decreases.
            z = x.clone();
            t = 1.0;
            continue;
        }
        z = &next + (&next - &x) * ((t - 1.0) / t_next);
        x = next;
        t = t_next;
    }
    let f = obj(&x);
    (x, f)
}

/// Dense reference for the maximal data piling direction: global
/// covariance inverted on its range via an eigendecomposition.
pub fn mdp_reference(data: &Dataset) -> DVector<f64> {
    let n = data.len() as f64;
    let mean = data.mean();
    let mut s = DMatrix::zeros(data.dim(), data.dim());
    for i in 0..data.len() {
        let c = data.point(i) - &mean;
        s += &c * c.transpose();
    }
    s /= n - 1.0;
    let eig = s.symmetric_eigen();
    let top = eig.eigenvalues.amax();
    let diff = data.class_mean(Label::Positive) - data.class_mean(Label::Negative);
    let mut out = DVector::zeros(data.dim());
    for (k, &lam) in eig.eigenvalues.iter().enumerate() {
        if lam > 1e-10 * top {
            let u = eig.eigenvectors.column(k);
            out += u * (u.dot(&diff) / lam);
        }
    }
    out
}
