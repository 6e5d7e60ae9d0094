#![allow(dead_code)]

use itercert::iterative::IterationTrace;
use itercert::linalg::{DenseMatrix, DenseVector};

/// Largest `||(x_m - x) - S (x_{m-1} - x)|| / (1 + ||x||)` over the stored iterates.
pub fn recurrence_defect(trace: &IterationTrace, s: &DenseMatrix, x: &DenseVector) -> f64 {
    let scale = 1.0 + x.norm2();
    trace
        .iterates
        .windows(2)
        .map(|w| {
            let prev = w[0].sub(x).unwrap();
            let cur = w[1].sub(x).unwrap();
            cur.sub(&s.matvec(&prev).unwrap()).unwrap().norm2() / scale
        })
        .fold(0.0, f64::max)
}

/// Relative closeness, `|a - b| <= tol * max(|a|, |b|, tiny)`.
pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}
