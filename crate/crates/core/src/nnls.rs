//! Lawson–Hanson non-negative least squares, used for cone and convex-hull
//! membership over small generator sets.

use nalgebra::{DMatrix, DVector};

/// Solves `min ‖A λ − b‖₂` subject to `λ ≥ 0`.
pub(crate) fn nnls(a: &DMatrix<f64>, b: &DVector<f64>) -> DVector<f64> {
    let n = a.ncols();
    let mut x = DVector::zeros(n);
    if n == 0 {
        return x;
    }
    let scale = a.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1.0)
        * b.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1.0);
    let eps = 1e-13 * scale;
    let mut passive = vec![false; n];
    let max_outer = 3 * n + 10;

    for _ in 0..max_outer {
        let w = a.transpose() * (b - a * &x);
        let candidate = (0..n)
            .filter(|&j| !passive[j])
            .max_by(|&i, &j| w[i].total_cmp(&w[j]));
        let Some(j) = candidate else { break };
        if w[j] <= eps {
            break;
        }
        passive[j] = true;

        for _ in 0..max_outer {
            let idx: Vec<usize> = (0..n).filter(|&i| passive[i]).collect();
            let s_p = least_squares(a, b, &idx);
            if idx.iter().zip(s_p.iter()).all(|(_, &v)| v > 0.0) {
                x.fill(0.0);
                for (&i, &v) in idx.iter().zip(s_p.iter()) {
                    x[i] = v;
                }
                break;
            }
            let mut alpha = f64::INFINITY;
            for (&i, &s) in idx.iter().zip(s_p.iter()) {
                if s <= 0.0 {
                    let denom = x[i] - s;
                    if denom > 0.0 {
                        alpha = alpha.min(x[i] / denom);
                    } else {
                        alpha = 0.0;
                    }
                }
            }
            let alpha = if alpha.is_finite() { alpha } else { 0.0 };
            let mut s_full = DVector::zeros(n);
            for (&i, &v) in idx.iter().zip(s_p.iter()) {
                s_full[i] = v;
            }
            x += (s_full - &x) * alpha;
            for &i in &idx {
                if x[i] <= 1e-15 {
                    x[i] = 0.0;
                    passive[i] = false;
                }
            }
            if !passive.iter().any(|&p| p) {
                break;
            }
        }
    }
    x
}

fn least_squares(a: &DMatrix<f64>, b: &DVector<f64>, idx: &[usize]) -> DVector<f64> {
    let sub = a.select_columns(idx);
    sub.svd(true, true)
        .solve(b, 1e-12)
        .unwrap_or_else(|_| DVector::zeros(idx.len()))
}
