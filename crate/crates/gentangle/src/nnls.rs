//! Nonnegative least squares by the active-set method of Lawson and Hanson.
//!
//! Solves min ‖Ax − b‖ subject to x ≥ 0. Small dense problems only; the
//! passive-set subproblems are solved by column-pivoted QR through nalgebra.

use nalgebra::{DMatrix, DVector};

/// Result of an NNLS solve: the nonnegative solution and ‖Ax − b‖.
#[derive(Debug, Clone)]
pub struct NnlsSolution {
    pub x: DVector<f64>,
    pub residual: f64,
}

/// Solve min ‖Ax − b‖ s.t. x ≥ 0.
pub fn nnls(a: &DMatrix<f64>, b: &DVector<f64>) -> NnlsSolution {
    let n = a.ncols();
    let mut passive = vec![false; n];
    let mut x = DVector::zeros(n);
    let max_outer = 3 * n.max(8);
    let mut outer = 0;

    loop {
        outer += 1;
        // Dual vector w = Aᵀ(b − Ax); optimal when w ≤ 0 on the active set.
        let resid = b - a * &x;
        let w = a.transpose() * &resid;
        let mut best: Option<(usize, f64)> = None;
        for i in 0..n {
            if !passive[i] && w[i] > 1e-12
                && best.is_none_or(|(_, bw)| w[i] > bw) {
                    best = Some((i, w[i]));
                }
        }
        let Some((enter, _)) = best else { break };
        if outer > max_outer {
            break;
        }
        passive[enter] = true;

        // Inner loop: solve on the passive set and clip variables that go
        // negative back to the boundary.
        loop {
            let cols: Vec<usize> = (0..n).filter(|&i| passive[i]).collect();
            if cols.is_empty() {
                break;
            }
            let sub = a.select_columns(cols.iter());
            let z = lstsq(&sub, b);
            if z.iter().all(|&v| v > 0.0) {
                x.fill(0.0);
                for (k, &i) in cols.iter().enumerate() {
                    x[i] = z[k];
                }
                break;
            }
            // Step toward z as far as feasibility allows.
            let mut alpha = f64::INFINITY;
            for (k, &i) in cols.iter().enumerate() {
                if z[k] <= 0.0 {
                    let denom = x[i] - z[k];
                    if denom > 1e-300 {
                        alpha = alpha.min(x[i] / denom);
                    } else {
                        alpha = 0.0;
                    }
                }
            }
            let alpha = alpha.clamp(0.0, 1.0);
            for (k, &i) in cols.iter().enumerate() {
                x[i] += alpha * (z[k] - x[i]);
                if x[i] <= 1e-14 {
                    x[i] = 0.0;
                    passive[i] = false;
                }
            }
        }
    }

    let residual = (b - a * &x).norm();
    NnlsSolution { x, residual }
}

/// Unconstrained least squares via column-pivoted QR with a rank cutoff.
fn lstsq(a: &DMatrix<f64>, b: &DVector<f64>) -> DVector<f64> {
    let svd = a.clone().svd(true, true);
    svd.solve(b, 1e-12 * svd.singular_values.max().max(1e-300))
        .unwrap_or_else(|_| DVector::zeros(a.ncols()))
}
