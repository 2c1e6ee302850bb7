//! Lanczos iteration with full reorthogonalization for the lowest
//! eigenvalues of a large symmetric operator given only its action.
//!
//! The Krylov basis is kept and every new direction is reorthogonalized
//! against all of it (twice), trading memory for unconditional numerical
//! stability at the problem sizes used here. The start vector comes from
//! a seeded generator so reported digits are reproducible run to run.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Result, VarQedError};

#[derive(Debug, Clone, Copy)]
pub struct LanczosOptions {
    /// Relative residual tolerance: converged when
    /// `|H x - theta x| <= tol * spectral_scale`.
    pub tol: f64,
    /// Hard cap on Krylov dimension (memory: one `dim` vector per step).
    pub max_iter: usize,
    /// Seed for the start vector.
    pub seed: u64,
    /// Convergence is checked every this many steps.
    pub check_every: usize,
}

impl Default for LanczosOptions {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            max_iter: 500,
            seed: 2024,
            check_every: 10,
        }
    }
}

/// Lowest `k` eigenvalues of the operator represented by `matvec`.
pub fn lowest_eigenvalues_with<F>(
    matvec: F,
    dim: usize,
    k: usize,
    options: &LanczosOptions,
) -> Result<Vec<f64>>
where
    F: Fn(&[f64], &mut [f64]),
{
    assert!(dim >= 1 && k >= 1);
    let k = k.min(dim);
    let max_iter = options.max_iter.min(dim);

    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    let mut q: Vec<Vec<f64>> = Vec::with_capacity(max_iter);
    let mut start: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
    normalize(&mut start);
    q.push(start);

    let mut alpha: Vec<f64> = Vec::new();
    let mut beta: Vec<f64> = Vec::new();
    let mut w = vec![0.0; dim];

    for j in 0..max_iter {
        matvec(&q[j], &mut w);
        let a_j = dot(&q[j], &w);
        alpha.push(a_j);
        axpy(&mut w, -a_j, &q[j]);
        if j > 0 {
            let b_prev = beta[j - 1];
            let q_prev = q[j - 1].clone();
            axpy(&mut w, -b_prev, &q_prev);
        }
        // full reorthogonalization, two passes
        for _ in 0..2 {
            for q_i in &q {
                let overlap = dot(q_i, &w);
                axpy(&mut w, -overlap, q_i);
            }
        }
        let b_j = norm(&w);

        let at_checkpoint = (j + 1) % options.check_every == 0 || j + 1 == max_iter || j + 1 == dim;
        if at_checkpoint && alpha.len() >= k {
            if let Some(values) = converged_ritz(&alpha, &beta, b_j, k, options.tol) {
                return Ok(values);
            }
        }

        if j + 1 == max_iter || j + 1 == dim {
            break;
        }

        if b_j < 1e-13 {
            // invariant subspace exhausted: restart with a fresh random
            // direction orthogonal to everything found so far
            let mut fresh: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
            for _ in 0..2 {
                for q_i in &q {
                    let overlap = dot(q_i, &fresh);
                    axpy(&mut fresh, -overlap, q_i);
                }
            }
            let n = norm(&fresh);
            if n < 1e-13 {
                // whole space spanned; the Ritz values are exact
                break;
            }
            scale(&mut fresh, 1.0 / n);
            beta.push(0.0);
            q.push(fresh);
        } else {
            let mut next = w.clone();
            scale(&mut next, 1.0 / b_j);
            beta.push(b_j);
            q.push(next);
        }
    }

    // final verdict from the full tridiagonal
    let (ritz, residuals, scale_est) = ritz_values(&alpha, &beta, 0.0, k);
    let worst = residuals.iter().cloned().fold(0.0_f64, f64::max);
    if alpha.len() >= dim.min(max_iter) && alpha.len() == dim {
        // spanned the full space: exact up to round-off
        return Ok(ritz);
    }
    if worst <= options.tol * scale_est {
        return Ok(ritz);
    }
    Err(VarQedError::LanczosNonConvergence {
        converged: residuals
            .iter()
            .filter(|&&r| r <= options.tol * scale_est)
            .count(),
        requested: k,
        residual: worst,
    })
}

/// Ritz values of the current tridiagonal and their residual estimates
/// `|b_j * y_last|`; returns `Some(values)` when the k lowest meet the
/// tolerance relative to the spectral scale.
fn converged_ritz(
    alpha: &[f64],
    beta: &[f64],
    b_current: f64,
    k: usize,
    tol: f64,
) -> Option<Vec<f64>> {
    let (values, residuals, scale_est) = ritz_values(alpha, beta, b_current, k);
    if values.len() < k {
        return None;
    }
    if residuals.iter().all(|&r| r <= tol * scale_est) {
        Some(values)
    } else {
        None
    }
}

fn ritz_values(alpha: &[f64], beta: &[f64], b_current: f64, k: usize) -> (Vec<f64>, Vec<f64>, f64) {
    let n = alpha.len();
    let mut t = DMatrix::zeros(n, n);
    for i in 0..n {
        t[(i, i)] = alpha[i];
        if i + 1 < n {
            t[(i, i + 1)] = beta[i];
            t[(i + 1, i)] = beta[i];
        }
    }
    let eig = t.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].partial_cmp(&eig.eigenvalues[j]).unwrap());
    let scale_est = order
        .iter()
        .map(|&i| eig.eigenvalues[i].abs())
        .fold(0.0_f64, f64::max)
        .max(f64::MIN_POSITIVE);
    let k_eff = k.min(n);
    let mut values = Vec::with_capacity(k_eff);
    let mut residuals = Vec::with_capacity(k_eff);
    for &i in order.iter().take(k_eff) {
        values.push(eig.eigenvalues[i]);
        residuals.push((b_current * eig.eigenvectors[(n - 1, i)]).abs());
    }
    (values, residuals, scale_est)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn normalize(a: &mut [f64]) {
    let n = norm(a);
    scale(a, 1.0 / n);
}

fn scale(a: &mut [f64], s: f64) {
    for x in a {
        *x *= s;
    }
}

fn axpy(y: &mut [f64], a: f64, x: &[f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += a * xi;
    }
}
