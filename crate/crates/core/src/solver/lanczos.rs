//! Lanczos iteration with full reorthogonalization and explicit deflation
//! against previously converged eigenvectors.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::hilbert::{inner, LinearOperator};
use crate::{Error, Result, C64};

const ZERO: C64 = C64::new(0.0, 0.0);

pub(crate) struct Eigenpair {
    pub value: f64,
    pub vector: Vec<C64>,
    pub residual: f64,
    pub iterations: usize,
}

pub(crate) struct LanczosParams {
    pub max_iterations: usize,
    pub krylov_dim: usize,
    pub tol: f64,
}

pub(crate) fn random_vector(dim: usize, seed: u64) -> Vec<C64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..dim).map(|_| C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)).collect()
}

fn norm(v: &[C64]) -> f64 {
    v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
}

/// Two passes of classical Gram–Schmidt against `basis`.
fn orthogonalize(w: &mut [C64], basis: &[Vec<C64>]) {
    for _ in 0..2 {
        for q in basis {
            let c = inner(q, w);
            if c != ZERO {
                w.iter_mut().zip(q).for_each(|(wi, qi)| *wi -= c * qi);
            }
        }
    }
}

/// Eigen-decomposition of the real symmetric tridiagonal matrix, ascending.
fn tridiagonal_eigen(alphas: &[f64], betas: &[f64]) -> (Vec<f64>, DMatrix<f64>) {
    let k = alphas.len();
    let t = DMatrix::from_fn(k, k, |i, j| {
        if i == j {
            alphas[i]
        } else if i + 1 == j {
            betas[i]
        } else if j + 1 == i {
            betas[j]
        } else {
            0.0
        }
    });
    let eig = t.symmetric_eigen();
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(k, k, |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}

/// Lowest Ritz value after each Lanczos step from `start`.
pub(crate) fn ritz_history(op: &dyn LinearOperator, start: Vec<C64>, steps: usize) -> Vec<f64> {
    let mut q = start;
    let n = norm(&q);
    q.iter_mut().for_each(|x| *x /= n);
    let mut basis = vec![q];
    let (mut alphas, mut betas) = (Vec::new(), Vec::new());
    let mut history = Vec::new();
    let mut w = vec![ZERO; op.dim()];
    for j in 0..steps.min(op.dim()) {
        op.apply(&basis[j], &mut w);
        alphas.push(inner(&basis[j], &w).re);
        orthogonalize(&mut w, &basis);
        history.push(tridiagonal_eigen(&alphas, &betas).0[0]);
        let b = norm(&w);
        if b < 1e-13 {
            break;
        }
        betas.push(b);
        basis.push(w.iter().map(|x| x / b).collect());
    }
    history
}

/// Lowest eigenpair of `op` restricted to the orthogonal complement of `locked`.
pub(crate) fn lowest_eigenpair(
    op: &dyn LinearOperator,
    locked: &[Vec<C64>],
    start: Vec<C64>,
    params: &LanczosParams,
) -> Result<Eigenpair> {
    let dim = op.dim();
    let available = dim.saturating_sub(locked.len());
    if available == 0 {
        return Err(Error::InvalidArgument("no vectors left outside the locked subspace".into()));
    }
    let mut q = start;
    let mut total = 0;
    let mut best_residual = f64::INFINITY;
    let mut w = vec![ZERO; dim];
    let mut restart_seed = 0xA5A5u64;
    loop {
        orthogonalize(&mut q, locked);
        let n = norm(&q);
        if n < 1e-10 {
            restart_seed += 1;
            q = random_vector(dim, restart_seed);
            continue;
        }
        q.iter_mut().for_each(|x| *x /= n);

        let cap = params.krylov_dim.min(available);
        let mut basis: Vec<Vec<C64>> = vec![q];
        let (mut alphas, mut betas) = (Vec::<f64>::new(), Vec::<f64>::new());
        let outcome = loop {
            let j = basis.len() - 1;
            op.apply(&basis[j], &mut w);
            total += 1;
            alphas.push(inner(&basis[j], &w).re);
            orthogonalize(&mut w, locked);
            orthogonalize(&mut w, &basis);
            let beta = norm(&w);
            let k = alphas.len();
            let exhausted = k == cap || beta < 1e-12 * alphas.iter().fold(1.0f64, |m, a| m.max(a.abs()));
            if exhausted || k % 8 == 0 || total >= params.max_iterations {
                let (vals, vecs) = tridiagonal_eigen(&alphas, &betas);
                let theta = vals[0];
                let estimate = beta * vecs[(k - 1, 0)].abs();
                if exhausted || estimate < params.tol * theta.abs().max(1.0) || total >= params.max_iterations {
                    break (theta, vecs.column(0).iter().copied().collect::<Vec<f64>>());
                }
            }
            basis.push(w.iter().map(|x| x / beta).collect());
            betas.push(beta);
        };

        let (_, coeffs) = outcome;
        let mut y = vec![ZERO; dim];
        for (c, b) in coeffs.iter().zip(&basis) {
            y.iter_mut().zip(b).for_each(|(yi, bi)| *yi += bi * *c);
        }
        orthogonalize(&mut y, locked);
        let ny = norm(&y);
        y.iter_mut().for_each(|x| *x /= ny);
        op.apply(&y, &mut w);
        let value = inner(&y, &w).re;
        let residual = w.iter().zip(&y).map(|(a, b)| (a - b * value).norm_sqr()).sum::<f64>().sqrt();
        best_residual = best_residual.min(residual);
        if residual < params.tol.max(1e-13) * 100.0 * value.abs().max(1.0) {
            return Ok(Eigenpair { value, vector: y, residual, iterations: total });
        }
        if total >= params.max_iterations {
            return Err(Error::Convergence { iterations: total, residual: best_residual });
        }
        q = y;
    }
}
