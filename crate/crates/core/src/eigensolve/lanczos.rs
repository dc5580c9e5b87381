use rand::Rng;

use super::tridiag::{eigenvector, largest_eigenvalue};
use super::{SolverConfig, SpectralResult, SymmetricOperator};
use crate::error::Result;
use crate::rng::trial_rng;

/// Second Gram-Schmidt pass kicks in when a pass removes more than this
/// fraction of the vector norm.
const REORTH_ETA: f64 = std::f64::consts::FRAC_1_SQRT_2;

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

/// Positive start vector: all-ones plus uniform noise in `[0, 1)`, normalized.
fn start_vector(dim: usize, seed: u64) -> Vec<f64> {
    let mut rng = trial_rng(seed);
    let mut q: Vec<f64> = (0..dim).map(|_| 1.0 + rng.gen::<f64>()).collect();
    let s = norm(&q);
    q.iter_mut().for_each(|v| *v /= s);
    q
}

/// Ritz vector `V y`.
fn combine(basis: &[Vec<f64>], y: &[f64], dim: usize) -> Vec<f64> {
    let mut x = vec![0.0; dim];
    for (q, &c) in basis.iter().zip(y) {
        axpy(c, q, &mut x);
    }
    let s = norm(&x);
    if s > 0.0 {
        x.iter_mut().for_each(|v| *v /= s);
    }
    x
}

struct Checked {
    lambda: f64,
    residual: f64,
    vector: Vec<f64>,
}

/// Rayleigh quotient and explicit residual of a unit vector.
fn check<A: SymmetricOperator + ?Sized>(op: &A, x: Vec<f64>) -> Checked {
    let mut ax = vec![0.0; x.len()];
    op.apply(&x, &mut ax);
    let lambda = dot(&x, &ax);
    let residual = ax
        .iter()
        .zip(&x)
        .map(|(a, v)| (a - lambda * v).powi(2))
        .sum::<f64>()
        .sqrt();
    Checked {
        lambda,
        residual,
        vector: x,
    }
}

/// Largest eigenvalue of a symmetric operator by Lanczos.
///
/// The basis is fully reorthogonalized (classical Gram-Schmidt, repeated
/// once when cancellation is detected). The largest algebraic eigenvalue of
/// the tridiagonal is located by Sturm bisection every step. Once it moves by
/// less than `tol·max(1, θ)` and the cheap residual estimate `β·|yₖ|` agrees,
/// the Ritz vector is formed and its residual recomputed with the operator;
/// only that explicit check can mark the result converged. When the basis
/// would exceed `basis_memory_bytes` the process restarts from the current
/// Ritz vector. Every operator application counts towards `max_iter`,
/// including residual checks.
pub fn lanczos_largest<A: SymmetricOperator + ?Sized>(
    op: &A,
    config: &SolverConfig,
) -> Result<SpectralResult> {
    config.validate()?;
    let dim = op.dim();
    if dim == 0 || op.is_zero() {
        let vector = config
            .keep_vector
            .then(|| start_vector(dim, config.start_seed));
        return Ok(SpectralResult {
            lambda1: 0.0,
            iterations: 0,
            residual: 0.0,
            converged: true,
            vector,
        });
    }

    let max_basis = (config.basis_memory_bytes / (8 * dim)).clamp(2, config.max_iter.max(2));
    let mut start = start_vector(dim, config.start_seed);
    let mut applications = 0usize;
    let mut best: Option<Checked> = None;
    let mut theta_prev = f64::NAN;

    'restart: loop {
        let mut basis: Vec<Vec<f64>> = vec![start];
        let mut alphas: Vec<f64> = Vec::new();
        let mut betas: Vec<f64> = Vec::new();
        let mut w = vec![0.0; dim];

        loop {
            let j = basis.len() - 1;
            op.apply(&basis[j], &mut w);
            applications += 1;

            let alpha = dot(&w, &basis[j]);
            axpy(-alpha, &basis[j], &mut w);
            if j > 0 {
                axpy(-betas[j - 1], &basis[j - 1], &mut w);
            }
            if config.reorthogonalize {
                for _ in 0..2 {
                    let before = norm(&w);
                    let coeffs: Vec<f64> = basis.iter().map(|q| dot(&w, q)).collect();
                    for (q, c) in basis.iter().zip(&coeffs) {
                        axpy(-c, q, &mut w);
                    }
                    if norm(&w) > REORTH_ETA * before {
                        break;
                    }
                }
            }
            alphas.push(alpha);
            let beta = norm(&w);

            let theta = largest_eigenvalue(&alphas, &betas);
            let scale = config.residual_threshold(theta);
            let breakdown = beta <= 1e-13 * theta.abs().max(1.0);
            let stagnated = (theta - theta_prev).abs() < scale;
            theta_prev = theta;

            let y = if breakdown
                || stagnated
                || applications >= config.max_iter
                || basis.len() >= max_basis
            {
                Some(eigenvector(&alphas, &betas, theta))
            } else {
                None
            };

            if let Some(y) = &y {
                let estimate = beta * y.last().copied().unwrap_or(0.0).abs();
                if breakdown || (stagnated && estimate <= scale) {
                    let checked = check(op, combine(&basis, y, dim));
                    applications += 1;
                    let ok = checked.residual <= config.residual_threshold(checked.lambda);
                    if ok {
                        return Ok(finish(checked, applications, true, config));
                    }
                    keep_best(&mut best, checked);
                }
                if applications >= config.max_iter {
                    let checked = check(op, combine(&basis, y, dim));
                    keep_best(&mut best, checked);
                    let best = best.take().expect("at least one candidate");
                    let ok = best.residual <= config.residual_threshold(best.lambda);
                    return Ok(finish(best, applications, ok, config));
                }
                if breakdown || basis.len() >= max_basis {
                    start = combine(&basis, y, dim);
                    continue 'restart;
                }
            }

            betas.push(beta);
            let mut next = std::mem::replace(&mut w, vec![0.0; dim]);
            next.iter_mut().for_each(|v| *v /= beta);
            basis.push(next);
        }
    }
}

fn keep_best(best: &mut Option<Checked>, candidate: Checked) {
    let replace = match best {
        None => true,
        Some(b) => candidate.residual < b.residual,
    };
    if replace {
        *best = Some(candidate);
    }
}

fn finish(c: Checked, iterations: usize, converged: bool, config: &SolverConfig) -> SpectralResult {
    SpectralResult {
        lambda1: c.lambda,
        iterations,
        residual: c.residual,
        converged,
        vector: config.keep_vector.then_some(c.vector),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cube_graph::{sample_subgraph, HypercubeSubgraph, SampleParams};
    use crate::eigensolve::{dense_spectrum, lanczos_lambda1, residual_norm};

    #[test]
    fn full_cube_is_regular() {
        for n in 1..=12 {
            let q = HypercubeSubgraph::full_cube(n).unwrap();
            let r = lanczos_lambda1(&q, &SolverConfig::default()).unwrap();
            assert!(r.converged);
            assert!((r.lambda1 - n as f64).abs() < 1e-9, "n={n}: {}", r.lambda1);
        }
    }

    #[test]
    fn empty_graph_short_circuits() {
        let e = HypercubeSubgraph::empty(6).unwrap();
        let r = lanczos_lambda1(&e, &SolverConfig::default()).unwrap();
        assert_eq!(r.lambda1, 0.0);
        assert!(r.converged);
        assert_eq!(r.iterations, 0);
    }

    #[test]
    fn star_at_origin() {
        let edges: Vec<(u64, u64)> = (0..5).map(|i| (0, 1 << i)).collect();
        let g = HypercubeSubgraph::from_edge_list(5, &edges).unwrap();
        let r = lanczos_lambda1(&g, &SolverConfig::default()).unwrap();
        assert!(r.converged);
        assert!((r.lambda1 - 5f64.sqrt()).abs() < 1e-10);
    }

    #[test]
    fn agrees_with_dense_oracle() {
        for n in 1..=5 {
            for (k, &p) in [0.2, 0.5, 0.8].iter().enumerate() {
                for t in 0..10 {
                    let g = sample_subgraph(&SampleParams::new(n, p, 77, (k * 100 + t) as u64))
                        .unwrap();
                    let dense = dense_spectrum(&g).unwrap()[0];
                    let r = lanczos_lambda1(&g, &SolverConfig::default()).unwrap();
                    assert!(r.converged);
                    assert!((r.lambda1 - dense).abs() < 1e-8, "n={n} p={p} t={t}");
                }
            }
        }
    }

    #[test]
    fn residual_contract_recomputed() {
        let g = sample_subgraph(&SampleParams::new(12, 0.3, 1, 0)).unwrap();
        let cfg = SolverConfig {
            keep_vector: true,
            ..SolverConfig::default()
        };
        let r = lanczos_lambda1(&g, &cfg).unwrap();
        assert!(r.converged);
        let x = r.vector.as_ref().unwrap();
        let nx: f64 = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        assert!((nx - 1.0).abs() < 1e-12);
        let res = residual_norm(&g, x, r.lambda1);
        assert!(res <= cfg.tol * r.lambda1.max(1.0));
    }

    #[test]
    fn restarts_under_tight_memory() {
        let g = sample_subgraph(&SampleParams::new(12, 0.5, 9, 0)).unwrap();
        let free = lanczos_lambda1(&g, &SolverConfig::default()).unwrap();
        let tight = SolverConfig {
            basis_memory_bytes: 8 * 4096 * 12,
            ..SolverConfig::default()
        };
        let r = lanczos_lambda1(&g, &tight).unwrap();
        assert!(r.converged);
        assert!((r.lambda1 - free.lambda1).abs() < 1e-9);
    }

    #[test]
    fn non_convergence_is_reported() {
        let g = sample_subgraph(&SampleParams::new(10, 0.5, 2, 0)).unwrap();
        let cfg = SolverConfig {
            max_iter: 3,
            ..SolverConfig::default()
        };
        let r = lanczos_lambda1(&g, &cfg).unwrap();
        assert!(!r.converged);
        assert!(r.lambda1 > 0.0 && r.residual > 0.0);
    }
}
