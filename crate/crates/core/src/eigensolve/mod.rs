//! Largest adjacency eigenvalue, matrix-free.
//!
//! For an undirected graph the largest eigenvalue equals the spectral norm of
//! the adjacency matrix, and every subgraph of the cube is bipartite so the
//! spectrum is symmetric about zero. [`lanczos_lambda1`] extracts the largest
//! *algebraic* Ritz value from the Lanczos tridiagonal, which is `+λ₁` even
//! though `-λ₁` has the same magnitude. [`dense_spectrum`] is the dense
//! oracle for small instances.

mod jacobi;
mod lanczos;
mod tridiag;

use serde::{Deserialize, Serialize};

use crate::cube_graph::{Directions, HypercubeSubgraph};
use crate::error::{Error, Result};

pub use jacobi::{jacobi_eigenvalues, JACOBI_OFF_DIAGONAL_TOL};
pub use lanczos::lanczos_largest;

/// Largest `n` accepted by [`dense_spectrum`] (matrix order 1024).
pub const DENSE_MAX_DIMENSION: u32 = 10;

/// A symmetric operator applied without materializing its matrix.
pub trait SymmetricOperator: Sync {
    fn dim(&self) -> usize;

    /// `y = A x`. Both slices have length [`dim`](Self::dim).
    fn apply(&self, x: &[f64], y: &mut [f64]);

    /// True when the operator is identically zero.
    fn is_zero(&self) -> bool;
}

impl SymmetricOperator for HypercubeSubgraph {
    fn dim(&self) -> usize {
        self.num_vertices()
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        for (v, (out, &mask)) in y.iter_mut().zip(self.masks()).enumerate() {
            let mut acc = 0.0;
            for dir in Directions(mask) {
                acc += x[v ^ (1 << dir)];
            }
            *out = acc;
        }
    }

    fn is_zero(&self) -> bool {
        self.edge_count() == 0
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolverConfig {
    /// Relative convergence tolerance.
    pub tol: f64,
    /// Cap on operator applications.
    pub max_iter: usize,
    pub start_seed: u64,
    pub reorthogonalize: bool,
    /// Return the Ritz vector in [`SpectralResult::vector`].
    pub keep_vector: bool,
    /// Memory allowed for the Krylov basis; Lanczos restarts from the current
    /// Ritz vector when the basis would exceed it.
    pub basis_memory_bytes: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            max_iter: 500,
            start_seed: 0,
            reorthogonalize: true,
            keep_vector: false,
            basis_memory_bytes: 1 << 30,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if !self.tol.is_finite() || self.tol <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "tol must be positive, got {}",
                self.tol
            )));
        }
        if self.max_iter == 0 {
            return Err(Error::InvalidParameter("max_iter must be >= 1".into()));
        }
        Ok(())
    }

    /// Residual threshold implied by the tolerance at eigenvalue `lambda`.
    pub fn residual_threshold(&self, lambda: f64) -> f64 {
        self.tol * lambda.abs().max(1.0)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralResult {
    pub lambda1: f64,
    pub iterations: usize,
    /// `‖A x − λ₁ x‖₂` for the returned unit Ritz vector.
    pub residual: f64,
    pub converged: bool,
    #[serde(skip)]
    pub vector: Option<Vec<f64>>,
}

/// `y = A x` for the adjacency matrix of `g`.
///
/// Each `y[v]` sums `x[v ^ 2^i]` over present directions in ascending `i`.
pub fn matvec(g: &HypercubeSubgraph, x: &[f64]) -> Result<Vec<f64>> {
    if x.len() != g.num_vertices() {
        return Err(Error::LengthMismatch {
            expected: g.num_vertices(),
            got: x.len(),
        });
    }
    let mut y = vec![0.0; x.len()];
    g.apply(x, &mut y);
    Ok(y)
}

/// Largest adjacency eigenvalue of `g` by Lanczos.
pub fn lanczos_lambda1(g: &HypercubeSubgraph, config: &SolverConfig) -> Result<SpectralResult> {
    lanczos_largest(g, config)
}

/// Residual `‖A x − θ x‖₂` recomputed from scratch.
pub fn residual_norm<A: SymmetricOperator + ?Sized>(op: &A, x: &[f64], theta: f64) -> f64 {
    let mut y = vec![0.0; x.len()];
    op.apply(x, &mut y);
    y.iter()
        .zip(x)
        .map(|(ay, xi)| {
            let r = ay - theta * xi;
            r * r
        })
        .sum::<f64>()
        .sqrt()
}

/// Dense adjacency matrix, row-major.
pub fn dense_adjacency(g: &HypercubeSubgraph) -> Vec<f64> {
    let dim = g.num_vertices();
    let mut a = vec![0.0; dim * dim];
    for v in 0..dim {
        for w in g.neighbors(v) {
            a[v * dim + w] = 1.0;
        }
    }
    a
}

/// Full adjacency spectrum in non-increasing order (cyclic Jacobi).
pub fn dense_spectrum(g: &HypercubeSubgraph) -> Result<Vec<f64>> {
    if g.n() > DENSE_MAX_DIMENSION {
        return Err(Error::DenseTooLarge {
            n: g.n(),
            max: DENSE_MAX_DIMENSION,
        });
    }
    let mut eig = jacobi_eigenvalues(dense_adjacency(g), g.num_vertices());
    eig.sort_by(|a, b| b.total_cmp(a));
    Ok(eig)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cube_graph::{sample_subgraph, SampleParams};

    #[test]
    fn matvec_regular_and_empty() {
        let q = HypercubeSubgraph::full_cube(6).unwrap();
        let y = matvec(&q, &vec![1.0; 64]).unwrap();
        assert!(y.iter().all(|&v| v == 6.0));
        let e = HypercubeSubgraph::empty(4).unwrap();
        let x: Vec<f64> = (0..16).map(|i| i as f64 - 3.5).collect();
        assert!(matvec(&e, &x).unwrap().iter().all(|&v| v == 0.0));
        assert!(matches!(
            matvec(&e, &[1.0; 3]),
            Err(Error::LengthMismatch {
                expected: 16,
                got: 3
            })
        ));
    }

    #[test]
    fn matvec_matches_dense_product() {
        let g = sample_subgraph(&SampleParams::new(3, 0.5, 42, 0)).unwrap();
        let a = dense_adjacency(&g);
        let x: Vec<f64> = (0..8).map(|i| (i as f64 * 0.7).sin()).collect();
        let y = matvec(&g, &x).unwrap();
        for r in 0..8 {
            let want: f64 = (0..8).map(|c| a[r * 8 + c] * x[c]).sum();
            assert!((y[r] - want).abs() < 1e-15);
        }
    }

    #[test]
    fn dense_spectrum_small_cases() {
        let q2 = HypercubeSubgraph::full_cube(2).unwrap();
        let s = dense_spectrum(&q2).unwrap();
        for (got, want) in s.iter().zip([2.0, 0.0, 0.0, -2.0]) {
            assert!((got - want).abs() < 1e-12, "{s:?}");
        }
        let edge = HypercubeSubgraph::full_cube(1).unwrap();
        let s = dense_spectrum(&edge).unwrap();
        assert!((s[0] - 1.0).abs() < 1e-12 && (s[1] + 1.0).abs() < 1e-12);
        assert!(matches!(
            dense_spectrum(&HypercubeSubgraph::empty(11).unwrap()),
            Err(Error::DenseTooLarge { .. })
        ));
    }

    #[test]
    fn config_validation() {
        assert!(SolverConfig::default().validate().is_ok());
        let bad = SolverConfig {
            tol: 0.0,
            ..SolverConfig::default()
        };
        assert!(bad.validate().is_err());
        let bad = SolverConfig {
            max_iter: 0,
            ..SolverConfig::default()
        };
        assert!(bad.validate().is_err());
    }
}
