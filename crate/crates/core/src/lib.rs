//! Largest-eigenvalue toolkit for random subgraphs of the n-cube.
//!
//! Graphs are sampled deterministically from `(master_seed, n, p, trial)`,
//! their largest adjacency eigenvalue is computed matrix-free, and the
//! classical eigenvalue bounds, maximum-degree statistics and component
//! structure are exposed as separate, testable operations. The
//! [`experiment`] module ties them into a reproducible Monte Carlo harness.

pub mod components;
pub mod cube_graph;
pub mod degree_theory;
pub mod eigensolve;
pub mod error;
pub mod experiment;
pub mod locality;
pub mod rng;
pub mod spectral_bounds;
pub mod thresholds;
pub mod verify;

pub use cube_graph::{sample_subgraph, HypercubeSubgraph, SampleParams};
pub use eigensolve::{lanczos_lambda1, SolverConfig, SpectralResult};
pub use error::{Error, Result};
