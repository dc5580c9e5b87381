//! Elementary bounds on the largest adjacency eigenvalue.
//!
//! Every bound is computed from integer degree data and converted to `f64`
//! only at the end.

use serde::{Deserialize, Serialize};

use crate::cube_graph::{check_dimension, HypercubeSubgraph};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    /// `√Δ`: the embedded star `S_Δ` gives `λ₁ ≥ √Δ`.
    pub sqrt_max_degree: f64,
    /// `2m / 2ⁿ`, the average degree.
    pub avg_degree: f64,
    /// `Δ`, the upper end of the sandwich.
    pub max_degree_bound: f64,
    /// `√m`, valid because every cube subgraph is bipartite.
    pub sqrt_edges: f64,
    /// `√(max_v W₂(G, v))`.
    pub walk2_bound: f64,
    /// `√(Δ₁Δ₂)` under the parity 2-coloring.
    pub parity_product_bound: f64,
    /// `max(√Δ, n·p)`.
    pub prediction: f64,
}

impl BoundReport {
    pub fn compute(g: &HypercubeSubgraph, p: f64) -> Self {
        let delta = g.max_degree();
        let (lower_avg, upper) = (average_degree(g), f64::from(delta));
        Self {
            sqrt_max_degree: f64::from(delta).sqrt(),
            avg_degree: lower_avg,
            max_degree_bound: upper,
            sqrt_edges: sqrt_edges_bound(g),
            walk2_bound: (walk2_max(g) as f64).sqrt(),
            parity_product_bound: bipartite_product_bound(g, parity_side)
                .expect("every cube subgraph is bipartite under parity"),
            prediction: spectral_prediction(delta, g.n(), p),
        }
    }

    pub fn lower(&self) -> f64 {
        self.sqrt_max_degree.max(self.avg_degree)
    }
}

fn average_degree(g: &HypercubeSubgraph) -> f64 {
    (2 * g.edge_count()) as f64 / g.num_vertices() as f64
}

/// `(max(√Δ, 2m/2ⁿ), Δ)`.
pub fn sandwich_bounds(g: &HypercubeSubgraph) -> (f64, f64) {
    let delta = g.max_degree();
    let lower = f64::from(delta).sqrt().max(average_degree(g));
    (lower, f64::from(delta))
}

/// Number of length-2 walks from `v`: the sum of its neighbors' degrees.
pub fn walk2(g: &HypercubeSubgraph, v: usize) -> u64 {
    g.neighbors(v).map(|u| u64::from(g.degree_at(u))).sum()
}

pub fn walk2_max(g: &HypercubeSubgraph) -> u64 {
    (0..g.num_vertices())
        .map(|v| walk2(g, v))
        .max()
        .unwrap_or(0)
}

/// Side predicate of the parity coloring: even-weight vertices are `true`.
pub fn parity_side(v: u64) -> bool {
    v.count_ones().is_multiple_of(2)
}

/// `√(Δ₁Δ₂)` where `Δ₁`, `Δ₂` are the maximum degrees on the `true` and
/// `false` sides of `side`. Fails if some edge stays within one side.
pub fn bipartite_product_bound(g: &HypercubeSubgraph, side: impl Fn(u64) -> bool) -> Result<f64> {
    let mut max_true = 0u64;
    let mut max_false = 0u64;
    for v in 0..g.num_vertices() {
        let s = side(v as u64);
        for w in g.neighbors(v) {
            if side(w as u64) == s {
                return Err(Error::SameSideEdge {
                    v: v.min(w) as u64,
                    w: v.max(w) as u64,
                });
            }
        }
        let d = u64::from(g.degree_at(v));
        if s {
            max_true = max_true.max(d);
        } else {
            max_false = max_false.max(d);
        }
    }
    Ok(((max_true * max_false) as f64).sqrt())
}

pub fn sqrt_edges_bound(g: &HypercubeSubgraph) -> f64 {
    (g.edge_count() as f64).sqrt()
}

/// Common neighbors of `u` and `v` in the full cube Qⁿ.
pub fn common_cube_neighbors(u: u64, v: u64, n: u32) -> Result<u32> {
    check_dimension(n)?;
    let limit = 1u64 << n;
    for x in [u, v] {
        if x >= limit {
            return Err(Error::VertexOutOfRange { v: x, n });
        }
    }
    Ok(match (u ^ v).count_ones() {
        0 => n,
        2 => 2,
        _ => 0,
    })
}

/// `max(√Δ, n·p)`.
pub fn spectral_prediction(delta: u32, n: u32, p: f64) -> f64 {
    f64::from(delta).sqrt().max(f64::from(n) * p)
}
