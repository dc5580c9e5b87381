//! Connected components and the very sparse regime.
//!
//! In the sparsest regime every component is small, λ₁ is the maximum over
//! components, and a `k`-edge component has λ₁ ≤ √k with equality only for a
//! star. This module builds the census and checks those facts directly.

use std::collections::BTreeMap;

use bitvec::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cube_graph::{check_probability, HypercubeSubgraph};
use crate::eigensolve::{jacobi_eigenvalues, lanczos_largest, SolverConfig, SymmetricOperator};
use crate::error::Result;

/// Components with at most this many vertices use the dense Jacobi solver.
pub const DENSE_COMPONENT_LIMIT: usize = 64;

/// Tolerance for `λ₁² ∈ {Δ, Δ+1}`.
pub const CASE4_SQUARE_TOL: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    /// Vertices in ascending order.
    pub vertices: Vec<u32>,
    pub edges: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentCensus {
    /// Ordered by smallest vertex.
    pub components: Vec<Component>,
    /// `k ↦ Y_k`, the number of components with exactly `k` edges.
    pub yk: BTreeMap<u64, u64>,
    pub largest_component_edges: u64,
}

/// Breadth-first census over present edges. Isolated vertices are
/// components with no edges.
pub fn connected_components(g: &HypercubeSubgraph) -> ComponentCensus {
    let total = g.num_vertices();
    let mut visited = bitvec![0; total];
    let mut components = Vec::new();
    let mut yk = BTreeMap::new();
    let mut largest = 0;
    for root in 0..total {
        if visited[root] {
            continue;
        }
        visited.set(root, true);
        // The vertex list doubles as the BFS queue.
        let mut vertices = vec![root as u32];
        let mut head = 0;
        let mut degree_sum = 0u64;
        while head < vertices.len() {
            let v = vertices[head] as usize;
            head += 1;
            degree_sum += u64::from(g.degree_at(v));
            for w in g.neighbors(v) {
                if !visited[w] {
                    visited.set(w, true);
                    vertices.push(w as u32);
                }
            }
        }
        vertices.sort_unstable();
        let edges = degree_sum / 2;
        *yk.entry(edges).or_insert(0) += 1;
        largest = largest.max(edges);
        components.push(Component { vertices, edges });
    }
    ComponentCensus {
        components,
        yk,
        largest_component_edges: largest,
    }
}

/// Adjacency of one component with vertices re-indexed to `0..len`.
pub struct ComponentOperator {
    offsets: Vec<usize>,
    targets: Vec<u32>,
}

impl ComponentOperator {
    pub fn new(g: &HypercubeSubgraph, comp: &Component) -> Self {
        let mut offsets = Vec::with_capacity(comp.vertices.len() + 1);
        let mut targets = Vec::with_capacity(2 * comp.edges as usize);
        offsets.push(0);
        for &v in &comp.vertices {
            for w in g.neighbors(v as usize) {
                let idx = comp
                    .vertices
                    .binary_search(&(w as u32))
                    .expect("neighbor lies in the same component");
                targets.push(idx as u32);
            }
            offsets.push(targets.len());
        }
        Self { offsets, targets }
    }

    pub fn dense(&self) -> Vec<f64> {
        let dim = self.dim();
        let mut a = vec![0.0; dim * dim];
        for r in 0..dim {
            for &c in &self.targets[self.offsets[r]..self.offsets[r + 1]] {
                a[r * dim + c as usize] = 1.0;
            }
        }
        a
    }
}

impl SymmetricOperator for ComponentOperator {
    fn dim(&self) -> usize {
        self.offsets.len() - 1
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        for (r, out) in y.iter_mut().enumerate() {
            *out = self.targets[self.offsets[r]..self.offsets[r + 1]]
                .iter()
                .map(|&c| x[c as usize])
                .sum();
        }
    }

    fn is_zero(&self) -> bool {
        self.targets.is_empty()
    }
}

/// Largest eigenvalue of one component.
pub fn component_lambda1(
    g: &HypercubeSubgraph,
    comp: &Component,
    config: &SolverConfig,
) -> Result<f64> {
    match comp.edges {
        0 => return Ok(0.0),
        1 => return Ok(1.0),
        _ => {}
    }
    let op = ComponentOperator::new(g, comp);
    if comp.vertices.len() <= DENSE_COMPONENT_LIMIT {
        let eig = jacobi_eigenvalues(op.dense(), op.dim());
        Ok(eig.into_iter().fold(f64::NEG_INFINITY, f64::max))
    } else {
        Ok(lanczos_largest(&op, config)?.lambda1)
    }
}

/// λ₁ of every component, in census order.
pub fn per_component_lambda1(
    g: &HypercubeSubgraph,
    census: &ComponentCensus,
    config: &SolverConfig,
) -> Result<Vec<f64>> {
    census
        .components
        .iter()
        .map(|c| component_lambda1(g, c, config))
        .collect()
}

/// `2ⁿ·k!·nᵏ·pᵏ`, the majorant of `E[Y_k]` with its constant set to 1.
pub fn expected_yk_upper(n: u32, p: f64, k: u64) -> Result<f64> {
    check_probability(p)?;
    if p == 0.0 {
        return Ok(0.0);
    }
    let nf = f64::from(n);
    let ln_fact: f64 = (2..=k).map(|i| (i as f64).ln()).sum();
    let ln = nf * std::f64::consts::LN_2 + ln_fact + k as f64 * (nf.ln() + p.ln());
    Ok(ln.exp())
}

/// True iff the component is a star `S_k`: `k + 1` vertices, one of degree
/// `k`, the rest of degree 1. An isolated vertex counts as `S_0`.
pub fn is_star(g: &HypercubeSubgraph, comp: &Component) -> bool {
    let k = comp.edges;
    if comp.vertices.len() as u64 != k + 1 {
        return false;
    }
    if k <= 1 {
        return true;
    }
    let mut centers = 0;
    for &v in &comp.vertices {
        match u64::from(g.degree_at(v as usize)) {
            1 => {}
            d if d == k => centers += 1,
            _ => return false,
        }
    }
    centers == 1
}

impl ComponentCensus {
    /// Fraction of components with at least one edge that are stars.
    pub fn star_fraction(&self, g: &HypercubeSubgraph) -> Option<f64> {
        let nontrivial: Vec<&Component> = self.components.iter().filter(|c| c.edges > 0).collect();
        if nontrivial.is_empty() {
            return None;
        }
        let stars = nontrivial.iter().filter(|c| is_star(g, c)).count();
        Some(stars as f64 / nontrivial.len() as f64)
    }
}

/// `κ + κ/ln κ`, the component-size cutoff of the sparse regime (κ ≥ 2).
pub fn k0_cutoff(kappa: u32) -> Option<f64> {
    (kappa >= 2).then(|| {
        let k = f64::from(kappa);
        k + k / k.ln()
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Case4Report {
    pub lambda1: f64,
    pub max_degree: u32,
    /// `λ₁² ∈ {Δ, Δ+1}` within [`CASE4_SQUARE_TOL`].
    pub lambda_sq_matches: bool,
    pub largest_component_edges: u64,
    /// Whether a component attaining λ₁ is a star.
    pub achieving_component_is_star: bool,
}

pub fn case4_shape_check(
    g: &HypercubeSubgraph,
    census: &ComponentCensus,
    lambda1: f64,
    config: &SolverConfig,
) -> Result<Case4Report> {
    let delta = g.max_degree();
    let sq = lambda1 * lambda1;
    let d = f64::from(delta);
    let lambda_sq_matches =
        (sq - d).abs() <= CASE4_SQUARE_TOL || (sq - d - 1.0).abs() <= CASE4_SQUARE_TOL;
    let lambdas = per_component_lambda1(g, census, config)?;
    let achieving = lambdas
        .iter()
        .enumerate()
        .fold(None::<(usize, f64)>, |best, (i, &l)| match best {
            Some((_, bl)) if bl >= l => best,
            _ => Some((i, l)),
        })
        .map(|(i, _)| i);
    let achieving_component_is_star = achieving.is_some_and(|i| is_star(g, &census.components[i]));
    Ok(Case4Report {
        lambda1,
        max_degree: delta,
        lambda_sq_matches,
        largest_component_edges: census.largest_component_edges,
        achieving_component_is_star,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cube_graph::{sample_subgraph, SampleParams};
    use crate::eigensolve::lanczos_lambda1;

    fn graph(n: u32, edges: &[(u64, u64)]) -> HypercubeSubgraph {
        HypercubeSubgraph::from_edge_list(n, edges).unwrap()
    }

    fn star_edges(center: u64, dirs: &[u32]) -> Vec<(u64, u64)> {
        dirs.iter()
            .map(|&i| {
                let w = center ^ (1 << i);
                (center.min(w), center.max(w))
            })
            .collect()
    }

    #[test]
    fn census_examples() {
        let c = connected_components(&HypercubeSubgraph::empty(2).unwrap());
        assert_eq!(c.components.len(), 4);
        assert_eq!(c.yk, BTreeMap::from([(0, 4)]));

        let c = connected_components(&HypercubeSubgraph::full_cube(3).unwrap());
        assert_eq!(c.components.len(), 1);
        assert_eq!(c.largest_component_edges, 12);

        let g = graph(5, &[(4, 6)]);
        let c = connected_components(&g);
        assert_eq!(c.yk, BTreeMap::from([(0, 30), (1, 1)]));
        assert_eq!(c.components[4].vertices, vec![4, 6]);
    }

    #[test]
    fn census_partitions_vertices() {
        for (t, p) in [0.05, 0.2, 0.5].into_iter().enumerate() {
            let g = sample_subgraph(&SampleParams::new(10, p, 4, t as u64)).unwrap();
            let c = connected_components(&g);
            let mut all: Vec<u32> = c
                .components
                .iter()
                .flat_map(|c| c.vertices.clone())
                .collect();
            all.sort_unstable();
            assert_eq!(all, (0..1024).collect::<Vec<u32>>());
            assert_eq!(
                c.components.iter().map(|c| c.edges).sum::<u64>(),
                g.edge_count()
            );
            assert_eq!(c.yk.values().sum::<u64>(), c.components.len() as u64);
            let firsts: Vec<u32> = c.components.iter().map(|c| c.vertices[0]).collect();
            assert!(firsts.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn two_disjoint_stars() {
        // S_3 centred at 0 and S_5 centred at 63 in Q⁶ do not touch.
        let mut edges = star_edges(0, &[0, 1, 2]);
        edges.extend(star_edges(63, &[0, 1, 2, 3, 4]));
        edges.sort();
        let g = graph(6, &edges);
        let census = connected_components(&g);
        let cfg = SolverConfig::default();
        let mut lambdas: Vec<f64> = per_component_lambda1(&g, &census, &cfg)
            .unwrap()
            .into_iter()
            .filter(|&l| l > 0.0)
            .collect();
        lambdas.sort_by(f64::total_cmp);
        assert!((lambdas[0] - 3f64.sqrt()).abs() < 1e-10);
        assert!((lambdas[1] - 5f64.sqrt()).abs() < 1e-10);
        let global = lanczos_lambda1(&g, &cfg).unwrap().lambda1;
        assert!((global - 5f64.sqrt()).abs() < 1e-10);
    }

    #[test]
    fn single_component_matches_global() {
        let g = HypercubeSubgraph::full_cube(4).unwrap();
        let census = connected_components(&g);
        let l = per_component_lambda1(&g, &census, &SolverConfig::default()).unwrap();
        assert_eq!(l.len(), 1);
        assert!((l[0] - 4.0).abs() < 1e-10);
    }

    #[test]
    fn sparse_graph_cross_solver() {
        let g = sample_subgraph(&SampleParams::new(12, 2f64.powi(-10), 3, 0)).unwrap();
        let census = connected_components(&g);
        let cfg = SolverConfig::default();
        let max = per_component_lambda1(&g, &census, &cfg)
            .unwrap()
            .into_iter()
            .fold(0.0, f64::max);
        let global = lanczos_lambda1(&g, &cfg).unwrap().lambda1;
        assert!((max - global).abs() <= 1e-8);
    }

    #[test]
    fn restricted_lanczos_for_large_component() {
        let g = HypercubeSubgraph::full_cube(11).unwrap();
        let census = connected_components(&g);
        assert!(census.components[0].vertices.len() > DENSE_COMPONENT_LIMIT);
        let l = component_lambda1(&g, &census.components[0], &SolverConfig::default()).unwrap();
        assert!((l - 11.0).abs() < 1e-8);
    }

    #[test]
    fn yk_majorant_examples() {
        assert!((expected_yk_upper(3, 0.5, 1).unwrap() - 12.0).abs() < 1e-12);
        assert_eq!(expected_yk_upper(8, 0.0, 3).unwrap(), 0.0);
        // k = 3: 2^4 · 6 · 4^3 · 0.1^3
        assert!((expected_yk_upper(4, 0.1, 3).unwrap() - 6.144).abs() < 1e-10);
    }

    #[test]
    fn star_detection() {
        let one = graph(3, &[(0, 1)]);
        let c = connected_components(&one);
        assert!(is_star(&one, &c.components[0]));

        let path2 = graph(3, &[(0, 1), (1, 3)]);
        let c = connected_components(&path2);
        assert!(is_star(&path2, &c.components[0]));

        let path3 = graph(3, &[(0, 1), (1, 3), (3, 7)]);
        let c = connected_components(&path3);
        assert!(!is_star(&path3, &c.components[0]));

        let c4 = HypercubeSubgraph::full_cube(2).unwrap();
        let c = connected_components(&c4);
        assert!(!is_star(&c4, &c.components[0]));
    }

    #[test]
    fn case4_examples() {
        let cfg = SolverConfig::default();
        let mut edges = star_edges(0, &[0, 1, 2, 3]);
        edges.extend(star_edges(0b111111, &[0, 1]));
        edges.sort();
        let stars = graph(6, &edges);
        let census = connected_components(&stars);
        let l = lanczos_lambda1(&stars, &cfg).unwrap().lambda1;
        let rep = case4_shape_check(&stars, &census, l, &cfg).unwrap();
        assert!(rep.lambda_sq_matches && rep.achieving_component_is_star);
        assert!((l - 2.0).abs() < 1e-10);

        let path3 = graph(4, &[(0, 1), (1, 3), (3, 7)]);
        let census = connected_components(&path3);
        let l = lanczos_lambda1(&path3, &cfg).unwrap().lambda1;
        let golden = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((l - golden).abs() < 1e-10);
        let rep = case4_shape_check(&path3, &census, l, &cfg).unwrap();
        assert!(!rep.lambda_sq_matches);
        assert_eq!(rep.max_degree, 2);
        assert_eq!(rep.largest_component_edges, 3);
        assert!(!rep.achieving_component_is_star);

        let empty = HypercubeSubgraph::empty(4).unwrap();
        let census = connected_components(&empty);
        let rep = case4_shape_check(&empty, &census, 0.0, &cfg).unwrap();
        assert!(rep.lambda_sq_matches);
        assert_eq!(rep.max_degree, 0);
    }

    #[test]
    fn component_bound_sqrt_k_with_equality_iff_star() {
        for t in 0..20 {
            let g = sample_subgraph(&SampleParams::new(9, 0.08, 12, t)).unwrap();
            let census = connected_components(&g);
            let lambdas = per_component_lambda1(&g, &census, &SolverConfig::default()).unwrap();
            for (comp, l) in census.components.iter().zip(lambdas) {
                let root = (comp.edges as f64).sqrt();
                assert!(l <= root + 1e-9);
                assert_eq!((l - root).abs() <= 1e-9, is_star(&g, comp), "{comp:?}");
            }
        }
    }

    #[test]
    fn k0_values() {
        assert_eq!(k0_cutoff(1), None);
        assert!((k0_cutoff(10).unwrap() - (10.0 + 10.0 / 10f64.ln())).abs() < 1e-12);
    }
}
