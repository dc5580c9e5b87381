//! Clustering of high-degree vertices in cube neighbourhoods.
//!
//! For each vertex `v` we count the vertices `u ≠ v` at cube distance one or
//! two whose degree in `G` reaches a threshold. Distance is bit-flip distance
//! in Qⁿ, not graph distance in `G`.

use bitvec::prelude::*;
use rand::seq::index::sample;
use serde::{Deserialize, Serialize};

use crate::cube_graph::{check_probability, HypercubeSubgraph};
use crate::error::{Error, Result};
use crate::rng::trial_rng;

/// Size of the distance-{1,2} ball around a vertex, `n + n(n−1)/2`.
pub fn ball_size(n: u32) -> u32 {
    n + n * n.saturating_sub(1) / 2
}

fn high_flags(g: &HypercubeSubgraph, threshold: u32) -> BitVec {
    (0..g.num_vertices())
        .map(|v| g.degree_at(v) >= threshold)
        .collect()
}

fn count_in_ball(n: u32, high: &BitSlice, v: usize) -> u32 {
    let mut count = 0;
    for i in 0..n {
        let u = v ^ (1 << i);
        count += u32::from(high[u]);
        for j in i + 1..n {
            count += u32::from(high[u ^ (1 << j)]);
        }
    }
    count
}

/// Number of `u ≠ v` with cube distance 1 or 2 from `v` and
/// `degree(u) ≥ threshold`.
pub fn high_degree_near(g: &HypercubeSubgraph, v: u64, threshold: u32) -> Result<u32> {
    let v = g.check_vertex(v)?;
    let n = g.n();
    let mut count = 0;
    for i in 0..n {
        let u = v ^ (1 << i);
        count += u32::from(g.degree_at(u) >= threshold);
        for j in i + 1..n {
            count += u32::from(g.degree_at(u ^ (1 << j)) >= threshold);
        }
    }
    Ok(count)
}

/// Which vertices `v` a statistic is maximized over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum VertexScan {
    All,
    /// Uniform sample of distinct vertices, drawn from `seed`.
    Sample {
        count: u64,
        seed: u64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClusterMax {
    pub max_cluster: u32,
    /// Smallest scanned vertex attaining `max_cluster`.
    pub argmax_vertex: u64,
    pub vertices_scanned: u64,
}

/// Maximum of [`high_degree_near`] over the scanned vertices.
pub fn max_cluster(g: &HypercubeSubgraph, threshold: u32, scan: VertexScan) -> ClusterMax {
    let high = high_flags(g, threshold);
    let n = g.n();
    let mut best = ClusterMax {
        max_cluster: 0,
        argmax_vertex: 0,
        vertices_scanned: 0,
    };
    let visit = |v: usize, best: &mut ClusterMax| {
        let c = count_in_ball(n, &high, v);
        let better = best.vertices_scanned == 0
            || c > best.max_cluster
            || (c == best.max_cluster && (v as u64) < best.argmax_vertex);
        if better {
            best.max_cluster = c;
            best.argmax_vertex = v as u64;
        }
        best.vertices_scanned += 1;
    };
    let total = g.num_vertices();
    match scan {
        VertexScan::All => (0..total).for_each(|v| visit(v, &mut best)),
        VertexScan::Sample { count, seed } => {
            let amount = (count as usize).min(total);
            let mut rng = trial_rng(seed);
            let mut picked = sample(&mut rng, total, amount).into_vec();
            picked.sort_unstable();
            picked.into_iter().for_each(|v| visit(v, &mut best));
        }
    }
    best
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LocalityMode {
    /// Threshold `⌈nᵇ⌉`, conclusion `max_cluster < nᵃ`.
    I,
    /// Threshold `⌈np + np/ln n⌉`, conclusion `max_cluster < nᵃ/p`.
    Ii,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LocalityReport {
    pub mode: LocalityMode,
    pub n: u32,
    pub p: f64,
    pub a: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub b: Option<f64>,
    pub threshold: u32,
    pub max_cluster: u32,
    pub argmax_vertex: u64,
    pub vertices_scanned: u64,
    /// Right-hand side of the conclusion, `nᵃ` or `nᵃ/p`.
    pub bound: f64,
    pub conclusion_holds: bool,
    /// `a + b > 1` (mode I).
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub hyp_exponent_sum: Option<bool>,
    /// `nᵇ ≥ 6np` (mode I).
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub hyp_threshold_vs_mean: Option<bool>,
    /// `p ≥ n^{−2/3}` (mode II).
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub hyp_density: Option<bool>,
}

impl LocalityReport {
    /// All recorded hypotheses hold.
    pub fn hypotheses_hold(&self) -> bool {
        [
            self.hyp_exponent_sum,
            self.hyp_threshold_vs_mean,
            self.hyp_density,
        ]
        .into_iter()
        .flatten()
        .all(|h| h)
    }
}

fn check_exponent(name: &str, x: f64) -> Result<()> {
    if x.is_finite() && x > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "{name} must be positive, got {x}"
        )))
    }
}

/// Real threshold to integer degree cutoff; values beyond `n` saturate at
/// `n + 1`, which no degree reaches.
fn degree_cutoff(n: u32, x: f64) -> u32 {
    let c = x.ceil();
    if c > f64::from(n + 1) {
        n + 1
    } else {
        c.max(0.0) as u32
    }
}

/// Mode I statistic for a graph drawn with edge probability `p`.
pub fn cluster_stat_i(
    g: &HypercubeSubgraph,
    p: f64,
    a: f64,
    b: f64,
    scan: VertexScan,
) -> Result<LocalityReport> {
    check_probability(p)?;
    check_exponent("a", a)?;
    check_exponent("b", b)?;
    let n = g.n();
    let nf = f64::from(n);
    let nb = nf.powf(b);
    let threshold = degree_cutoff(n, nb);
    let m = max_cluster(g, threshold, scan);
    let bound = nf.powf(a);
    Ok(LocalityReport {
        mode: LocalityMode::I,
        n,
        p,
        a,
        b: Some(b),
        threshold,
        max_cluster: m.max_cluster,
        argmax_vertex: m.argmax_vertex,
        vertices_scanned: m.vertices_scanned,
        bound,
        conclusion_holds: f64::from(m.max_cluster) < bound,
        hyp_exponent_sum: Some(a + b > 1.0),
        hyp_threshold_vs_mean: Some(nb >= 6.0 * nf * p),
        hyp_density: None,
    })
}

/// `⌈np + np/ln n⌉`.
pub fn cluster_ii_threshold(n: u32, p: f64) -> Result<u32> {
    check_probability(p)?;
    if p == 0.0 {
        return Err(Error::InvalidParameter("mode ii needs p > 0".into()));
    }
    if n < 2 {
        return Err(Error::InvalidParameter("mode ii needs n ≥ 2".into()));
    }
    let np = f64::from(n) * p;
    Ok(degree_cutoff(n, np + np / f64::from(n).ln()))
}

/// Mode II statistic for a graph drawn with edge probability `p`.
pub fn cluster_stat_ii(
    g: &HypercubeSubgraph,
    p: f64,
    a: f64,
    scan: VertexScan,
) -> Result<LocalityReport> {
    check_exponent("a", a)?;
    let n = g.n();
    let threshold = cluster_ii_threshold(n, p)?;
    let m = max_cluster(g, threshold, scan);
    let nf = f64::from(n);
    let bound = nf.powf(a) / p;
    Ok(LocalityReport {
        mode: LocalityMode::Ii,
        n,
        p,
        a,
        b: None,
        threshold,
        max_cluster: m.max_cluster,
        argmax_vertex: m.argmax_vertex,
        vertices_scanned: m.vertices_scanned,
        bound,
        conclusion_holds: f64::from(m.max_cluster) < bound,
        hyp_exponent_sum: None,
        hyp_threshold_vs_mean: None,
        hyp_density: Some(p >= nf.powf(-2.0 / 3.0)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cube_graph::{sample_subgraph, SampleParams};

    /// Degree table from the edge list and Hamming distance by popcount.
    fn brute(g: &HypercubeSubgraph, v: u64, threshold: u32) -> u32 {
        let mut deg = vec![0u32; g.num_vertices()];
        for (a, b) in g.to_edge_list() {
            deg[a as usize] += 1;
            deg[b as usize] += 1;
        }
        (0..g.num_vertices() as u64)
            .filter(|&u| matches!((u ^ v).count_ones(), 1 | 2))
            .filter(|&u| deg[u as usize] >= threshold)
            .count() as u32
    }

    #[test]
    fn full_cube_ball() {
        for n in 1..=8 {
            let q = HypercubeSubgraph::full_cube(n).unwrap();
            assert_eq!(high_degree_near(&q, 0, n).unwrap(), ball_size(n));
            assert_eq!(high_degree_near(&q, 3 % (1 << n), n + 1).unwrap(), 0);
        }
        let q = HypercubeSubgraph::full_cube(4).unwrap();
        assert!(high_degree_near(&q, 16, 0).is_err());
    }

    #[test]
    fn matches_degree_table_oracle() {
        let g = sample_subgraph(&SampleParams::new(8, 0.5, 21, 0)).unwrap();
        for v in 0..256 {
            for t in 0..=9 {
                assert_eq!(high_degree_near(&g, v, t).unwrap(), brute(&g, v, t));
            }
        }
    }

    #[test]
    fn monotone_in_threshold_and_bounded() {
        for (t, p) in [0.1, 0.4, 0.9].into_iter().enumerate() {
            let g = sample_subgraph(&SampleParams::new(7, p, 5, t as u64)).unwrap();
            for v in 0..128 {
                let counts: Vec<u32> = (0..=8)
                    .map(|t| high_degree_near(&g, v, t).unwrap())
                    .collect();
                assert!(counts.windows(2).all(|w| w[1] <= w[0]));
                assert!(counts[0] <= ball_size(7));
            }
        }
    }

    #[test]
    fn threshold_sum_reproduces_ball_degree_tally() {
        for n in 2..=8u32 {
            let g = sample_subgraph(&SampleParams::new(n, 0.35, 8, 0)).unwrap();
            for v in 0..g.num_vertices() as u64 {
                let summed: u32 = (1..=n).map(|t| high_degree_near(&g, v, t).unwrap()).sum();
                let tally: u32 = (0..g.num_vertices() as u64)
                    .filter(|&u| matches!((u ^ v).count_ones(), 1 | 2))
                    .map(|u| g.degree(u).unwrap())
                    .sum();
                assert_eq!(summed, tally);
            }
        }
    }

    #[test]
    fn empty_graph_reports() {
        let e = HypercubeSubgraph::empty(10).unwrap();
        let r = cluster_stat_i(&e, 0.1, 0.8, 0.4, VertexScan::All).unwrap();
        assert_eq!(r.max_cluster, 0);
        assert!(r.conclusion_holds);
        assert_eq!(r.vertices_scanned, 1024);
        let r = cluster_stat_ii(&e, 0.5, 1.0 / 18.0, VertexScan::All).unwrap();
        assert_eq!(r.max_cluster, 0);
        assert!(r.conclusion_holds);
    }

    #[test]
    fn full_cube_counterexample() {
        let q = HypercubeSubgraph::full_cube(9).unwrap();
        // 9^0.5 = 3 ≤ 9 and 9^0.9 ≤ 9.
        let r = cluster_stat_i(&q, 1.0, 0.9, 0.5, VertexScan::All).unwrap();
        assert_eq!(r.threshold, 3);
        assert_eq!(r.max_cluster, ball_size(9));
        assert!(!r.conclusion_holds);
        assert_eq!(r.hyp_exponent_sum, Some(true));
        assert_eq!(r.hyp_threshold_vs_mean, Some(false));
    }

    #[test]
    fn mode_ii_threshold() {
        assert_eq!(cluster_ii_threshold(16, 0.5).unwrap(), 11);
        assert!(cluster_ii_threshold(16, 0.0).is_err());
        let e = HypercubeSubgraph::empty(4).unwrap();
        assert!(cluster_stat_ii(&e, 0.0, 0.5, VertexScan::All).is_err());
        let r = cluster_stat_ii(&e, 0.5, 0.5, VertexScan::All).unwrap();
        assert_eq!(r.hyp_density, Some(true));
        assert!((r.bound - 4.0).abs() < 1e-12);
    }

    #[test]
    fn invalid_exponents() {
        let e = HypercubeSubgraph::empty(4).unwrap();
        assert!(cluster_stat_i(&e, 0.1, 0.0, 0.5, VertexScan::All).is_err());
        assert!(cluster_stat_i(&e, 0.1, 0.5, -1.0, VertexScan::All).is_err());
    }

    #[test]
    fn sampled_scan_is_deterministic_subset() {
        let g = sample_subgraph(&SampleParams::new(10, 0.3, 2, 0)).unwrap();
        let scan = VertexScan::Sample {
            count: 100,
            seed: 9,
        };
        let a = max_cluster(&g, 4, scan);
        let b = max_cluster(&g, 4, scan);
        assert_eq!(a, b);
        assert_eq!(a.vertices_scanned, 100);
        let full = max_cluster(&g, 4, VertexScan::All);
        assert!(a.max_cluster <= full.max_cluster);
        assert_eq!(
            high_degree_near(&g, a.argmax_vertex, 4).unwrap(),
            a.max_cluster
        );
        let over = max_cluster(
            &g,
            4,
            VertexScan::Sample {
                count: 5000,
                seed: 9,
            },
        );
        assert_eq!(over, full);
    }
}
