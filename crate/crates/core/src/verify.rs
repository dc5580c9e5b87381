//! Exact invariants checked over seeded graph families and persisted records.

use serde::{Deserialize, Serialize};

use crate::components::{connected_components, is_star, per_component_lambda1};
use crate::cube_graph::{sample_subgraph, HypercubeSubgraph, SampleParams};
use crate::degree_theory::{
    chernoff_degree_tail, expected_exceed_count, kappa, ln_term, regime_representative, Regime,
    KAPPA_LOG_SLACK,
};
use crate::eigensolve::{dense_spectrum, lanczos_lambda1, SolverConfig};
use crate::error::Result;
use crate::experiment::TrialRecord;
use crate::locality::{ball_size, max_cluster, VertexScan};
use crate::spectral_bounds::{
    bipartite_product_bound, common_cube_neighbors, parity_side, sandwich_bounds, sqrt_edges_bound,
    walk2_max,
};
use crate::thresholds::{BOUND_SLACK, SOLVER_AGREEMENT, STAR_TOL};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub name: String,
    pub cases: u64,
    pub failures: u64,
    /// First failing case, if any.
    pub first_failure: Option<String>,
}

impl CheckOutcome {
    fn new(name: &str) -> Self {
        Self {
            name: name.to_string(),
            cases: 0,
            failures: 0,
            first_failure: None,
        }
    }

    fn record(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(describe());
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub checks: Vec<CheckOutcome>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckOutcome::passed)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerifyConfig {
    pub master_seed: u64,
    /// Graphs per `(n, regime)` cell.
    pub graphs_per_cell: u64,
    /// Largest dimension of the sampled families.
    pub max_n: u32,
    /// Largest full cube solved.
    pub max_full_cube_n: u32,
    pub solver: SolverConfig,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            master_seed: 0,
            graphs_per_cell: 8,
            max_n: 12,
            max_full_cube_n: 14,
            solver: SolverConfig::default(),
        }
    }
}

/// Sampled graphs across dimensions `2..=max_n` and every non-empty regime,
/// tagged with `(n, p, regime, trial)`.
pub fn regime_family(
    max_n: u32,
    per_cell: u64,
    master_seed: u64,
) -> Result<Vec<(SampleParams, Regime, HypercubeSubgraph)>> {
    let mut out = Vec::new();
    for n in 2..=max_n {
        for regime in Regime::ALL {
            let Some(p) = regime_representative(n, regime) else {
                continue;
            };
            for t in 0..per_cell {
                let params = SampleParams::new(n, p, master_seed, t);
                let g = sample_subgraph(&params)?;
                out.push((params, regime, g));
            }
        }
    }
    Ok(out)
}

fn graph_invariants(family: &[(SampleParams, Regime, HypercubeSubgraph)]) -> CheckOutcome {
    let mut c = CheckOutcome::new("graph_invariants");
    for (params, _, g) in family {
        let rebuilt = HypercubeSubgraph::from_masks(g.n(), g.masks().to_vec());
        let popcount: u64 = g.masks().iter().map(|m| u64::from(m.count_ones())).sum();
        let edges = g.to_edge_list();
        let again = sample_subgraph(params).ok();
        let ok = rebuilt.as_ref().is_ok_and(|r| r == g)
            && popcount == 2 * g.edge_count()
            && edges.len() as u64 == g.edge_count()
            && g.max_degree() <= g.n()
            && again.as_ref() == Some(g);
        c.record(ok, || format!("{params:?}"));
    }
    c
}

/// Checks the spectral sandwich and the three upper bounds on one graph.
pub fn spectral_bound_violations(g: &HypercubeSubgraph, lambda1: f64) -> Vec<&'static str> {
    let mut bad = Vec::new();
    let (lo, hi) = sandwich_bounds(g);
    if lambda1 < lo - BOUND_SLACK {
        bad.push("lower sandwich");
    }
    if lambda1 > hi + BOUND_SLACK {
        bad.push("upper sandwich");
    }
    if lambda1 > sqrt_edges_bound(g) + BOUND_SLACK {
        bad.push("sqrt(m)");
    }
    if lambda1 > (walk2_max(g) as f64).sqrt() + BOUND_SLACK {
        bad.push("walk2");
    }
    match bipartite_product_bound(g, parity_side) {
        Ok(b) if lambda1 <= b + BOUND_SLACK => {}
        _ => bad.push("bipartite product"),
    }
    bad
}

fn spectral_bounds_check(
    family: &[(SampleParams, Regime, HypercubeSubgraph)],
    solver: &SolverConfig,
) -> Result<CheckOutcome> {
    let mut c = CheckOutcome::new("spectral_bounds");
    for (params, _, g) in family {
        let r = lanczos_lambda1(g, solver)?;
        let bad = spectral_bound_violations(g, r.lambda1);
        c.record(bad.is_empty() && r.converged, || {
            format!(
                "{params:?}: λ₁={} converged={} {bad:?}",
                r.lambda1, r.converged
            )
        });
    }
    Ok(c)
}

fn dense_oracle_check(master_seed: u64, solver: &SolverConfig) -> Result<CheckOutcome> {
    let mut c = CheckOutcome::new("lanczos_vs_dense");
    for n in 1..=6 {
        for p in [0.2, 0.5, 0.8] {
            for t in 0..10 {
                let params = SampleParams::new(n, p, master_seed, t);
                let g = sample_subgraph(&params)?;
                let dense = dense_spectrum(&g)?[0];
                let l = lanczos_lambda1(&g, solver)?.lambda1;
                c.record((l - dense).abs() <= SOLVER_AGREEMENT, || {
                    format!("{params:?}: lanczos {l} dense {dense}")
                });
            }
        }
    }
    Ok(c)
}

fn components_check(
    family: &[(SampleParams, Regime, HypercubeSubgraph)],
    solver: &SolverConfig,
) -> Result<CheckOutcome> {
    let mut c = CheckOutcome::new("disjoint_union_and_stars");
    for (params, regime, g) in family {
        if !matches!(regime, Regime::Case1 | Regime::Case4) {
            continue;
        }
        let census = connected_components(g);
        let lambdas = per_component_lambda1(g, &census, solver)?;
        let global = lanczos_lambda1(g, solver)?.lambda1;
        let best = lambdas.iter().copied().fold(0.0, f64::max);
        c.record((global - best).abs() <= SOLVER_AGREEMENT, || {
            format!("{params:?}: global {global} component max {best}")
        });
        for (comp, l) in census.components.iter().zip(&lambdas) {
            let root = (comp.edges as f64).sqrt();
            let ok =
                *l <= root + BOUND_SLACK && (!is_star(g, comp) || (l - root).abs() <= STAR_TOL);
            c.record(ok, || {
                format!("{params:?}: component {:?} λ={l}", comp.vertices)
            });
        }
    }
    Ok(c)
}

fn full_cube_check(max_n: u32, solver: &SolverConfig) -> Result<CheckOutcome> {
    let mut c = CheckOutcome::new("full_cube");
    for n in 1..=max_n {
        let l = lanczos_lambda1(&HypercubeSubgraph::full_cube(n)?, solver)?.lambda1;
        c.record((l - f64::from(n)).abs() <= SOLVER_AGREEMENT, || {
            format!("n={n}: {l}")
        });
    }
    Ok(c)
}

fn common_neighbor_check() -> Result<CheckOutcome> {
    let mut c = CheckOutcome::new("common_neighbors");
    for n in 1..=6u32 {
        let q = HypercubeSubgraph::full_cube(n)?;
        for u in 0..1u64 << n {
            for v in 0..1u64 << n {
                let direct = q
                    .neighbors(u as usize)
                    .filter(|&w| q.has_edge(v, w as u64))
                    .count() as u32;
                let got = common_cube_neighbors(u, v, n)?;
                let expected = if u == v { n } else { direct };
                c.record(got == expected && (u == v || got <= 2), || {
                    format!("n={n} u={u} v={v}: {got} vs {expected}")
                });
            }
        }
    }
    Ok(c)
}

fn degree_theory_check() -> Result<CheckOutcome> {
    let mut c = CheckOutcome::new("degree_theory");
    for n in 1..=24u32 {
        for e in 0..=24 {
            let p = 10f64.powf(-f64::from(e) / 3.0);
            let k = kappa(n, p)?;
            let ok = k.is_some_and(|k| {
                ln_term(n, p, k) >= -KAPPA_LOG_SLACK
                    && (k == n || ln_term(n, p, k + 1) < -KAPPA_LOG_SLACK)
            });
            c.record(ok, || format!("kappa n={n} p={p}: {k:?}"));
            let ex: Vec<f64> = (0..=n + 1)
                .map(|k| expected_exceed_count(n, p, k))
                .collect::<Result<_>>()?;
            c.record(ex.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-12)), || {
                format!("E[X_k] not monotone n={n} p={p}")
            });
            let mu = f64::from(n) * p;
            let tails: Vec<f64> = (0..=40)
                .map(|i| chernoff_degree_tail(n, p, mu + (f64::from(n) - mu) * f64::from(i) / 40.0))
                .collect::<Result<_>>()?;
            c.record(tails.windows(2).all(|w| w[1] <= w[0] + 1e-15), || {
                format!("Chernoff tail not monotone n={n} p={p}")
            });
        }
    }
    Ok(c)
}

fn locality_check(family: &[(SampleParams, Regime, HypercubeSubgraph)]) -> CheckOutcome {
    let mut c = CheckOutcome::new("locality_ball");
    for (params, _, g) in family.iter().filter(|(p, _, _)| p.n <= 10) {
        let counts: Vec<u32> = (0..=g.n() + 1)
            .map(|t| max_cluster(g, t, VertexScan::All).max_cluster)
            .collect();
        let ok = counts[0] == ball_size(g.n())
            && counts.windows(2).all(|w| w[1] <= w[0])
            && counts[counts.len() - 1] == 0;
        c.record(ok, || format!("{params:?}: {counts:?}"));
    }
    c
}

/// Runs every check over the configured families.
pub fn verify_suite(config: &VerifyConfig) -> Result<VerifyReport> {
    let family = regime_family(config.max_n, config.graphs_per_cell, config.master_seed)?;
    Ok(VerifyReport {
        checks: vec![
            graph_invariants(&family),
            dense_oracle_check(config.master_seed, &config.solver)?,
            spectral_bounds_check(&family, &config.solver)?,
            components_check(&family, &config.solver)?,
            full_cube_check(config.max_full_cube_n, &config.solver)?,
            common_neighbor_check()?,
            degree_theory_check()?,
            locality_check(&family),
        ],
    })
}

/// Invariants every persisted record must satisfy.
pub fn verify_records(records: &[TrialRecord], tol: f64) -> VerifyReport {
    let mut sandwich = CheckOutcome::new("record_sandwich");
    let mut ratio = CheckOutcome::new("record_ratio");
    let mut residual = CheckOutcome::new("record_residual");
    for r in records {
        let id = || format!("n={} p={} trial={}", r.n, r.p, r.trial_index);
        let avg = 2.0 * r.m as f64 / 2f64.powi(r.n as i32);
        let delta = f64::from(r.delta);
        let lower = delta.sqrt().max(avg);
        sandwich.record(
            lower - BOUND_SLACK <= r.lambda1 && r.lambda1 <= delta + BOUND_SLACK,
            || format!("{}: λ₁={} not in [{lower}, {delta}]", id(), r.lambda1),
        );
        let ratio_ok = match r.ratio {
            None => r.prediction == 0.0,
            Some(x) => r.prediction > 0.0 && x >= avg / r.prediction - BOUND_SLACK,
        };
        ratio.record(ratio_ok, || format!("{}: ratio {:?}", id(), r.ratio));
        residual.record(
            !r.converged || r.residual <= tol * r.lambda1.max(1.0),
            || format!("{}: residual {} marked converged", id(), r.residual),
        );
    }
    VerifyReport {
        checks: vec![sandwich, ratio, residual],
    }
}
