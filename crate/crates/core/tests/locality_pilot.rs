//! Clustering of high-degree vertices at desk-scale parameters.

use cube_spectra::experiment::{run_experiment_full, ExperimentConfig, PRule};
use cube_spectra::locality::{cluster_stat_i, cluster_stat_ii, VertexScan};
use cube_spectra::{sample_subgraph, SampleParams};

const SEED: u64 = 20240601;
const TRIALS: u64 = 100;
const PILOT_FREQ: f64 = 0.95;

fn mode_i_frequency(n: u32, p: f64, a: f64, b: f64) -> f64 {
    let held = (0..TRIALS)
        .filter(|&t| {
            let g = sample_subgraph(&SampleParams::new(n, p, SEED, t)).unwrap();
            cluster_stat_i(&g, p, a, b, VertexScan::All)
                .unwrap()
                .conclusion_holds
        })
        .count();
    held as f64 / TRIALS as f64
}

fn mode_ii_frequency(n: u32, p: f64, a: f64) -> f64 {
    let held = (0..TRIALS)
        .filter(|&t| {
            let g = sample_subgraph(&SampleParams::new(n, p, SEED, t)).unwrap();
            cluster_stat_ii(&g, p, a, VertexScan::All)
                .unwrap()
                .conclusion_holds
        })
        .count();
    held as f64 / TRIALS as f64
}

#[test]
fn hypothesis_flags_at_pilot_points() {
    let g = sample_subgraph(&SampleParams::new(16, 0.1, SEED, 0)).unwrap();
    let r = cluster_stat_i(&g, 0.1, 0.8, 0.4, VertexScan::All).unwrap();
    assert_eq!(r.threshold, 4);
    assert_eq!(r.hyp_exponent_sum, Some(true));
    // 16^0.4 ≈ 3.03 < 6·16·0.1 = 9.6
    assert_eq!(r.hyp_threshold_vs_mean, Some(false));
    assert!(!r.hypotheses_hold());

    let g = sample_subgraph(&SampleParams::new(16, 0.5, SEED, 0)).unwrap();
    let r = cluster_stat_ii(&g, 0.5, 1.0 / 18.0, VertexScan::All).unwrap();
    assert_eq!(r.hyp_density, Some(true));
    assert_eq!(r.threshold, 11);
    assert!((r.bound - 2.0 * 16f64.powf(1.0 / 18.0)).abs() < 1e-12);
}

#[test]
fn run_emits_locality_rows_per_trial() {
    let config = ExperimentConfig {
        n_values: vec![8],
        p_rules: vec![PRule::Const(0.3)],
        trials: 4,
        master_seed: SEED,
        locality: vec![(0.8, 0.4), (0.5, 0.9)],
        ..ExperimentConfig::default()
    };
    let out = run_experiment_full(&config).unwrap();
    assert_eq!(out.locality.len(), 8);
    for row in &out.locality {
        assert_eq!(row.report.vertices_scanned, 256);
        assert!(row.report.max_cluster <= 37);
    }
}

/// The conclusion-frequency floor for mode i at `(16, 0.1, 4/5, 2/5)`.
/// Fails at this dimension: the expected number of degree-≥4 vertices in a
/// 137-vertex ball (about 9.2) already meets the bound `16^0.8 ≈ 9.19`.
#[test]
#[ignore = "asymptotic claim does not hold at n = 16; run with --ignored"]
fn mode_i_pilot_frequency() {
    let f = mode_i_frequency(16, 0.1, 0.8, 0.4);
    assert!(f >= PILOT_FREQ, "conclusion held in {f} of trials");
}

/// The conclusion-frequency floor for mode ii at `(16, 1/2, 1/18)`.
#[test]
#[ignore = "asymptotic claim does not hold at n = 16; run with --ignored"]
fn mode_ii_pilot_frequency() {
    let f = mode_ii_frequency(16, 0.5, 1.0 / 18.0);
    assert!(f >= PILOT_FREQ, "conclusion held in {f} of trials");
}
