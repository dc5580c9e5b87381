use std::collections::HashSet;

use proptest::prelude::*;

use cube_spectra::eigensolve::dense_spectrum;
use cube_spectra::experiment::{format_real, PRule};
use cube_spectra::rng::derive_seed;
use cube_spectra::spectral_bounds::{sandwich_bounds, walk2_max};
use cube_spectra::thresholds::{BOUND_SLACK, SOLVER_AGREEMENT};
use cube_spectra::{
    lanczos_lambda1, sample_subgraph, HypercubeSubgraph, SampleParams, SolverConfig,
};

const SEED_SCAN: u64 = 1_000_000;
/// Upper 0.1% point of chi-square with 255 degrees of freedom.
const CHI_SQUARE_255_CRITICAL: f64 = 330.5;

#[test]
fn derived_seeds_do_not_collide() {
    let mut seen = HashSet::with_capacity(SEED_SCAN as usize);
    for t in 0..SEED_SCAN {
        assert!(
            seen.insert(derive_seed(42, 16, 0.5, t)),
            "collision at trial {t}"
        );
    }
}

#[test]
fn derived_seed_top_byte_is_uniform() {
    let mut bins = [0u64; 256];
    for t in 0..SEED_SCAN {
        bins[(derive_seed(42, 16, 0.5, t) >> 56) as usize] += 1;
    }
    let expected = SEED_SCAN as f64 / 256.0;
    let chi2: f64 = bins
        .iter()
        .map(|&c| (c as f64 - expected).powi(2) / expected)
        .sum();
    assert!(chi2 < CHI_SQUARE_255_CRITICAL, "chi-square {chi2}");
}

#[test]
fn mean_edge_count_matches_expectation() {
    for (n, p) in [(10, 0.3), (12, 0.05), (8, 0.9)] {
        let trials = 200;
        let total: u64 = (0..trials)
            .map(|t| {
                sample_subgraph(&SampleParams::new(n, p, 9, t))
                    .unwrap()
                    .edge_count()
            })
            .sum();
        let mean = total as f64 / trials as f64;
        let expected = p * f64::from(n) * 2f64.powi(n as i32 - 1);
        assert!(
            (mean - expected).abs() <= 0.05 * expected,
            "n={n} p={p}: {mean} vs {expected}"
        );
    }
}

#[test]
fn geometric_skipping_matches_expectation() {
    let (n, p) = (18, 2f64.powi(-21));
    let trials = 400;
    let total: u64 = (0..trials)
        .map(|t| {
            sample_subgraph(&SampleParams::new(n, p, 3, t))
                .unwrap()
                .edge_count()
        })
        .sum();
    let mean = total as f64 / trials as f64;
    let expected = p * 18.0 * 2f64.powi(17);
    // Poisson count over all trials: five standard deviations.
    let sd = (expected / trials as f64).sqrt();
    assert!((mean - expected).abs() <= 5.0 * sd, "{mean} vs {expected}");
}

fn arb_graph(max_n: u32) -> impl Strategy<Value = HypercubeSubgraph> {
    (1..=max_n).prop_flat_map(|n| {
        let edges = HypercubeSubgraph::full_cube(n).unwrap().to_edge_list();
        proptest::collection::vec(any::<bool>(), edges.len()).prop_map(move |keep| {
            let chosen: Vec<_> = edges
                .iter()
                .zip(&keep)
                .filter(|(_, &k)| k)
                .map(|(&e, _)| e)
                .collect();
            HypercubeSubgraph::from_edge_list(n, &chosen).unwrap()
        })
    })
}

fn lambda1(g: &HypercubeSubgraph) -> f64 {
    lanczos_lambda1(g, &SolverConfig::default())
        .unwrap()
        .lambda1
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn lanczos_matches_dense(g in arb_graph(6)) {
        let dense = dense_spectrum(&g).unwrap().into_iter().fold(f64::NEG_INFINITY, f64::max);
        prop_assert!((lambda1(&g) - dense).abs() <= SOLVER_AGREEMENT);
    }

    #[test]
    fn spectrum_is_symmetric_with_known_moments(g in arb_graph(5)) {
        let mut eig = dense_spectrum(&g).unwrap();
        eig.sort_by(f64::total_cmp);
        for (a, b) in eig.iter().zip(eig.iter().rev()) {
            prop_assert!((a + b).abs() <= 1e-9);
        }
        let trace: f64 = eig.iter().sum();
        let squares: f64 = eig.iter().map(|x| x * x).sum();
        prop_assert!(trace.abs() <= 1e-9);
        prop_assert!((squares - 2.0 * g.edge_count() as f64).abs() <= 1e-8);
    }

    #[test]
    fn adding_an_edge_never_lowers_lambda1(g in arb_graph(7), pick in any::<prop::sample::Index>()) {
        let missing: Vec<_> = HypercubeSubgraph::full_cube(g.n())
            .unwrap()
            .to_edge_list()
            .into_iter()
            .filter(|&(v, w)| !g.has_edge(v, w))
            .collect();
        prop_assume!(!missing.is_empty());
        let (v, w) = missing[pick.index(missing.len())];
        let h = g.with_edge(v, w).unwrap();
        prop_assert_eq!(h.edge_count(), g.edge_count() + 1);
        prop_assert!(lambda1(&h) >= lambda1(&g) - BOUND_SLACK);
    }

    #[test]
    fn sandwich_and_walk_bounds(g in arb_graph(8)) {
        let l = lambda1(&g);
        let (lo, hi) = sandwich_bounds(&g);
        prop_assert!(lo - BOUND_SLACK <= l && l <= hi + BOUND_SLACK);
        prop_assert!(l <= (walk2_max(&g) as f64).sqrt() + BOUND_SLACK);
    }

    #[test]
    fn disjoint_halves_take_the_larger_lambda1(g in arb_graph(7)) {
        // Drop the top-direction edges so the two half-cubes are disconnected.
        let top = 1u64 << (g.n() - 1);
        let (halves, _) = g.split_edges(|v, w| v ^ w != top);
        let (low, high) = halves.split_edges(|v, _| v & top == 0);
        let expected = lambda1(&low).max(lambda1(&high));
        prop_assert!((lambda1(&halves) - expected).abs() <= SOLVER_AGREEMENT);
    }

    #[test]
    fn edge_list_round_trip(g in arb_graph(7)) {
        let mut buf = Vec::new();
        g.write_edge_list(&mut buf).unwrap();
        let back = HypercubeSubgraph::read_edge_list(buf.as_slice()).unwrap();
        prop_assert_eq!(back, g);
    }

    #[test]
    fn sampling_is_reproducible(n in 1u32..=10, p in 0.0f64..=1.0, seed: u64, trial in 0u64..1000) {
        let params = SampleParams::new(n, p, seed, trial);
        let a = sample_subgraph(&params).unwrap();
        prop_assert_eq!(&a, &sample_subgraph(&params).unwrap());
        let popcount: u64 = a.masks().iter().map(|m| u64::from(m.count_ones())).sum();
        prop_assert_eq!(popcount, 2 * a.edge_count());
    }

    #[test]
    fn reals_round_trip_through_text(x in any::<f64>().prop_filter("finite", |x| x.is_finite())) {
        prop_assert_eq!(format_real(x).parse::<f64>().unwrap().to_bits(), x.to_bits());
    }

    #[test]
    fn p_rules_round_trip(e in -3.0f64..0.0, k in 1u32..8, c in 0.0f64..=1.0) {
        for rule in [PRule::Const(c), format!("pow:{e}").parse().unwrap(), PRule::Sparse(k)] {
            let back: PRule = rule.to_string().parse().unwrap();
            for n in [4, 9, 17] {
                prop_assert_eq!(back.eval(n).to_bits(), rule.eval(n).to_bits());
            }
        }
    }
}
