use std::collections::HashMap;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::ExperimentConfig;
use super::plot::plot_ratio_series;
use super::records::{write_records, TrialRecord};
use crate::components::{case4_shape_check, connected_components};
use crate::cube_graph::{sample_subgraph, SampleParams};
use crate::degree_theory::{classify_regime, kappa};
use crate::eigensolve::lanczos_lambda1;
use crate::error::{Error, Result};
use crate::locality::{cluster_stat_i, LocalityReport, VertexScan};
use crate::spectral_bounds::spectral_prediction;

/// Above this dimension the clustering statistic samples vertices.
pub const LOCALITY_FULL_SCAN_MAX_N: u32 = 22;

/// Vertices sampled per trial above [`LOCALITY_FULL_SCAN_MAX_N`].
pub const LOCALITY_SAMPLE_SIZE: u64 = 1 << 16;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LocalityRow {
    pub trial_index: u64,
    #[serde(flatten)]
    pub report: LocalityReport,
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct RunOutput {
    /// One record per `(n, p, trial)` in canonical order.
    pub records: Vec<TrialRecord>,
    pub locality: Vec<LocalityRow>,
}

/// Sample, solve, and optionally census one trial.
pub fn run_trial(
    n: u32,
    p: f64,
    trial_index: u64,
    config: &ExperimentConfig,
) -> Result<(TrialRecord, Vec<LocalityRow>)> {
    let params = SampleParams::new(n, p, config.master_seed, trial_index);
    let g = sample_subgraph(&params)?;
    let spec = lanczos_lambda1(&g, &config.solver)?;
    let delta = g.max_degree();
    let prediction = spectral_prediction(delta, n, p);
    let (largest_component_edges, case4_shape) = if config.census {
        let census = connected_components(&g);
        let check = case4_shape_check(&g, &census, spec.lambda1, &config.solver)?;
        (
            Some(census.largest_component_edges),
            Some(check.lambda_sq_matches),
        )
    } else {
        (None, None)
    };
    let derived_seed = params.derived_seed();
    let record = TrialRecord {
        n,
        p,
        trial_index,
        derived_seed,
        m: g.edge_count(),
        delta,
        kappa: kappa(n, p)?,
        regime: classify_regime(n, p),
        lambda1: spec.lambda1,
        iterations: spec.iterations,
        residual: spec.residual,
        converged: spec.converged,
        prediction,
        ratio: (prediction > 0.0).then(|| spec.lambda1 / prediction),
        largest_component_edges,
        case4_shape,
    };
    let scan = if n <= LOCALITY_FULL_SCAN_MAX_N {
        VertexScan::All
    } else {
        VertexScan::Sample {
            count: LOCALITY_SAMPLE_SIZE,
            seed: derived_seed,
        }
    };
    let locality = config
        .locality
        .iter()
        .map(|&(a, b)| {
            cluster_stat_i(&g, p, a, b, scan).map(|report| LocalityRow {
                trial_index,
                report,
            })
        })
        .collect::<Result<_>>()?;
    Ok((record, locality))
}

fn with_pool<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match threads {
        None => Ok(f()),
        Some(t) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(t)
                .build()
                .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

/// Runs every `(n, p, trial)` task. Output order and content do not depend
/// on the number of worker threads.
pub fn run_experiment_full(config: &ExperimentConfig) -> Result<RunOutput> {
    config.validate()?;
    let tasks: Vec<(u32, f64, u64)> = config
        .grid()
        .into_iter()
        .flat_map(|(n, _, p)| (0..config.trials).map(move |t| (n, p, t)))
        .collect();
    let results: Vec<Result<(TrialRecord, Vec<LocalityRow>)>> = with_pool(config.threads, || {
        tasks
            .par_iter()
            .map(|&(n, p, t)| run_trial(n, p, t, config))
            .collect()
    })?;
    let mut out = RunOutput::default();
    for r in results {
        let (record, locality) = r?;
        out.records.push(record);
        out.locality.extend(locality);
    }
    Ok(out)
}

pub fn run_experiment(config: &ExperimentConfig) -> Result<Vec<TrialRecord>> {
    Ok(run_experiment_full(config)?.records)
}

/// Series label for each record: the p-rule that generated its `(n, p)`.
pub fn rule_labeller(config: &ExperimentConfig) -> impl Fn(&TrialRecord) -> String {
    let mut map: HashMap<(u32, u64), String> = HashMap::new();
    for (n, i, p) in config.grid() {
        map.entry((n, p.to_bits()))
            .or_insert_with(|| config.p_rules[i].to_string());
    }
    move |r: &TrialRecord| {
        map.get(&(r.n, r.p.to_bits()))
            .cloned()
            .unwrap_or_else(|| format!("p={}", r.p))
    }
}

/// `<output>.locality.json`.
pub fn locality_path(output: &Path) -> PathBuf {
    let mut s = output.as_os_str().to_owned();
    s.push(".locality.json");
    PathBuf::from(s)
}

/// Writes the records, the plot, and the locality rows named by `config`.
pub fn persist_run(config: &ExperimentConfig, out: &RunOutput) -> Result<()> {
    if let Some(path) = &config.output_path {
        write_records(&out.records, path, config.format)?;
        if !out.locality.is_empty() {
            let mut w = BufWriter::new(File::create(locality_path(path))?);
            serde_json::to_writer_pretty(&mut w, &out.locality)?;
            w.write_all(b"\n")?;
            w.flush()?;
        }
    }
    if let Some(path) = &config.plot_path {
        plot_ratio_series(&out.records, rule_labeller(config), path)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::degree_theory::Regime;
    use crate::experiment::config::PRule;

    fn config(n: Vec<u32>, p: Vec<PRule>, trials: u64) -> ExperimentConfig {
        ExperimentConfig {
            n_values: n,
            p_rules: p,
            trials,
            ..Default::default()
        }
    }

    #[test]
    fn full_q2_record() {
        let recs = run_experiment(&config(vec![2], vec![PRule::Const(1.0)], 1)).unwrap();
        assert_eq!(recs.len(), 1);
        let r = &recs[0];
        assert!((r.lambda1 - 2.0).abs() < 1e-12);
        assert_eq!((r.delta, r.m), (2, 4));
        assert_eq!(r.prediction, 2.0);
        assert!((r.ratio.unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(r.regime, Regime::Case2);
    }

    #[test]
    fn empty_graph_has_no_ratio() {
        let recs = run_experiment(&config(vec![5], vec![PRule::Const(0.0)], 2)).unwrap();
        assert!(recs.iter().all(|r| r.ratio.is_none() && r.lambda1 == 0.0));
    }

    #[test]
    fn canonical_order_and_thread_independence() {
        let mut c = config(
            vec![6, 4],
            vec![PRule::Const(0.3), "pow:-2/3".parse().unwrap()],
            3,
        );
        c.census = true;
        c.locality = vec![(0.8, 0.4)];
        c.threads = Some(1);
        let one = run_experiment_full(&c).unwrap();
        c.threads = Some(3);
        let three = run_experiment_full(&c).unwrap();
        assert_eq!(one, three);
        let keys: Vec<(u32, u64)> = one.records.iter().map(|r| (r.n, r.trial_index)).collect();
        assert_eq!(keys[..4], [(6, 0), (6, 1), (6, 2), (6, 0)]);
        assert_eq!(one.records[6].n, 4);
        assert_eq!(one.locality.len(), 12);
        assert!(one
            .records
            .iter()
            .all(|r| r.largest_component_edges.is_some()));
    }

    #[test]
    fn labeller_maps_rules() {
        let c = config(
            vec![8],
            vec![PRule::Const(0.5), "sparse:2".parse().unwrap()],
            1,
        );
        let recs = run_experiment(&c).unwrap();
        let label = rule_labeller(&c);
        assert_eq!(label(&recs[0]), "const:0.5");
        assert_eq!(label(&recs[1]), "sparse:2");
    }

    #[test]
    fn locality_sibling_path() {
        assert_eq!(
            locality_path(Path::new("out/run.csv")),
            PathBuf::from("out/run.csv.locality.json")
        );
    }
}
