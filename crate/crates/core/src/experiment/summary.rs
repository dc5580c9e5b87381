use std::collections::BTreeMap;
use std::io::Write;

use serde::{Deserialize, Serialize};

use super::config::Format;
use super::records::{format_real, TrialRecord};
use crate::degree_theory::{predicted_max_degree, DegreeTheoryConfig};
use crate::error::{Error, Result};

/// Aggregates for one `(n, p)` group.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub n: u32,
    pub p: f64,
    pub trials: u64,
    pub ratio_median: Option<f64>,
    pub ratio_mean: Option<f64>,
    pub ratio_min: Option<f64>,
    pub ratio_max: Option<f64>,
    /// Fraction of trials with Δ inside the predicted range.
    pub delta_in_range_freq: f64,
    pub convergence_rate: f64,
}

pub fn median(values: &mut [f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    values.sort_by(f64::total_cmp);
    let k = values.len();
    Some(if k % 2 == 1 {
        values[k / 2]
    } else {
        0.5 * (values[k / 2 - 1] + values[k / 2])
    })
}

/// Groups records by `(n, p)`, sorted by `n` then `p`.
pub fn summarize(records: &[TrialRecord]) -> Result<Vec<SummaryRow>> {
    if records.is_empty() {
        return Err(Error::EmptyInput("no records to summarize"));
    }
    #[derive(PartialEq, Eq, PartialOrd, Ord)]
    struct Key(u32, OrdF64);
    #[derive(PartialEq, Eq)]
    struct OrdF64(u64);
    impl PartialOrd for OrdF64 {
        fn partial_cmp(&self, o: &Self) -> Option<std::cmp::Ordering> {
            Some(self.cmp(o))
        }
    }
    impl Ord for OrdF64 {
        fn cmp(&self, o: &Self) -> std::cmp::Ordering {
            f64::from_bits(self.0).total_cmp(&f64::from_bits(o.0))
        }
    }

    let mut groups: BTreeMap<Key, Vec<&TrialRecord>> = BTreeMap::new();
    for r in records {
        groups
            .entry(Key(r.n, OrdF64(r.p.to_bits())))
            .or_default()
            .push(r);
    }
    let cfg = DegreeTheoryConfig::default();
    groups
        .into_iter()
        .map(|(Key(n, OrdF64(pb)), rs)| {
            let p = f64::from_bits(pb);
            let total = rs.len() as f64;
            let mut ratios: Vec<f64> = rs.iter().filter_map(|r| r.ratio).collect();
            let ratio_mean =
                (!ratios.is_empty()).then(|| ratios.iter().sum::<f64>() / ratios.len() as f64);
            let ratio_min = ratios.iter().copied().reduce(f64::min);
            let ratio_max = ratios.iter().copied().reduce(f64::max);
            let ratio_median = median(&mut ratios);
            let (range, _) = predicted_max_degree(n, p, &cfg)?;
            let in_range = rs.iter().filter(|r| range.contains(r.delta)).count() as f64;
            let converged = rs.iter().filter(|r| r.converged).count() as f64;
            Ok(SummaryRow {
                n,
                p,
                trials: rs.len() as u64,
                ratio_median,
                ratio_mean,
                ratio_min,
                ratio_max,
                delta_in_range_freq: in_range / total,
                convergence_rate: converged / total,
            })
        })
        .collect()
}

pub const SUMMARY_COLUMNS: [&str; 9] = [
    "n",
    "p",
    "trials",
    "ratio_median",
    "ratio_mean",
    "ratio_min",
    "ratio_max",
    "delta_in_range_freq",
    "convergence_rate",
];

pub fn write_summary_to<W: Write>(rows: &[SummaryRow], out: W, format: Format) -> Result<()> {
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(SUMMARY_COLUMNS)?;
            let o = |x: Option<f64>| x.map(format_real).unwrap_or_default();
            for r in rows {
                w.write_record([
                    r.n.to_string(),
                    format_real(r.p),
                    r.trials.to_string(),
                    o(r.ratio_median),
                    o(r.ratio_mean),
                    o(r.ratio_min),
                    o(r.ratio_max),
                    format_real(r.delta_in_range_freq),
                    format_real(r.convergence_rate),
                ])?;
            }
            w.flush()?;
        }
        Format::Json => {
            let mut out = out;
            serde_json::to_writer_pretty(&mut out, rows)?;
            out.write_all(b"\n")?;
        }
    }
    Ok(())
}
