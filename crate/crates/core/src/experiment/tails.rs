//! Maximum-degree tail bounds against Monte Carlo frequencies.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::records::format_real;
use crate::cube_graph::{check_dimension, sample_subgraph, SampleParams};
use crate::degree_theory::{prob_max_degree_ge, prob_max_degree_lt};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TailRow {
    pub k: u32,
    /// `exp(−E[X_k]/2)`, bounding `Pr(Δ < k)`.
    pub bound_lt: f64,
    /// `min(1, E[X_k])`, bounding `Pr(Δ ≥ k)`.
    pub bound_ge: f64,
    pub mc_lt: f64,
    pub mc_ge: f64,
    pub trials: u64,
}

impl TailRow {
    /// Standard error of a frequency over `trials` samples whose true
    /// probability equals `bound`.
    pub fn standard_error(&self, bound: f64) -> f64 {
        let b = bound.clamp(0.0, 1.0);
        (b * (1.0 - b) / self.trials as f64).sqrt()
    }

    /// Both frequencies within `se_multiplier` standard errors of their bounds.
    pub fn within_bounds(&self, se_multiplier: f64) -> bool {
        self.mc_lt <= self.bound_lt + se_multiplier * self.standard_error(self.bound_lt)
            && self.mc_ge <= self.bound_ge + se_multiplier * self.standard_error(self.bound_ge)
    }
}

/// Maximum degrees of `trials` independent samples, in trial order.
pub fn sample_max_degrees(n: u32, p: f64, trials: u64, master_seed: u64) -> Result<Vec<u32>> {
    (0..trials)
        .into_par_iter()
        .map(|t| Ok(sample_subgraph(&SampleParams::new(n, p, master_seed, t))?.max_degree()))
        .collect()
}

/// One row per `k ∈ 0..=n`.
pub fn tail_table(n: u32, p: f64, trials: u64, master_seed: u64) -> Result<Vec<TailRow>> {
    check_dimension(n)?;
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be >= 1".into()));
    }
    let deltas = sample_max_degrees(n, p, trials, master_seed)?;
    let total = trials as f64;
    (0..=n)
        .map(|k| {
            let below = deltas.iter().filter(|&&d| d < k).count() as f64;
            Ok(TailRow {
                k,
                bound_lt: prob_max_degree_lt(n, p, k)?,
                bound_ge: prob_max_degree_ge(n, p, k)?,
                mc_lt: below / total,
                mc_ge: (total - below) / total,
                trials,
            })
        })
        .collect()
}

pub const TAIL_COLUMNS: [&str; 6] = ["k", "bound_lt", "bound_ge", "mc_lt", "mc_ge", "trials"];

pub fn write_tail_csv<W: Write>(rows: &[TailRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(TAIL_COLUMNS)?;
    for r in rows {
        w.write_record([
            r.k.to_string(),
            format_real(r.bound_lt),
            format_real(r.bound_ge),
            format_real(r.mc_lt),
            format_real(r.mc_ge),
            r.trials.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rows_are_consistent() {
        let rows = tail_table(8, 0.2, 60, 3).unwrap();
        assert_eq!(rows.len(), 9);
        assert_eq!(rows[0].mc_lt, 0.0);
        assert_eq!(rows[0].mc_ge, 1.0);
        for r in &rows {
            assert!((r.mc_lt + r.mc_ge - 1.0).abs() < 1e-15);
            assert!(r.within_bounds(3.0), "{r:?}");
        }
        assert!(rows.windows(2).all(|w| w[1].mc_lt >= w[0].mc_lt));
    }

    #[test]
    fn csv_header() {
        let rows = tail_table(3, 0.5, 4, 0).unwrap();
        let mut buf = Vec::new();
        write_tail_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("k,bound_lt,bound_ge,mc_lt,mc_ge,trials\n"));
        assert_eq!(text.lines().count(), 5);
    }

    #[test]
    fn zero_trials_rejected() {
        assert!(tail_table(3, 0.5, 0, 0).is_err());
    }
}
