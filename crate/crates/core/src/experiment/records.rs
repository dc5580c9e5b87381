use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::config::Format;
use crate::degree_theory::Regime;
use crate::error::{Error, Result};

/// One Monte Carlo observation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub n: u32,
    pub p: f64,
    pub trial_index: u64,
    pub derived_seed: u64,
    pub m: u64,
    pub delta: u32,
    pub kappa: Option<u32>,
    pub regime: Regime,
    pub lambda1: f64,
    pub iterations: usize,
    pub residual: f64,
    pub converged: bool,
    /// `max(√Δ, np)`.
    pub prediction: f64,
    /// `λ₁ / prediction`, absent when the prediction is 0.
    pub ratio: Option<f64>,
    pub largest_component_edges: Option<u64>,
    /// `λ₁² ∈ {Δ, Δ+1}`, recorded with the census.
    pub case4_shape: Option<bool>,
}

pub const CSV_COLUMNS: [&str; 16] = [
    "n",
    "p",
    "trial_index",
    "derived_seed",
    "m",
    "delta",
    "kappa",
    "regime",
    "lambda1",
    "iterations",
    "residual",
    "converged",
    "prediction",
    "ratio",
    "largest_component_edges",
    "case4_shape",
];

/// Real with 17 significant digits.
pub fn format_real(x: f64) -> String {
    format!("{x:.16e}")
}

fn opt<T: ToString>(x: Option<T>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

impl TrialRecord {
    fn csv_fields(&self) -> [String; 16] {
        [
            self.n.to_string(),
            format_real(self.p),
            self.trial_index.to_string(),
            self.derived_seed.to_string(),
            self.m.to_string(),
            self.delta.to_string(),
            opt(self.kappa),
            self.regime.to_string(),
            format_real(self.lambda1),
            self.iterations.to_string(),
            format_real(self.residual),
            self.converged.to_string(),
            format_real(self.prediction),
            self.ratio.map(format_real).unwrap_or_default(),
            opt(self.largest_component_edges),
            opt(self.case4_shape),
        ]
    }

    fn from_csv_fields(fields: &csv::StringRecord, line: usize) -> Result<Self> {
        if fields.len() != CSV_COLUMNS.len() {
            return Err(Error::Schema(format!(
                "line {line}: expected {} fields, found {}",
                CSV_COLUMNS.len(),
                fields.len()
            )));
        }
        let get = |i: usize| fields.get(i).unwrap_or("");
        fn parse<T: std::str::FromStr>(raw: &str, col: &str, line: usize) -> Result<T> {
            raw.parse()
                .map_err(|_| Error::parse(line, format!("column `{col}`: cannot parse {raw:?}")))
        }
        fn parse_opt<T: std::str::FromStr>(raw: &str, col: &str, line: usize) -> Result<Option<T>> {
            if raw.is_empty() {
                Ok(None)
            } else {
                parse(raw, col, line).map(Some)
            }
        }
        let c = CSV_COLUMNS;
        Ok(Self {
            n: parse(get(0), c[0], line)?,
            p: parse(get(1), c[1], line)?,
            trial_index: parse(get(2), c[2], line)?,
            derived_seed: parse(get(3), c[3], line)?,
            m: parse(get(4), c[4], line)?,
            delta: parse(get(5), c[5], line)?,
            kappa: parse_opt(get(6), c[6], line)?,
            regime: parse(get(7), c[7], line)?,
            lambda1: parse(get(8), c[8], line)?,
            iterations: parse(get(9), c[9], line)?,
            residual: parse(get(10), c[10], line)?,
            converged: parse(get(11), c[11], line)?,
            prediction: parse(get(12), c[12], line)?,
            ratio: parse_opt(get(13), c[13], line)?,
            largest_component_edges: parse_opt(get(14), c[14], line)?,
            case4_shape: parse_opt(get(15), c[15], line)?,
        })
    }
}

/// Serializes records to a writer.
pub fn write_records_to<W: Write>(records: &[TrialRecord], out: W, format: Format) -> Result<()> {
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(CSV_COLUMNS)?;
            for r in records {
                w.write_record(r.csv_fields())?;
            }
            w.flush()?;
        }
        Format::Json => {
            let mut out = out;
            serde_json::to_writer_pretty(&mut out, records)?;
            out.write_all(b"\n")?;
            out.flush()?;
        }
    }
    Ok(())
}

pub fn write_records(records: &[TrialRecord], path: &Path, format: Format) -> Result<()> {
    write_records_to(records, BufWriter::new(File::create(path)?), format)
}

/// Parses CSV or JSON records; the format is detected from the content.
pub fn read_records_from<R: Read>(input: R) -> Result<Vec<TrialRecord>> {
    let mut text = String::new();
    BufReader::new(input).read_to_string(&mut text)?;
    if text.trim_start().starts_with('[') {
        return Ok(serde_json::from_str(&text)?);
    }
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(text.as_bytes());
    let mut rows = reader.records();
    let header = match rows.next() {
        None => return Err(Error::Schema("missing header line".into())),
        Some(h) => h?,
    };
    for (i, expected) in CSV_COLUMNS.iter().enumerate() {
        match header.get(i) {
            Some(got) if got == *expected => {}
            Some(got) => {
                return Err(Error::Schema(format!(
                    "line 1: column {} is `{got}`, expected `{expected}`",
                    i + 1
                )))
            }
            None => {
                return Err(Error::Schema(format!(
                    "line 1: missing column `{expected}`"
                )))
            }
        }
    }
    if header.len() > CSV_COLUMNS.len() {
        return Err(Error::Schema(format!(
            "line 1: unexpected column `{}`",
            &header[CSV_COLUMNS.len()]
        )));
    }
    rows.map(|row| {
        let row = row?;
        let line = row.position().map_or(0, |p| p.line() as usize);
        TrialRecord::from_csv_fields(&row, line)
    })
    .collect()
}

pub fn read_records(path: &Path) -> Result<Vec<TrialRecord>> {
    read_records_from(File::open(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn sample_record(i: u64) -> TrialRecord {
        TrialRecord {
            n: 10,
            p: 0.1,
            trial_index: i,
            derived_seed: 0xDEAD_BEEF_0000_0000 + i,
            m: 500 + i,
            delta: 5,
            kappa: Some(5),
            regime: Regime::Case3,
            lambda1: 2.449_489_742_783_178 + i as f64 * 1e-3,
            iterations: 40,
            residual: 1.234e-11,
            converged: true,
            prediction: 5f64.sqrt(),
            ratio: Some(1.0954451150103321),
            largest_component_edges: None,
            case4_shape: if i.is_multiple_of(2) {
                Some(true)
            } else {
                None
            },
        }
    }

    #[test]
    fn csv_round_trip() {
        let mut recs: Vec<TrialRecord> = (0..5).map(sample_record).collect();
        recs[1].ratio = None;
        recs[2].kappa = None;
        recs[3].largest_component_edges = Some(7);
        recs[4].p = 1.0 / 3.0;
        let mut buf = Vec::new();
        write_records_to(&recs, &mut buf, Format::Csv).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with(&CSV_COLUMNS.join(",")));
        assert!(text.contains("3.3333333333333331e-1"));
        assert_eq!(read_records_from(buf.as_slice()).unwrap(), recs);
    }

    #[test]
    fn json_round_trip() {
        let recs: Vec<TrialRecord> = (0..3).map(sample_record).collect();
        let mut buf = Vec::new();
        write_records_to(&recs, &mut buf, Format::Json).unwrap();
        let v: serde_json::Value = serde_json::from_slice(&buf).unwrap();
        assert!(v[0].get("largest_component_edges").is_some());
        assert_eq!(read_records_from(buf.as_slice()).unwrap(), recs);
    }

    #[test]
    fn header_only_is_empty() {
        let text = CSV_COLUMNS.join(",") + "\n";
        assert!(read_records_from(text.as_bytes()).unwrap().is_empty());
    }

    #[test]
    fn tampered_header_names_column() {
        let text = CSV_COLUMNS.join(",").replace("lambda1", "lambda") + "\n";
        let err = read_records_from(text.as_bytes()).unwrap_err();
        assert!(
            matches!(&err, Error::Schema(msg) if msg.contains("`lambda`") && msg.contains("`lambda1`"))
        );
    }

    #[test]
    fn bad_value_reports_line_and_column() {
        let mut buf = Vec::new();
        write_records_to(&[sample_record(0), sample_record(1)], &mut buf, Format::Csv).unwrap();
        let text = String::from_utf8(buf)
            .unwrap()
            .replacen(",case3,", ",case9,", 2);
        let err = read_records_from(text.as_bytes()).unwrap_err();
        match err {
            Error::Parse { line, msg } => {
                assert_eq!(line, 2);
                assert!(msg.contains("`regime`"));
            }
            other => panic!("{other:?}"),
        }
        let short = CSV_COLUMNS.join(",") + "\n1,2,3\n";
        assert!(matches!(
            read_records_from(short.as_bytes()).unwrap_err(),
            Error::Schema(msg) if msg.contains("line 2")
        ));
    }

    #[test]
    fn empty_file_is_schema_error() {
        assert!(matches!(
            read_records_from(&b""[..]).unwrap_err(),
            Error::Schema(_)
        ));
    }
}
