use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::cube_graph::{check_dimension, check_probability};
use crate::eigensolve::SolverConfig;
use crate::error::{Error, Result};

/// Edge probability as a function of `n`.
#[derive(Clone, Debug, PartialEq)]
pub enum PRule {
    /// `const:x`, or a bare number.
    Const(f64),
    /// `pow:e`, `p = nᵉ`. The exponent may be a fraction such as `-4/9`.
    Pow { exponent: f64, text: String },
    /// `sparse:k`, `p = 2^{−n/k}/n`.
    Sparse(u32),
}

impl PRule {
    pub fn eval(&self, n: u32) -> f64 {
        let nf = f64::from(n);
        match self {
            PRule::Const(p) => *p,
            PRule::Pow { exponent, .. } => nf.powf(*exponent),
            PRule::Sparse(k) => (-(nf / f64::from(*k)) * std::f64::consts::LN_2).exp() / nf,
        }
    }
}

impl fmt::Display for PRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PRule::Const(p) => write!(f, "const:{p}"),
            PRule::Pow { text, .. } => write!(f, "pow:{text}"),
            PRule::Sparse(k) => write!(f, "sparse:{k}"),
        }
    }
}

fn parse_real_or_fraction(s: &str) -> Option<f64> {
    match s.split_once('/') {
        Some((num, den)) => {
            let num: f64 = num.trim().parse().ok()?;
            let den: f64 = den.trim().parse().ok()?;
            (den != 0.0).then(|| num / den)
        }
        None => s.trim().parse().ok(),
    }
    .filter(|x: &f64| x.is_finite())
}

impl FromStr for PRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::InvalidParameter(format!("invalid p-rule {s:?}"));
        let (kind, arg) = s.split_once(':').unwrap_or(("const", s));
        match kind.trim() {
            "const" => arg.trim().parse().map(PRule::Const).map_err(|_| bad()),
            "pow" => {
                let exponent = parse_real_or_fraction(arg).ok_or_else(bad)?;
                Ok(PRule::Pow {
                    exponent,
                    text: arg.trim().to_string(),
                })
            }
            "sparse" => match arg.trim().parse::<u32>() {
                Ok(k) if k >= 1 => Ok(PRule::Sparse(k)),
                _ => Err(bad()),
            },
            _ => Err(bad()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(Error::InvalidParameter(format!("unknown format {other:?}"))),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Csv => "csv",
            Format::Json => "json",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub n_values: Vec<u32>,
    pub p_rules: Vec<PRule>,
    pub trials: u64,
    pub master_seed: u64,
    pub solver: SolverConfig,
    pub output_path: Option<PathBuf>,
    pub plot_path: Option<PathBuf>,
    pub format: Format,
    /// Compute the component census for every trial.
    pub census: bool,
    /// `(a, b)` exponent pairs for the distance-{1,2} clustering statistic.
    pub locality: Vec<(f64, f64)>,
    /// Worker threads; `None` uses the rayon default.
    pub threads: Option<usize>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            n_values: vec![8, 12, 16],
            p_rules: vec![PRule::Const(0.5)],
            trials: 20,
            master_seed: 0,
            solver: SolverConfig::default(),
            output_path: None,
            plot_path: None,
            format: Format::Csv,
            census: false,
            locality: Vec::new(),
            threads: None,
        }
    }
}

fn list<T: FromStr>(value: &str) -> std::result::Result<Vec<T>, String> {
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse().map_err(|_| format!("cannot parse {s:?}")))
        .collect()
}

fn scalar<T: FromStr>(value: &str) -> std::result::Result<T, String> {
    value
        .trim()
        .parse()
        .map_err(|_| format!("cannot parse {:?}", value.trim()))
}

fn flag(value: &str) -> std::result::Result<bool, String> {
    match value.trim() {
        "true" | "yes" | "1" | "on" => Ok(true),
        "false" | "no" | "0" | "off" => Ok(false),
        other => Err(format!("expected a boolean, got {other:?}")),
    }
}

impl ExperimentConfig {
    /// Keys accepted by [`set`](Self::set) and the config file.
    pub const KEYS: [&'static str; 13] = [
        "n_values",
        "p_values",
        "trials",
        "master_seed",
        "tol",
        "max_iter",
        "basis_memory_bytes",
        "output_path",
        "plot_path",
        "format",
        "census",
        "locality",
        "threads",
    ];

    /// Sets one key from its textual value.
    pub fn set(&mut self, key: &str, value: &str) -> std::result::Result<(), String> {
        match key {
            "n_values" => self.n_values = list(value)?,
            "p_values" => {
                self.p_rules = value
                    .split(',')
                    .map(str::trim)
                    .filter(|s| !s.is_empty())
                    .map(|s| s.parse::<PRule>().map_err(|e| e.to_string()))
                    .collect::<std::result::Result<_, _>>()?
            }
            "trials" => self.trials = scalar(value)?,
            "master_seed" => self.master_seed = scalar(value)?,
            "tol" => self.solver.tol = scalar(value)?,
            "max_iter" => self.solver.max_iter = scalar(value)?,
            "basis_memory_bytes" => self.solver.basis_memory_bytes = scalar(value)?,
            "output_path" => self.output_path = Some(PathBuf::from(value.trim())),
            "plot_path" => self.plot_path = Some(PathBuf::from(value.trim())),
            "format" => self.format = value.parse().map_err(|e: Error| e.to_string())?,
            "census" => self.census = flag(value)?,
            "locality" => {
                self.locality = value
                    .split(',')
                    .map(str::trim)
                    .filter(|s| !s.is_empty())
                    .map(|pair| {
                        let (a, b) = pair
                            .split_once(':')
                            .ok_or_else(|| format!("locality pair {pair:?} must be a:b"))?;
                        let a = parse_real_or_fraction(a)
                            .ok_or_else(|| format!("bad a in {pair:?}"))?;
                        let b = parse_real_or_fraction(b)
                            .ok_or_else(|| format!("bad b in {pair:?}"))?;
                        Ok((a, b))
                    })
                    .collect::<std::result::Result<_, String>>()?
            }
            "threads" => self.threads = Some(scalar(value)?),
            other => return Err(format!("unknown key {other:?}")),
        }
        Ok(())
    }

    /// Reads `key = value` lines over the defaults. Blank lines and lines
    /// starting with `#` are skipped.
    pub fn from_kv_str(text: &str) -> Result<Self> {
        let mut config = Self::default();
        config.apply_kv_str(text)?;
        Ok(config)
    }

    pub fn apply_kv_str(&mut self, text: &str) -> Result<()> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::parse(i + 1, "expected key = value"))?;
            self.set(key.trim(), value)
                .map_err(|msg| Error::parse(i + 1, msg))?;
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_values.is_empty() {
            return Err(Error::InvalidParameter("n_values is empty".into()));
        }
        if self.p_rules.is_empty() {
            return Err(Error::InvalidParameter("p_values is empty".into()));
        }
        if self.trials == 0 {
            return Err(Error::InvalidParameter("trials must be >= 1".into()));
        }
        if self.threads == Some(0) {
            return Err(Error::InvalidParameter("threads must be >= 1".into()));
        }
        for &(a, b) in &self.locality {
            if !(a > 0.0 && b > 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "locality exponents must be positive, got ({a}, {b})"
                )));
            }
        }
        self.solver.validate()?;
        for &n in &self.n_values {
            check_dimension(n)?;
            for rule in &self.p_rules {
                check_probability(rule.eval(n))?;
            }
        }
        Ok(())
    }

    /// Grid points `(n, rule index, p)` in canonical order.
    pub fn grid(&self) -> Vec<(u32, usize, f64)> {
        self.n_values
            .iter()
            .flat_map(|&n| {
                self.p_rules
                    .iter()
                    .enumerate()
                    .map(move |(i, r)| (n, i, r.eval(n)))
            })
            .collect()
    }
}
