//! Subgraphs of the n-cube stored as per-vertex direction masks.
//!
//! Vertex `v` is the integer whose binary expansion is the coordinate vector.
//! Bit `i` of `masks[v]` is set iff the edge `{v, v ^ (1 << i)}` is present.

use std::io::{BufRead, Write};

use rand::distributions::{Bernoulli, Distribution};
use rand::Rng;

use crate::error::{Error, Result};
use crate::rng::{derive_seed, trial_rng, TrialRng};

pub const MIN_DIMENSION: u32 = 1;
pub const MAX_DIMENSION: u32 = 30;

/// Below this edge probability the sampler skips geometrically between edges.
pub const GEOMETRIC_SKIP_BELOW: f64 = 1.0 / (1u64 << 20) as f64;

pub(crate) fn check_dimension(n: u32) -> Result<()> {
    if !(MIN_DIMENSION..=MAX_DIMENSION).contains(&n) {
        return Err(Error::DimensionOutOfRange {
            n,
            min: MIN_DIMENSION,
            max: MAX_DIMENSION,
        });
    }
    Ok(())
}

pub(crate) fn check_probability(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::ProbabilityOutOfRange { p });
    }
    Ok(())
}

/// Sampling inputs for one trial.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SampleParams {
    pub n: u32,
    pub p: f64,
    pub master_seed: u64,
    pub trial_index: u64,
}

impl SampleParams {
    pub fn new(n: u32, p: f64, master_seed: u64, trial_index: u64) -> Self {
        Self {
            n,
            p,
            master_seed,
            trial_index,
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_dimension(self.n)?;
        check_probability(self.p)
    }

    pub fn derived_seed(&self) -> u64 {
        derive_seed(self.master_seed, self.n, self.p, self.trial_index)
    }

    pub fn algorithm(&self) -> SamplerAlgorithm {
        SamplerAlgorithm::for_probability(self.p)
    }
}

/// How the variate stream is consumed. Each variant is a stable, versioned
/// contract: the same seed yields the same graph for a given tag.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SamplerAlgorithm {
    /// One `u64` per canonical edge, kept iff below `floor(p * 2^64)`.
    Bernoulli,
    /// One `f64` per present edge plus one terminating draw; the gap to the
    /// next present edge is `floor(ln(1 - u) / ln(1 - p))`.
    GeometricSkip,
}

impl SamplerAlgorithm {
    pub fn for_probability(p: f64) -> Self {
        if p < GEOMETRIC_SKIP_BELOW {
            SamplerAlgorithm::GeometricSkip
        } else {
            SamplerAlgorithm::Bernoulli
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            SamplerAlgorithm::Bernoulli => "bernoulli-v1",
            SamplerAlgorithm::GeometricSkip => "geometric-skip-v1",
        }
    }
}

/// Inserts a zero bit at position `dir` of `j`: the `j`-th vertex (ascending)
/// whose bit `dir` is clear.
#[inline]
fn insert_zero_bit(j: u64, dir: u32) -> u64 {
    let low = j & ((1u64 << dir) - 1);
    ((j >> dir) << (dir + 1)) | low
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HypercubeSubgraph {
    n: u32,
    masks: Vec<u32>,
    edge_count: u64,
}

impl HypercubeSubgraph {
    pub fn empty(n: u32) -> Result<Self> {
        check_dimension(n)?;
        Ok(Self {
            n,
            masks: vec![0; 1usize << n],
            edge_count: 0,
        })
    }

    /// The full cube Qⁿ: every vertex has all `n` directions present.
    pub fn full_cube(n: u32) -> Result<Self> {
        check_dimension(n)?;
        let all = full_mask(n);
        Ok(Self {
            n,
            masks: vec![all; 1usize << n],
            edge_count: u64::from(n) << (n - 1),
        })
    }

    /// Builds a graph from raw masks, checking length and symmetry.
    pub fn from_masks(n: u32, masks: Vec<u32>) -> Result<Self> {
        check_dimension(n)?;
        let len = 1usize << n;
        if masks.len() != len {
            return Err(Error::LengthMismatch {
                expected: len,
                got: masks.len(),
            });
        }
        let all = full_mask(n);
        let mut degree_sum = 0u64;
        for (v, &mask) in masks.iter().enumerate() {
            if mask & !all != 0 {
                return Err(Error::InvalidParameter(format!(
                    "mask of vertex {v} has bits above direction {}",
                    n - 1
                )));
            }
            for dir in Directions(mask) {
                if masks[v ^ (1 << dir)] >> dir & 1 == 0 {
                    return Err(Error::AsymmetricMasks { v: v as u64, dir });
                }
            }
            degree_sum += u64::from(mask.count_ones());
        }
        Ok(Self {
            n,
            masks,
            edge_count: degree_sum / 2,
        })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn num_vertices(&self) -> usize {
        self.masks.len()
    }

    pub fn masks(&self) -> &[u32] {
        &self.masks
    }

    pub fn edge_count(&self) -> u64 {
        self.edge_count
    }

    pub fn check_vertex(&self, v: u64) -> Result<usize> {
        if v >= self.masks.len() as u64 {
            return Err(Error::VertexOutOfRange { v, n: self.n });
        }
        Ok(v as usize)
    }

    pub fn degree(&self, v: u64) -> Result<u32> {
        let v = self.check_vertex(v)?;
        Ok(self.masks[v].count_ones())
    }

    /// Degree without range checking; panics if `v` is out of range.
    #[inline]
    pub fn degree_at(&self, v: usize) -> u32 {
        self.masks[v].count_ones()
    }

    pub fn max_degree(&self) -> u32 {
        self.masks.iter().map(|m| m.count_ones()).max().unwrap_or(0)
    }

    /// Number of vertices of each degree `0..=n`.
    pub fn degree_histogram(&self) -> Vec<u64> {
        let mut hist = vec![0u64; self.n as usize + 1];
        for m in &self.masks {
            hist[m.count_ones() as usize] += 1;
        }
        hist
    }

    /// Neighbors of `v` in ascending direction order.
    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        Directions(self.masks[v]).map(move |dir| v ^ (1 << dir))
    }

    pub fn has_edge(&self, v: u64, w: u64) -> bool {
        let diff = v ^ w;
        if !diff.is_power_of_two() || v >= self.masks.len() as u64 || w >= self.masks.len() as u64 {
            return false;
        }
        self.masks[v as usize] & (diff as u32) != 0
    }

    /// Present edges as `(v, w)` with `v < w`, sorted.
    pub fn to_edge_list(&self) -> Vec<(u64, u64)> {
        let mut edges = Vec::with_capacity(self.edge_count as usize);
        for (v, &mask) in self.masks.iter().enumerate() {
            let up = mask & !(v as u32);
            for dir in Directions(up) {
                edges.push((v as u64, (v as u64) | (1 << dir)));
            }
        }
        edges
    }

    pub fn from_edge_list(n: u32, pairs: &[(u64, u64)]) -> Result<Self> {
        let mut g = Self::empty(n)?;
        for &(v, w) in pairs {
            g.insert_edge(v, w)?;
        }
        Ok(g)
    }

    /// A copy of this graph with the cube edge `{v, w}` added.
    pub fn with_edge(&self, v: u64, w: u64) -> Result<Self> {
        let (v, w) = (v.min(w), v.max(w));
        let mut g = self.clone();
        g.insert_edge(v, w)?;
        Ok(g)
    }

    /// Copies of this graph restricted to the edges accepted/rejected by `keep`.
    pub fn split_edges(&self, mut keep: impl FnMut(u64, u64) -> bool) -> (Self, Self) {
        let mut a = Self::empty(self.n).expect("dimension already validated");
        let mut b = a.clone();
        for (v, w) in self.to_edge_list() {
            let target = if keep(v, w) { &mut a } else { &mut b };
            target
                .insert_edge(v, w)
                .expect("edges of a valid graph are valid");
        }
        (a, b)
    }

    fn insert_edge(&mut self, v: u64, w: u64) -> Result<()> {
        self.check_vertex(v)?;
        self.check_vertex(w)?;
        let diff = v ^ w;
        if !diff.is_power_of_two() {
            return Err(Error::NotACubeEdge { v, w });
        }
        if v > w {
            return Err(Error::NonCanonicalEdge { v, w });
        }
        let bit = diff as u32;
        if self.masks[v as usize] & bit != 0 {
            return Err(Error::DuplicateEdge { v, w });
        }
        self.masks[v as usize] |= bit;
        self.masks[w as usize] |= bit;
        self.edge_count += 1;
        Ok(())
    }

    /// Writes the edge-list text format: `n m`, then one `v w` line per edge.
    pub fn write_edge_list<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "{} {}", self.n, self.edge_count)?;
        for (v, w) in self.to_edge_list() {
            writeln!(out, "{v} {w}")?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn read_edge_list<R: BufRead>(input: R) -> Result<Self> {
        let mut lines = input.lines().enumerate();
        let (n, m) = loop {
            let Some((idx, line)) = lines.next() else {
                return Err(Error::parse(1, "missing header line \"n m\""));
            };
            let line = line?;
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let (n, m) = parse_pair(line, idx + 1)?;
            let n = u32::try_from(n).map_err(|_| Error::parse(idx + 1, "n too large"))?;
            break (n, m);
        };
        let mut g = Self::empty(n)?;
        let mut seen = 0u64;
        for (idx, line) in lines {
            let line = line?;
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let (v, w) = parse_pair(line, idx + 1)?;
            g.insert_edge(v, w)
                .map_err(|e| Error::parse(idx + 1, e.to_string()))?;
            seen += 1;
        }
        if seen != m {
            return Err(Error::parse(
                0,
                format!("header declares {m} edges but {seen} were listed"),
            ));
        }
        Ok(g)
    }
}

fn parse_pair(line: &str, lineno: usize) -> Result<(u64, u64)> {
    let mut it = line.split_whitespace();
    let mut next = || -> Result<u64> {
        let tok = it
            .next()
            .ok_or_else(|| Error::parse(lineno, "expected two integers"))?;
        tok.parse::<u64>()
            .map_err(|e| Error::parse(lineno, format!("{tok:?}: {e}")))
    };
    let a = next()?;
    let b = next()?;
    if it.next().is_some() {
        return Err(Error::parse(lineno, "expected exactly two integers"));
    }
    Ok((a, b))
}

#[inline]
pub(crate) fn full_mask(n: u32) -> u32 {
    if n >= 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

/// Iterates set bit positions of a mask in ascending order.
#[derive(Clone, Copy)]
pub(crate) struct Directions(pub u32);

impl Iterator for Directions {
    type Item = u32;

    #[inline]
    fn next(&mut self) -> Option<u32> {
        if self.0 == 0 {
            return None;
        }
        let dir = self.0.trailing_zeros();
        self.0 &= self.0 - 1;
        Some(dir)
    }
}

/// Draws `G(Qⁿ, p)` for one trial.
///
/// Canonical edges `(v, i)` with bit `i` of `v` clear are visited
/// direction-major: `i = 0..n`, and within a direction the `2ⁿ⁻¹` eligible
/// vertices in ascending order. See [`SamplerAlgorithm`] for how variates are
/// consumed.
pub fn sample_subgraph(params: &SampleParams) -> Result<HypercubeSubgraph> {
    params.validate()?;
    let mut rng = trial_rng(params.derived_seed());
    let mut g = HypercubeSubgraph::empty(params.n)?;
    match params.algorithm() {
        SamplerAlgorithm::Bernoulli => sample_bernoulli(&mut g, params.p, &mut rng),
        SamplerAlgorithm::GeometricSkip => sample_geometric(&mut g, params.p, &mut rng),
    }
    Ok(g)
}

fn sample_bernoulli(g: &mut HypercubeSubgraph, p: f64, rng: &mut TrialRng) {
    let coin = Bernoulli::new(p).expect("probability validated");
    let n = g.n;
    let half = 1u64 << (n - 1);
    let mut edges = 0u64;
    for dir in 0..n {
        let bit = 1u32 << dir;
        for j in 0..half {
            if coin.sample(rng) {
                let v = insert_zero_bit(j, dir) as usize;
                g.masks[v] |= bit;
                g.masks[v | bit as usize] |= bit;
                edges += 1;
            }
        }
    }
    g.edge_count = edges;
}

fn sample_geometric(g: &mut HypercubeSubgraph, p: f64, rng: &mut TrialRng) {
    if p <= 0.0 {
        return;
    }
    let n = g.n;
    let half = 1u64 << (n - 1);
    let total = u64::from(n) * half;
    let log_q = (-p).ln_1p();
    let mut idx = 0u64;
    let mut edges = 0u64;
    loop {
        let u: f64 = rng.gen();
        let gap = ((1.0 - u).ln() / log_q).floor();
        if gap >= (total - idx) as f64 {
            break;
        }
        idx += gap as u64;
        let dir = (idx / half) as u32;
        let v = insert_zero_bit(idx % half, dir) as usize;
        let bit = 1u32 << dir;
        g.masks[v] |= bit;
        g.masks[v | bit as usize] |= bit;
        edges += 1;
        idx += 1;
        if idx >= total {
            break;
        }
    }
    g.edge_count = edges;
}
