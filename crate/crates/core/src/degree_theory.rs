//! Maximum-degree theory for `G(Qⁿ, p)`.
//!
//! A vertex degree is `Binomial(n, p)`. With
//! `term(k) = 2ⁿ·C(n,k)·pᵏ(1−p)ⁿ⁻ᵏ`, κ(n) is the largest `k` with
//! `term(k) ≥ 1`, and `E[X_k] = Σ_{l≥k} term(l)` is the expected number of
//! vertices of degree at least `k`. All binomial arithmetic is done in the
//! log domain.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::cube_graph::check_probability;
use crate::error::{Error, Result};

/// `ln C(n, k)`, exact summation of `ln((n−i)/(i+1))`.
pub fn ln_binomial(n: u32, k: u32) -> f64 {
    if k > n {
        return f64::NEG_INFINITY;
    }
    let k = k.min(n - k);
    let mut acc = Neumaier::default();
    for i in 0..k {
        acc.add((f64::from(n - i) / f64::from(i + 1)).ln());
    }
    acc.sum()
}

/// `x·ln(y)` with the convention `0·ln 0 = 0`.
fn xlny(x: f64, y: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * y.ln()
    }
}

/// `ln term(k) = n ln 2 + ln C(n,k) + k ln p + (n−k) ln(1−p)`.
pub fn ln_term(n: u32, p: f64, k: u32) -> f64 {
    if k > n {
        return f64::NEG_INFINITY;
    }
    f64::from(n) * std::f64::consts::LN_2
        + ln_binomial(n, k)
        + xlny(f64::from(k), p)
        + xlny(f64::from(n - k), 1.0 - p)
}

/// Neumaier-compensated running sum.
#[derive(Default, Clone, Copy)]
struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn sum(&self) -> f64 {
        self.sum + self.comp
    }
}

/// `E[X_k] = 2ⁿ Σ_{l≥k} C(n,l) pˡ(1−p)ⁿ⁻ˡ`, the expected number of vertices
/// with degree at least `k`.
pub fn expected_exceed_count(n: u32, p: f64, k: u32) -> Result<f64> {
    check_probability(p)?;
    if k == 0 {
        return Ok(2f64.powi(n as i32));
    }
    if k > n {
        return Ok(0.0);
    }
    let logs: Vec<f64> = (k..=n).map(|l| ln_term(n, p, l)).collect();
    let max = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return Ok(0.0);
    }
    let mut acc = Neumaier::default();
    for l in logs {
        acc.add((l - max).exp());
    }
    Ok(max.exp() * acc.sum())
}

/// Slack allowed when deciding `term(k) ≥ 1` in the log domain, so that
/// exact ties such as `n=2, p=1/2, k=2` are not lost to rounding.
pub const KAPPA_LOG_SLACK: f64 = 1e-12;

/// κ(n) = max{k ∈ 0..=n : term(k) ≥ 1}, or `None` when no `k` qualifies.
pub fn kappa(n: u32, p: f64) -> Result<Option<u32>> {
    check_probability(p)?;
    Ok((0..=n)
        .rev()
        .find(|&k| ln_term(n, p, k) >= -KAPPA_LOG_SLACK))
}

/// The four probability ranges used in the case analysis of the upper bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    /// `e^{−ln⁴n} ≤ p ≤ n^{−2/3}`
    Case1,
    /// `p ≥ n^{−4/9}`
    Case2,
    /// `n^{−2/3} ≤ p ≤ n^{−4/9}`
    Case3,
    /// `p ≤ e^{−ln⁴n}`
    Case4,
}

impl Regime {
    pub const ALL: [Regime; 4] = [Regime::Case1, Regime::Case2, Regime::Case3, Regime::Case4];

    pub fn label(self) -> &'static str {
        match self {
            Regime::Case1 => "case1",
            Regime::Case2 => "case2",
            Regime::Case3 => "case3",
            Regime::Case4 => "case4",
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Regime {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Regime::ALL
            .into_iter()
            .find(|r| r.label() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown regime {s:?}")))
    }
}

/// Boundaries `(e^{−ln⁴n}, n^{−2/3}, n^{−4/9})`.
pub fn regime_boundaries(n: u32) -> (f64, f64, f64) {
    let nf = f64::from(n);
    let ln = nf.ln();
    (
        (-ln.powi(4)).exp(),
        nf.powf(-2.0 / 3.0),
        nf.powf(-4.0 / 9.0),
    )
}

/// Case containing `p`; a `p` on a shared boundary goes to the lower-numbered
/// case.
pub fn classify_regime(n: u32, p: f64) -> Regime {
    let (b4, b13, b32) = regime_boundaries(n);
    if p >= b32 {
        Regime::Case2
    } else if p <= b13 && p >= b4 {
        Regime::Case1
    } else if p > b13 {
        Regime::Case3
    } else {
        Regime::Case4
    }
}

/// A probability strictly inside `regime` at dimension `n`: the geometric
/// midpoint of its interval, or a point below the lowest boundary for
/// [`Regime::Case4`]. `None` when the interval is empty at this `n`.
pub fn regime_representative(n: u32, regime: Regime) -> Option<f64> {
    let (b4, b13, b32) = regime_boundaries(n);
    let p = match regime {
        Regime::Case2 => b32.sqrt(),
        Regime::Case3 => (b13 * b32).sqrt(),
        Regime::Case1 => (b4 * b13).sqrt(),
        Regime::Case4 => b4.min(b13) / 4.0,
    };
    (p > 0.0 && p <= 1.0 && classify_regime(n, p) == regime).then_some(p)
}

/// Root `c ∈ (p, 1)` of `ln 2 + c ln p + (1−c) ln(1−p) = c ln c + (1−c) ln(1−c)`.
///
/// For `p ≥ 1/2` the coefficient is 1.
pub fn constant_p_coefficient(p: f64) -> Result<f64> {
    check_probability(p)?;
    if p == 0.0 {
        return Err(Error::InvalidParameter(
            "degree coefficient needs p > 0".into(),
        ));
    }
    if p >= 0.5 {
        return Ok(1.0);
    }
    let mut lo = p;
    let mut hi = 1.0;
    for _ in 0..300 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if coefficient_residual(p, mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let (rl, rh) = (coefficient_residual(p, lo), coefficient_residual(p, hi));
    Ok(if rl.abs() <= rh.abs() { lo } else { hi })
}

/// Left side minus right side of the coefficient equation; positive below
/// the root.
pub fn coefficient_residual(p: f64, c: f64) -> f64 {
    std::f64::consts::LN_2 + xlny(c, p) + xlny(1.0 - c, 1.0 - p)
        - xlny(c, c)
        - xlny(1.0 - c, 1.0 - c)
}

/// Upper bound on `Pr(Δ < k)`: `exp(−E[X_k]/2)`, from independence of the
/// events `d(v) < k` over one side of the bipartition.
pub fn prob_max_degree_lt(n: u32, p: f64, k: u32) -> Result<f64> {
    let ex = expected_exceed_count(n, p, k)?;
    Ok((-ex / 2.0).exp().clamp(0.0, 1.0))
}

/// Markov bound on `Pr(Δ ≥ k)`: `min(1, E[X_k])`.
pub fn prob_max_degree_ge(n: u32, p: f64, k: u32) -> Result<f64> {
    let ex = expected_exceed_count(n, p, k)?;
    Ok(ex.clamp(0.0, 1.0))
}

/// Upper bound on `Pr[Binomial(n, p) ≥ t]`.
///
/// With `μ = np` and `x = t − μ` the large-deviation form is
/// `exp(−x²/2μ + x³/2μ²)`. That exponent is minimized at `x = 2μ/3` and
/// grows afterwards, so the bound at `t` uses `min(x, 2μ/3)`: for larger `t`
/// the tail is at most the tail at `μ + 2μ/3`. Returns 1 for `t ≤ μ`.
pub fn chernoff_degree_tail(n: u32, p: f64, t: f64) -> Result<f64> {
    check_probability(p)?;
    let mu = f64::from(n) * p;
    if mu <= 0.0 || t.is_nan() || t <= mu {
        return Ok(1.0);
    }
    let x = (t - mu).min(2.0 * mu / 3.0);
    let exponent = -x * x / (2.0 * mu) + x * x * x / (2.0 * mu * mu);
    Ok(exponent.exp().clamp(0.0, 1.0))
}

/// Which statement about the maximum degree the prediction comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DegreeSubcase {
    /// `κ−1 ≤ Δ ≤ κ+1`, also the default when nothing sharper applies.
    Window,
    /// `p` within the band around `2^{−n/k}/n`: `Δ ∈ {k−1, k}`.
    Proportional { k: u32 },
    /// Exponentially small `p` between bands: `Δ = κ`.
    Exact,
    /// `p = 0`: no edges.
    Empty,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DegreeTheoryConfig {
    /// Multiplicative half-width of the band around `2^{−n/k}/n`.
    pub band_factor: f64,
}

impl Default for DegreeTheoryConfig {
    fn default() -> Self {
        Self { band_factor: 2.0 }
    }
}

impl DegreeTheoryConfig {
    /// Largest `k` whose band does not touch the neighbouring bands, i.e.
    /// `2^{n/(k(k+1))} > band_factor²`.
    pub fn resolvable_bands(&self, n: u32) -> u32 {
        let limit = 2.0 * self.band_factor.log2();
        (1..=n)
            .take_while(|&k| f64::from(n) / f64::from(k * (k + 1)) > limit)
            .last()
            .unwrap_or(0)
    }
}

/// `2^{−n/k}/n`.
pub fn band_center(n: u32, k: u32) -> f64 {
    (-(f64::from(n) / f64::from(k)) * std::f64::consts::LN_2).exp() / f64::from(n)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeRange {
    pub lo: u32,
    pub hi: u32,
}

impl DegreeRange {
    pub fn contains(&self, delta: u32) -> bool {
        (self.lo..=self.hi).contains(&delta)
    }
}

/// Predicted range of the maximum degree, with the sub-case it comes from.
pub fn predicted_max_degree(
    n: u32,
    p: f64,
    config: &DegreeTheoryConfig,
) -> Result<(DegreeRange, DegreeSubcase)> {
    check_probability(p)?;
    if p == 0.0 {
        return Ok((DegreeRange { lo: 0, hi: 0 }, DegreeSubcase::Empty));
    }
    let kappa = kappa(n, p)?
        .ok_or_else(|| Error::InvalidParameter(format!("kappa undefined for n={n}, p={p}")))?;
    let f = config.band_factor;
    let kmax = config.resolvable_bands(n);
    for k in 1..=kmax {
        let b = band_center(n, k);
        if p >= b / f && p <= b * f {
            return Ok((
                DegreeRange { lo: k - 1, hi: k },
                DegreeSubcase::Proportional { k },
            ));
        }
    }
    if kmax >= 1 && p < band_center(n, kmax) * f {
        return Ok((
            DegreeRange {
                lo: kappa,
                hi: kappa,
            },
            DegreeSubcase::Exact,
        ));
    }
    Ok((
        DegreeRange {
            lo: kappa.saturating_sub(1),
            hi: (kappa + 1).min(n),
        },
        DegreeSubcase::Window,
    ))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DegreeProfile {
    pub n: u32,
    pub p: f64,
    pub kappa: Option<u32>,
    pub regime: Regime,
    pub predicted_delta_range: DegreeRange,
    pub degree_subcase: DegreeSubcase,
    /// Constant-`p` degree coefficient, reported in the dense regime only.
    pub c_coefficient: Option<f64>,
    /// `E[X_k]` for `k = 0..=n`.
    pub expected_exceed: Vec<f64>,
}

impl DegreeProfile {
    pub fn compute(n: u32, p: f64, config: &DegreeTheoryConfig) -> Result<Self> {
        crate::cube_graph::check_dimension(n)?;
        let kappa = kappa(n, p)?;
        let regime = classify_regime(n, p);
        let (range, subcase) = predicted_max_degree(n, p, config)?;
        let c_coefficient = if regime == Regime::Case2 && p > 0.0 {
            Some(constant_p_coefficient(p)?)
        } else {
            None
        };
        let expected_exceed = (0..=n)
            .map(|k| expected_exceed_count(n, p, k))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            n,
            p,
            kappa,
            regime,
            predicted_delta_range: range,
            degree_subcase: subcase,
            c_coefficient,
            expected_exceed,
        })
    }
}
