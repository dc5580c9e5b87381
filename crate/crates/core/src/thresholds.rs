//! Pilot-calibrated statistical thresholds.
//!
//! The asymptotic statements carry no finite-`n` rates, so every frequency
//! floor and ratio window used by the acceptance suite and `verify` lives
//! here. None of these values is a proven constant.

/// Floor on the fraction of trials with `Δ ∈ [κ−1, κ+1]` at `n=20, p=0.1`.
pub const MAX_DEGREE_WINDOW_FREQ: f64 = 0.90;

/// Standard errors of slack for Monte Carlo frequencies against bounds.
pub const TAIL_SE_MULTIPLIER: f64 = 3.0;

/// Window for `λ₁ / max(√Δ, np)` at `p = 1/2`.
pub const RATIO_WINDOW: (f64, f64) = (0.95, 1.5);

/// Largest component edge count expected at `n=16, p=2⁻¹³`.
pub const CASE4_MAX_COMPONENT_EDGES: u64 = 6;

/// Floor on the fraction of trials whose largest component is within
/// [`CASE4_MAX_COMPONENT_EDGES`].
pub const CASE4_COMPONENT_FREQ: f64 = 0.95;

/// Floor on the fraction of trials with `λ₁² ∈ {Δ, Δ+1}`.
pub const CASE4_SHAPE_FREQ: f64 = 0.80;

/// Exact-inequality slack for the sandwich and walk bounds.
pub const BOUND_SLACK: f64 = 1e-9;

/// Solver agreement tolerance between Lanczos and the dense oracle, and
/// between global and per-component λ₁.
pub const SOLVER_AGREEMENT: f64 = 1e-8;

/// `λ₁ = √k` tolerance for star components.
pub const STAR_TOL: f64 = 1e-10;
