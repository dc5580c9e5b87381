//! Symmetric tridiagonal helpers for Ritz extraction.
//!
//! `diag` has length `k`, `off` has length `k - 1`.

/// Number of eigenvalues strictly below `x` (Sturm sequence).
fn count_below(diag: &[f64], off: &[f64], x: f64) -> usize {
    let mut count = 0;
    let mut d = 1.0;
    for (i, &a) in diag.iter().enumerate() {
        let b2 = if i == 0 { 0.0 } else { off[i - 1] * off[i - 1] };
        d = if i == 0 { a - x } else { a - x - b2 / d };
        if d == 0.0 {
            d = -f64::EPSILON * (a.abs() + x.abs()).max(f64::MIN_POSITIVE);
        }
        if d < 0.0 {
            count += 1;
        }
    }
    count
}

/// Largest eigenvalue by bisection on the Sturm count.
pub(super) fn largest_eigenvalue(diag: &[f64], off: &[f64]) -> f64 {
    let k = diag.len();
    debug_assert!(k >= 1 && off.len() + 1 == k);
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..k {
        let left = if i > 0 { off[i - 1].abs() } else { 0.0 };
        let right = if i + 1 < k { off[i].abs() } else { 0.0 };
        lo = lo.min(diag[i] - left - right);
        hi = hi.max(diag[i] + left + right);
    }
    if k == 1 {
        return diag[0];
    }
    // Invariant: fewer than k eigenvalues below `lo`, all k below `hi`.
    lo -= f64::EPSILON * lo.abs().max(1.0);
    hi += f64::EPSILON * hi.abs().max(1.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if count_below(diag, off, mid) == k {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Unit eigenvector of `T` for an (accurate) eigenvalue `theta`, by two
/// steps of inverse iteration with a pivoted tridiagonal LU.
pub(super) fn eigenvector(diag: &[f64], off: &[f64], theta: f64) -> Vec<f64> {
    let k = diag.len();
    if k == 1 {
        return vec![1.0];
    }
    let scale = diag
        .iter()
        .map(|d| d.abs())
        .chain(off.iter().map(|o| o.abs()))
        .fold(theta.abs(), f64::max)
        .max(f64::MIN_POSITIVE);
    let tiny = f64::EPSILON * scale;

    let lu = TridiagLu::factor(
        off.to_vec(),
        diag.iter().map(|d| d - theta).collect(),
        off.to_vec(),
        tiny,
    );
    let mut y = vec![1.0; k];
    for _ in 0..3 {
        lu.solve(&mut y);
        let norm = y.iter().map(|v| v * v).sum::<f64>().sqrt();
        if !norm.is_finite() || norm == 0.0 {
            y = vec![1.0 / (k as f64).sqrt(); k];
            break;
        }
        for v in &mut y {
            *v /= norm;
        }
    }
    y
}

/// LU with partial pivoting of a general tridiagonal matrix, laid out as in
/// LAPACK `gttrf`.
struct TridiagLu {
    dl: Vec<f64>,
    d: Vec<f64>,
    du: Vec<f64>,
    du2: Vec<f64>,
    swapped: Vec<bool>,
}

impl TridiagLu {
    fn factor(mut dl: Vec<f64>, mut d: Vec<f64>, mut du: Vec<f64>, tiny: f64) -> Self {
        let k = d.len();
        let mut du2 = vec![0.0; k.saturating_sub(2)];
        let mut swapped = vec![false; k.saturating_sub(1)];
        for i in 0..k - 1 {
            if d[i].abs() >= dl[i].abs() {
                if d[i] != 0.0 {
                    let fact = dl[i] / d[i];
                    dl[i] = fact;
                    d[i + 1] -= fact * du[i];
                } else {
                    dl[i] = 0.0;
                }
            } else {
                let fact = d[i] / dl[i];
                d[i] = dl[i];
                dl[i] = fact;
                let temp = du[i];
                du[i] = d[i + 1];
                d[i + 1] = temp - fact * d[i + 1];
                if i + 2 < k {
                    du2[i] = du[i + 1];
                    du[i + 1] *= -fact;
                }
                swapped[i] = true;
            }
        }
        for di in &mut d {
            if di.abs() < tiny {
                *di = if *di < 0.0 { -tiny } else { tiny };
            }
        }
        Self {
            dl,
            d,
            du,
            du2,
            swapped,
        }
    }

    fn solve(&self, b: &mut [f64]) {
        let k = self.d.len();
        for i in 0..k - 1 {
            if self.swapped[i] {
                let temp = b[i] - self.dl[i] * b[i + 1];
                b[i] = b[i + 1];
                b[i + 1] = temp;
            } else {
                b[i + 1] -= self.dl[i] * b[i];
            }
        }
        b[k - 1] /= self.d[k - 1];
        if k > 1 {
            b[k - 2] = (b[k - 2] - self.du[k - 2] * b[k - 1]) / self.d[k - 2];
        }
        for i in (0..k.saturating_sub(2)).rev() {
            b[i] = (b[i] - self.du[i] * b[i + 1] - self.du2[i] * b[i + 2]) / self.d[i];
        }
    }
}
