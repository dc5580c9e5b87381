/// Sweeps stop once the off-diagonal Frobenius norm drops to this value.
pub const JACOBI_OFF_DIAGONAL_TOL: f64 = 1e-12;

const MAX_SWEEPS: usize = 100;

fn off_diagonal_norm(a: &[f64], dim: usize) -> f64 {
    let mut sum = 0.0;
    for r in 0..dim {
        for c in (r + 1)..dim {
            sum += 2.0 * a[r * dim + c] * a[r * dim + c];
        }
    }
    sum.sqrt()
}

/// Eigenvalues of a dense symmetric matrix (row-major, `dim × dim`) by
/// row-cyclic Jacobi rotations. Order of the result is unspecified.
pub fn jacobi_eigenvalues(mut a: Vec<f64>, dim: usize) -> Vec<f64> {
    assert_eq!(a.len(), dim * dim, "matrix is not dim x dim");
    for _ in 0..MAX_SWEEPS {
        if off_diagonal_norm(&a, dim) <= JACOBI_OFF_DIAGONAL_TOL {
            break;
        }
        for p in 0..dim {
            for q in (p + 1)..dim {
                let apq = a[p * dim + q];
                if apq == 0.0 {
                    continue;
                }
                let app = a[p * dim + p];
                let aqq = a[q * dim + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;

                for k in 0..dim {
                    if k == p || k == q {
                        continue;
                    }
                    let akp = a[k * dim + p];
                    let akq = a[k * dim + q];
                    let new_kp = c * akp - s * akq;
                    let new_kq = s * akp + c * akq;
                    a[k * dim + p] = new_kp;
                    a[p * dim + k] = new_kp;
                    a[k * dim + q] = new_kq;
                    a[q * dim + k] = new_kq;
                }
                a[p * dim + p] = app - t * apq;
                a[q * dim + q] = aqq + t * apq;
                a[p * dim + q] = 0.0;
                a[q * dim + p] = 0.0;
            }
        }
    }
    (0..dim).map(|i| a[i * dim + i]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_by_two() {
        // [[2, 1], [1, 2]] has eigenvalues 3 and 1.
        let mut e = jacobi_eigenvalues(vec![2.0, 1.0, 1.0, 2.0], 2);
        e.sort_by(f64::total_cmp);
        assert!((e[0] - 1.0).abs() < 1e-14 && (e[1] - 3.0).abs() < 1e-14);
    }

    #[test]
    fn path_graph_spectrum() {
        // Path P_m has eigenvalues 2 cos(kπ/(m+1)), k = 1..m.
        let m = 7;
        let mut a = vec![0.0; m * m];
        for i in 0..m - 1 {
            a[i * m + i + 1] = 1.0;
            a[(i + 1) * m + i] = 1.0;
        }
        let mut got = jacobi_eigenvalues(a, m);
        got.sort_by(f64::total_cmp);
        let mut want: Vec<f64> = (1..=m)
            .map(|k| 2.0 * (k as f64 * std::f64::consts::PI / (m as f64 + 1.0)).cos())
            .collect();
        want.sort_by(f64::total_cmp);
        for (g, w) in got.iter().zip(&want) {
            assert!((g - w).abs() < 1e-12);
        }
    }

    #[test]
    fn trace_preserved() {
        let a = vec![4.0, -2.0, 0.5, -2.0, 1.0, 3.0, 0.5, 3.0, -1.5];
        let e = jacobi_eigenvalues(a, 3);
        assert!((e.iter().sum::<f64>() - 3.5).abs() < 1e-12);
    }
}
