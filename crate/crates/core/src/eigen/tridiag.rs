//! Lowest eigenpairs of a small symmetric tridiagonal matrix: Sturm-sequence
//! bisection for the values, inverse iteration for the vectors. Used on the
//! Lanczos projection, where only a few extremal pairs are needed.

/// Number of eigenvalues strictly below `x`.
pub(crate) fn sturm_count(diag: &[f64], off: &[f64], x: f64) -> usize {
    let mut count = 0;
    let mut q = 1.0f64;
    for i in 0..diag.len() {
        let e2 = if i == 0 { 0.0 } else { off[i - 1] * off[i - 1] };
        q = diag[i] - x - if i == 0 { 0.0 } else { e2 / q };
        if q == 0.0 {
            q = -f64::EPSILON * (diag[i].abs() + x.abs()).max(f64::MIN_POSITIVE);
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// Gershgorin interval containing the whole spectrum.
fn bounds(diag: &[f64], off: &[f64]) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..diag.len() {
        let r = if i > 0 { off[i - 1].abs() } else { 0.0 }
            + if i < off.len() { off[i].abs() } else { 0.0 };
        lo = lo.min(diag[i] - r);
        hi = hi.max(diag[i] + r);
    }
    (lo, hi)
}

/// The `k` smallest eigenvalues, ascending.
pub(crate) fn lowest_eigenvalues(diag: &[f64], off: &[f64], k: usize) -> Vec<f64> {
    let (lo, hi) = bounds(diag, off);
    let scale = lo.abs().max(hi.abs()).max(1.0);
    let k = k.min(diag.len());
    (0..k)
        .map(|idx| {
            // Smallest x with more than `idx` eigenvalues at or below it.
            let (mut a, mut b) = (lo - scale * 1e-12, hi + scale * 1e-12);
            for _ in 0..200 {
                let mid = 0.5 * (a + b);
                if mid <= a || mid >= b {
                    break;
                }
                if sturm_count(diag, off, mid) > idx {
                    b = mid;
                } else {
                    a = mid;
                }
            }
            0.5 * (a + b)
        })
        .collect()
}

/// Eigenvector of an unreduced tridiagonal for the (accurate) eigenvalue
/// `lambda`, by inverse iteration with partially pivoted elimination.
pub(crate) fn eigenvector(diag: &[f64], off: &[f64], lambda: f64, prior: &[Vec<f64>]) -> Vec<f64> {
    let m = diag.len();
    if m == 1 {
        return vec![1.0];
    }
    let (lo, hi) = bounds(diag, off);
    let scale = lo.abs().max(hi.abs()).max(1.0);
    let shift = lambda + scale * 1e-14;
    let lu = TridiagLu::factor(diag, off, shift, scale);
    let mut x: Vec<f64> = (0..m)
        .map(|i| 1.0 + ((i * 7919) % 13) as f64 * 0.01)
        .collect();
    for _ in 0..4 {
        for p in prior {
            let d: f64 = p.iter().zip(&x).map(|(a, b)| a * b).sum();
            x.iter_mut().zip(p).for_each(|(xi, pi)| *xi -= d * pi);
        }
        lu.solve(&mut x);
        let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        x.iter_mut().for_each(|v| *v /= norm);
    }
    for p in prior {
        let d: f64 = p.iter().zip(&x).map(|(a, b)| a * b).sum();
        x.iter_mut().zip(p).for_each(|(xi, pi)| *xi -= d * pi);
    }
    let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    x.iter_mut().for_each(|v| *v /= norm);
    x
}

/// LU of `T - shift I` with row interchanges; U has two superdiagonals.
struct TridiagLu {
    u0: Vec<f64>,
    u1: Vec<f64>,
    u2: Vec<f64>,
    l: Vec<f64>,
    swapped: Vec<bool>,
}

impl TridiagLu {
    fn factor(diag: &[f64], off: &[f64], shift: f64, scale: f64) -> Self {
        let m = diag.len();
        let tiny = scale * f64::EPSILON;
        let mut u0 = vec![0.0; m];
        let mut u1 = vec![0.0; m];
        let mut u2 = vec![0.0; m];
        let mut l = vec![0.0; m];
        let mut swapped = vec![false; m];
        // Current row i holds (a, b, c) at columns (i, i+1, i+2).
        let mut a = diag[0] - shift;
        let mut b = if m > 1 { off[0] } else { 0.0 };
        let mut c = 0.0;
        for i in 0..m - 1 {
            let sub = off[i];
            let (nd, nb) = (
                diag[i + 1] - shift,
                if i + 2 < m { off[i + 1] } else { 0.0 },
            );
            if sub.abs() > a.abs() {
                // Swap row i with row i+1.
                swapped[i] = true;
                let mult = a / sub;
                l[i] = mult;
                u0[i] = sub;
                u1[i] = nd;
                u2[i] = nb;
                a = b - mult * nd;
                b = c - mult * nb;
            } else {
                let piv = if a == 0.0 { tiny } else { a };
                let mult = sub / piv;
                l[i] = mult;
                u0[i] = piv;
                u1[i] = b;
                u2[i] = c;
                a = nd - mult * b;
                b = nb - mult * c;
            }
            c = 0.0;
        }
        u0[m - 1] = if a.abs() < tiny { tiny.copysign(a) } else { a };
        Self {
            u0,
            u1,
            u2,
            l,
            swapped,
        }
    }

    fn solve(&self, x: &mut [f64]) {
        let m = x.len();
        for i in 0..m - 1 {
            if self.swapped[i] {
                x.swap(i, i + 1);
            }
            x[i + 1] -= self.l[i] * x[i];
        }
        for i in (0..m).rev() {
            let mut s = x[i];
            if i + 1 < m {
                s -= self.u1[i] * x[i + 1];
            }
            if i + 2 < m {
                s -= self.u2[i] * x[i + 2];
            }
            let piv = if self.u0[i] == 0.0 {
                f64::MIN_POSITIVE
            } else {
                self.u0[i]
            };
            x[i] = s / piv;
            if !x[i].is_finite() {
                x[i] = x[i].signum() * 1e300;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dense_mul(diag: &[f64], off: &[f64], x: &[f64]) -> Vec<f64> {
        (0..diag.len())
            .map(|i| {
                let mut s = diag[i] * x[i];
                if i > 0 {
                    s += off[i - 1] * x[i - 1];
                }
                if i + 1 < diag.len() {
                    s += off[i] * x[i + 1];
                }
                s
            })
            .collect()
    }

    #[test]
    fn discrete_laplacian_spectrum() {
        // 2 - 2 cos(pi j / (m+1)).
        let m = 40;
        let diag = vec![2.0; m];
        let off = vec![-1.0; m - 1];
        let vals = lowest_eigenvalues(&diag, &off, 5);
        for (j, v) in vals.iter().enumerate() {
            let exact = 2.0 - 2.0 * (std::f64::consts::PI * (j + 1) as f64 / (m + 1) as f64).cos();
            assert!((v - exact).abs() < 1e-12, "{v} vs {exact}");
        }
        let mut prior = Vec::new();
        for &v in &vals {
            let x = eigenvector(&diag, &off, v, &prior);
            let hx = dense_mul(&diag, &off, &x);
            let res: f64 = hx
                .iter()
                .zip(&x)
                .map(|(a, b)| (a - v * b).powi(2))
                .sum::<f64>()
                .sqrt();
            assert!(res < 1e-10, "residual {res}");
            prior.push(x);
        }
    }

    #[test]
    fn close_pair_vectors_are_orthogonal() {
        let diag = vec![1.0, 1.0 + 1e-7, 5.0, 6.0];
        let off = vec![1e-6, 0.3, 0.2];
        let vals = lowest_eigenvalues(&diag, &off, 2);
        let a = eigenvector(&diag, &off, vals[0], &[]);
        let b = eigenvector(&diag, &off, vals[1], std::slice::from_ref(&a));
        let dot: f64 = a.iter().zip(&b).map(|(x, y)| x * y).sum();
        assert!(dot.abs() < 1e-10);
        for (x, v) in [(&a, vals[0]), (&b, vals[1])] {
            let hx = dense_mul(&diag, &off, x);
            let res: f64 = hx
                .iter()
                .zip(x)
                .map(|(p, q)| (p - v * q).powi(2))
                .sum::<f64>()
                .sqrt();
            assert!(res < 1e-9, "residual {res}");
        }
    }
}
