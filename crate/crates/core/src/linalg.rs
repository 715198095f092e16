//! Dense complex LU with partial pivoting, reporting determinants in log form.

use num_complex::Complex64;

use crate::scaled::ScaledComplex;

/// Determinant of the row-major `n x n` matrix `a` (consumed).
///
/// Rows are equilibrated by their largest modulus before elimination so
/// matrices with wildly different row scales (Vandermonde-type) keep their
/// relative accuracy; the scales are folded back into the log-magnitude.
pub fn log_det(mut a: Vec<Complex64>, n: usize) -> ScaledComplex<f64> {
    assert_eq!(a.len(), n * n, "matrix size mismatch");
    let mut log_scale = 0.0;
    for i in 0..n {
        let row = &mut a[i * n..(i + 1) * n];
        let mx = row.iter().map(|v| v.norm()).fold(0.0, f64::max);
        if mx == 0.0 {
            return ScaledComplex::zero();
        }
        for v in row.iter_mut() {
            *v /= mx;
        }
        log_scale += mx.ln();
    }
    let mut det = ScaledComplex::one();
    for col in 0..n {
        let mut piv = col;
        let mut best = a[col * n + col].norm();
        for r in col + 1..n {
            let v = a[r * n + col].norm();
            if v > best {
                best = v;
                piv = r;
            }
        }
        if best == 0.0 {
            return ScaledComplex::zero();
        }
        if piv != col {
            for k in 0..n {
                a.swap(col * n + k, piv * n + k);
            }
            det = det * ScaledComplex::from_complex(Complex64::new(-1.0, 0.0));
        }
        let p = a[col * n + col];
        det = det * ScaledComplex::from_complex(p);
        for r in col + 1..n {
            let f = a[r * n + col] / p;
            if f == Complex64::new(0.0, 0.0) {
                continue;
            }
            for k in col + 1..n {
                let upd = a[col * n + k] * f;
                a[r * n + k] -= upd;
            }
        }
    }
    ScaledComplex::new(det.log_magnitude + log_scale, det.phase)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn two_by_two() {
        let m = vec![c(1.0, 1.0), c(2.0, 0.0), c(0.0, -1.0), c(3.0, 0.5)];
        let want = m[0] * m[3] - m[1] * m[2];
        let got = log_det(m, 2).to_complex();
        assert!((got - want).norm() < 1e-14);
    }

    #[test]
    fn singular_matrix_is_zero() {
        let m = vec![c(1.0, 0.0), c(2.0, 0.0), c(2.0, 0.0), c(4.0, 0.0)];
        let d = log_det(m, 2);
        assert!(d.is_zero() || d.log_magnitude < -30.0);
    }

    #[test]
    fn matches_nalgebra_on_random_matrix() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let n = 9;
        let data: Vec<Complex64> = (0..n * n)
            .map(|_| c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
            .collect();
        let na = nalgebra::DMatrix::from_row_slice(n, n, &data);
        let want = na.determinant();
        let got = log_det(data, n).to_complex();
        assert!((got - want).norm() < 1e-12 * want.norm());
    }
}
