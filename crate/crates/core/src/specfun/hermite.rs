use num_complex::Complex;

use crate::scalar::Real;
use crate::Result;

use super::check_degree;

/// Probabilists' Hermite polynomial `H_r(t)` at a complex argument.
pub fn hermite_prob<T: Real>(r: usize, t: Complex<T>) -> Result<Complex<T>> {
    check_degree(r)?;
    let mut prev = Complex::new(T::one(), T::zero());
    if r == 0 {
        return Ok(prev);
    }
    let mut cur = t;
    for j in 1..r {
        let next = t * cur - prev * T::of(j);
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// Real-argument form of [`hermite_prob`].
pub fn hermite_prob_real<T: Real>(r: usize, x: T) -> Result<T> {
    Ok(hermite_prob(r, Complex::new(x, T::zero()))?.re)
}

/// Monomial coefficients of `H_r`, lowest degree first.
pub fn hermite_coefficients(r: usize) -> Result<Vec<f64>> {
    check_degree(r)?;
    let mut prev = vec![1.0];
    if r == 0 {
        return Ok(prev);
    }
    let mut cur = vec![0.0, 1.0];
    for j in 1..r {
        let mut next = vec![0.0; j + 2];
        for (i, c) in cur.iter().enumerate() {
            next[i + 1] += c;
        }
        for (i, c) in prev.iter().enumerate() {
            next[i] -= j as f64 * c;
        }
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// Normalized values `H_j(x)/sqrt(j!)` for `j = 0..=jmax`.
fn normalized_sequence<T: Real>(jmax: usize, x: T) -> Vec<T> {
    let mut h = Vec::with_capacity(jmax + 1);
    h.push(T::one());
    if jmax >= 1 {
        h.push(x);
    }
    for j in 1..jmax {
        let next = (x * h[j] - T::of(j).sqrt() * h[j - 1]) / T::of(j + 1).sqrt();
        h.push(next);
    }
    h
}

/// `sum_{r<q} H_r(x) H_r(y) / r!`, summed term by term.
pub fn christoffel_darboux_sum<T: Real>(q: usize, x: T, y: T) -> T {
    if q == 0 {
        return T::zero();
    }
    let hx = normalized_sequence(q - 1, x);
    let hy = normalized_sequence(q - 1, y);
    hx.iter()
        .zip(&hy)
        .map(|(a, b)| *a * *b)
        .collect::<crate::sum::KahanSum<T>>()
        .value()
}

/// Closed (ratio) form of the Christoffel–Darboux sum,
/// `(H_q(x)H_{q-1}(y) - H_{q-1}(x)H_q(y)) / ((q-1)! (x-y))`.
///
/// Points with `|x - y| < 1e-6` are routed to [`christoffel_darboux_sum`].
pub fn christoffel_darboux_ratio<T: Real>(q: usize, x: T, y: T) -> T {
    if q == 0 {
        return T::zero();
    }
    if (x - y).abs() < T::lit(1e-6) {
        return christoffel_darboux_sum(q, x, y);
    }
    let hx = normalized_sequence(q, x);
    let hy = normalized_sequence(q, y);
    T::of(q).sqrt() * (hx[q] * hy[q - 1] - hx[q - 1] * hy[q]) / (x - y)
}
