use serde::{Deserialize, Serialize};

use crate::scalar::Real;
use crate::Result;

use super::check_degree;

/// Generalized Laguerre polynomial `L^alpha_k(x)` by the three-term recurrence
/// `(j+1) L_{j+1} = (2j+1+alpha-x) L_j - (j+alpha) L_{j-1}`.
pub fn laguerre<T: Real>(k: usize, alpha: T, x: T) -> Result<T> {
    check_degree(k)?;
    let mut prev = T::one();
    if k == 0 {
        return Ok(prev);
    }
    let mut cur = T::one() + alpha - x;
    for j in 1..k {
        let jj = T::of(j);
        let next = ((jj + jj + T::one() + alpha - x) * cur - (jj + alpha) * prev) / (jj + T::one());
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// Fills `out[0..=kmax]` with `L^alpha_0(x), ..., L^alpha_kmax(x)`.
///
/// Unchecked variant for inner loops; `out` is resized as needed.
pub fn laguerre_sequence<T: Real>(kmax: usize, alpha: T, x: T, out: &mut Vec<T>) {
    out.clear();
    out.push(T::one());
    if kmax == 0 {
        return;
    }
    out.push(T::one() + alpha - x);
    for j in 1..kmax {
        let jj = T::of(j);
        let next =
            ((jj + jj + T::one() + alpha - x) * out[j] - (jj + alpha) * out[j - 1]) / (jj + T::one());
        out.push(next);
    }
}

/// Monomial coefficients `c_i` with `L^alpha_k(x) = sum_i c_i x^i`.
pub fn laguerre_coefficients(k: usize, alpha: f64) -> Result<Vec<f64>> {
    check_degree(k)?;
    // c_i = (-1)^i (alpha+i+1)_{k-i} / (i! (k-i)!), built from c_k downwards.
    let mut c = vec![0.0; k + 1];
    let mut ck = if k % 2 == 0 { 1.0 } else { -1.0 };
    for j in 1..=k {
        ck /= j as f64;
    }
    c[k] = ck;
    for i in (0..k).rev() {
        // c_i / c_{i+1} = -(i+1)(alpha+i+1) / (k-i)
        c[i] = -c[i + 1] * (i as f64 + 1.0) * (alpha + i as f64 + 1.0) / (k - i) as f64;
    }
    Ok(c)
}

/// Upper end `beta` of the interval `]0, beta[` containing every zero of
/// `L^alpha_k` (`k >= 1`).
pub fn laguerre_root_bound<T: Real>(k: usize, alpha: T) -> T {
    let km1 = T::of(k) - T::one();
    let two = T::lit(2.0);
    alpha + two * km1 + two * (T::lit(0.25) + km1 * (km1 + alpha)).sqrt()
}

/// One failed instance of the elementary Laguerre estimates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LaguerreViolation {
    pub k: usize,
    pub alpha: f64,
    pub x: f64,
    pub bound: String,
}

/// Outcome of [`laguerre_estimate_check`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LaguerreEstimateReport {
    pub checked: usize,
    pub violations: Vec<LaguerreViolation>,
}

/// Checks, for `k <= kmax` and randomized `alpha in [0, alpha_max]` and `x`:
///
/// - `|L^a_k(x)| <= (x+a+k)^k/k!`
/// - for `x >= beta`: `(x-beta)^k/k! <= (-1)^k L^a_k(x) <= x^k/k!`
/// - for `x >= beta/2`: `|L^a_k(x)| <= x^k/k!`
///
/// Each `(k, alpha)` pair gets `x_per_pair` points spread over `[0, 3 beta + 10]`.
/// Comparisons allow a relative slack of `1e-12` for roundoff at equality cases.
pub fn laguerre_estimate_check(
    kmax: usize,
    alpha_max: f64,
    alphas_per_k: usize,
    x_per_pair: usize,
    seed: u64,
) -> Result<LaguerreEstimateReport> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut checked = 0;
    let mut violations = Vec::new();
    let slack = |bound: f64| 1e-12 * bound.abs().max(f64::MIN_POSITIVE);
    for k in 0..=kmax {
        let ln_kf = crate::specfun::ln_factorial(k);
        let pow_over_fact = |base: f64| -> f64 {
            if k == 0 {
                1.0
            } else if base <= 0.0 {
                0.0
            } else {
                (k as f64 * base.ln() - ln_kf).exp()
            }
        };
        for ai in 0..alphas_per_k {
            let alpha = match ai {
                0 => 0.0,
                1 => alpha_max,
                _ => rng.random::<f64>() * alpha_max,
            };
            let beta = laguerre_root_bound(k.max(1), alpha);
            let x_top = 3.0 * beta + 10.0;
            for xi in 0..x_per_pair {
                let x = if xi == 0 { 0.0 } else { rng.random::<f64>() * x_top };
                let l = laguerre(k, alpha, x)?;
                let mut fail = |name: &str| {
                    violations.push(LaguerreViolation { k, alpha, x, bound: name.to_string() })
                };
                let upper = pow_over_fact(x + alpha + k as f64);
                if l.abs() > upper + slack(upper) {
                    fail("|L| <= (x+alpha+k)^k/k!");
                }
                let xk = pow_over_fact(x);
                if k >= 1 && x >= beta {
                    let signed = if k % 2 == 0 { l } else { -l };
                    let lower = pow_over_fact(x - beta);
                    if signed < lower - slack(lower) || signed > xk + slack(xk) {
                        fail("(x-beta)^k/k! <= (-1)^k L <= x^k/k!");
                    }
                }
                if k >= 1 && x >= beta / 2.0 && l.abs() > xk + slack(xk) {
                    fail("|L| <= x^k/k! for x >= beta/2");
                }
                checked += 1;
            }
        }
    }
    Ok(LaguerreEstimateReport { checked, violations })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Pochhammer form of the definition sum, evaluated term by term.
    fn definition_sum(k: usize, alpha: f64, x: f64) -> (f64, f64) {
        let mut value = 0.0;
        let mut scale = 0.0;
        for i in 0..=k {
            let mut poch = 1.0;
            for j in 0..(k - i) {
                poch *= alpha + i as f64 + 1.0 + j as f64;
            }
            let mut denom = 1.0;
            for j in 1..=i {
                denom *= j as f64;
            }
            for j in 1..=(k - i) {
                denom *= j as f64;
            }
            let term = poch / denom * x.powi(i as i32);
            value += if i % 2 == 0 { term } else { -term };
            scale += term.abs();
        }
        (value, scale)
    }

    #[test]
    fn elementary_estimates_hold() {
        let rep = laguerre_estimate_check(12, 15.0, 10, 100, 11).unwrap();
        assert_eq!(rep.checked, 13 * 10 * 100);
        assert!(rep.violations.is_empty(), "{:?}", &rep.violations[..rep.violations.len().min(5)]);
    }

    #[test]
    fn worked_values() {
        assert_eq!(laguerre(0, 1.0, 7.3).unwrap(), 1.0);
        assert!(laguerre(1, 1.0_f64, 2.0).unwrap().abs() < 1e-15);
        assert!((laguerre(2, 0.0_f64, 1.0).unwrap() + 0.5).abs() < 1e-15);
    }

    #[test]
    fn value_at_origin_is_binomial() {
        // L^alpha_k(0) = binom(k + alpha, k)
        for k in 0..10 {
            let mut b = 1.0;
            for j in 1..=k {
                b *= (3.5 + j as f64) / j as f64;
            }
            assert!((laguerre(k, 3.5, 0.0).unwrap() - b).abs() < 1e-12 * b);
        }
    }

    #[test]
    fn capacity_error_beyond_max_degree() {
        assert!(matches!(
            laguerre(513, 0.0, 1.0),
            Err(crate::Error::Capacity { degree: 513, .. })
        ));
    }

    #[test]
    fn recurrence_agrees_with_definition_sum() {
        for k in 0..=12 {
            for alpha in [0.0, 0.5, 1.0, 3.0, 7.25, 15.0] {
                for step in 0..100 {
                    let x = 50.0 * step as f64 / 99.0;
                    let (def, scale) = definition_sum(k, alpha, x);
                    let rec = laguerre(k, alpha, x).unwrap();
                    assert!(
                        (def - rec).abs() <= 1e-10 * scale.max(1.0),
                        "k={k} alpha={alpha} x={x}: {def} vs {rec}"
                    );
                }
            }
        }
    }

    #[test]
    fn coefficients_reproduce_values() {
        let c = laguerre_coefficients(5, 2.0).unwrap();
        for x in [0.0_f64, 0.7, 3.0, 11.0] {
            let v: f64 = c.iter().enumerate().map(|(i, ci)| ci * x.powi(i as i32)).sum();
            assert!((v - laguerre(5, 2.0, x).unwrap()).abs() < 1e-9 * (1.0 + v.abs()));
        }
    }

    #[test]
    fn sequence_matches_pointwise() {
        let mut seq = Vec::new();
        laguerre_sequence(9, 4.0_f64, 6.5, &mut seq);
        assert_eq!(seq.len(), 10);
        for (k, v) in seq.iter().enumerate() {
            assert_eq!(*v, laguerre(k, 4.0, 6.5).unwrap());
        }
    }

    #[test]
    fn single_precision_tracks_double() {
        for k in 0..8 {
            let a = laguerre(k, 1.0_f32, 2.5).unwrap() as f64;
            let b = laguerre(k, 1.0_f64, 2.5).unwrap();
            assert!((a - b).abs() < 1e-4 * (1.0 + b.abs()));
        }
    }
}
