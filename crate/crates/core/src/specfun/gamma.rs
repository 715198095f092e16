use libm::lgamma as ln_gamma;

/// Poisson mass `x^a e^{-x} / Gamma(a+1)` at real order `a > 0`.
///
/// Large orders use `a (t - ln(1+t))` with `t = (x-a)/a` plus the Stirling
/// correction, which keeps the exponent accurate when `x` and `a` are close.
pub fn poisson_pmf_at(a: f64, x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    if a < 30.0 {
        return (a * x.ln() - x - ln_gamma(a + 1.0)).exp();
    }
    let t = (x - a) / a;
    let inv = 1.0 / a;
    let inv2 = inv * inv;
    let stirling = inv
        * (1.0 / 12.0
            - inv2 * (1.0 / 360.0 - inv2 * (1.0 / 1260.0 - inv2 * (1.0 / 1680.0 - inv2 / 1188.0))));
    (-a * (t - t.ln_1p()) - stirling).exp() / (2.0 * std::f64::consts::PI * a).sqrt()
}

/// `E_k(x) e^{-x}` where `E_k` is the degree-`k` Taylor polynomial of `exp`;
/// equals the regularized upper incomplete gamma `Q(k+1, x)`.
pub fn exp_partial_scaled(k: usize, x: f64) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    let a = k as f64 + 1.0;
    let q = if x < a {
        // P(a,x) = pmf(a,x) * sum_{n>=0} x^n / ((a+1)...(a+n))
        let mut term = 1.0;
        let mut sum = 1.0;
        let mut n = 1.0;
        loop {
            term *= x / (a + n);
            sum += term;
            if term < sum * 1e-17 {
                break;
            }
            n += 1.0;
        }
        1.0 - poisson_pmf_at(a, x) * sum
    } else {
        // Modified Lentz on the Legendre continued fraction for Q.
        const TINY: f64 = 1e-300;
        let mut b = x + 1.0 - a;
        let mut c = 1.0 / TINY;
        let mut d = 1.0 / b;
        let mut h = d;
        let mut i = 1.0;
        loop {
            let an = -i * (i - a);
            b += 2.0;
            d = an * d + b;
            if d.abs() < TINY {
                d = TINY;
            }
            c = b + an / c;
            if c.abs() < TINY {
                c = TINY;
            }
            d = 1.0 / d;
            let delta = d * c;
            h *= delta;
            if (delta - 1.0).abs() < 1e-16 || i > 10_000.0 {
                break;
            }
            i += 1.0;
        }
        // x^a e^{-x} / Gamma(a) = a * pmf(a, x)
        a * poisson_pmf_at(a, x) * h
    };
    q.clamp(0.0, 1.0)
}
