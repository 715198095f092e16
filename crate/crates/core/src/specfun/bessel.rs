use crate::scalar::Real;

/// `J_1(2s)/s`, equal to `sum_i (-1)^i s^{2i} / (i! (i+1)!)`.
///
/// Power series for `s <= 8`, Hankel expansion of `J_1` beyond.
pub fn bessel_j1_ratio<T: Real>(s: T) -> T {
    let s = s.abs();
    if s <= T::lit(8.0) {
        let s2 = s * s;
        let mut term = T::one();
        let mut sum = T::one();
        let mut i = 1;
        loop {
            term = -term * s2 / (T::of(i) * T::of(i + 1));
            sum += term;
            if term.abs() < T::epsilon() * T::lit(1e-3) {
                break;
            }
            i += 1;
        }
        return sum;
    }
    let x = s + s;
    // P ~ sum (-1)^k a_{2k} / x^{2k}, Q ~ sum (-1)^k a_{2k+1} / x^{2k+1},
    // a_k = prod_{j=1..k} (4 - (2j-1)^2) / (k! 8^k)
    let mu = T::lit(4.0);
    let mut a = T::one();
    let mut p = T::one();
    let mut q = T::zero();
    let mut xpow = T::one();
    for k in 1..20 {
        let odd = T::of(2 * k - 1);
        a = a * (mu - odd * odd) / (T::of(k) * T::lit(8.0));
        xpow *= x;
        let term = a / xpow;
        match k % 4 {
            1 => q += term,
            2 => p -= term,
            3 => q -= term,
            _ => p += term,
        }
        if term.abs() < T::epsilon() {
            break;
        }
    }
    let chi = x - T::lit(0.75) * T::PI();
    let j1 = (T::lit(2.0) / (T::PI() * x)).sqrt() * (p * chi.cos() - q * chi.sin());
    j1 / s
}
