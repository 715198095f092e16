//! Orthonormal basis of the weighted polyanalytic polynomial space and the
//! correlation kernels built from it.
//!
//! Every kernel here is returned in correlation scaling
//! `Ж(z,w) = K(z,w) exp(-m(|z|^2+|w|^2)/2)`; the raw reproducing kernel
//! overflows long before the parameter ranges of interest.

mod gram;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::scalar::Real;
use crate::specfun::{laguerre, laguerre_sequence};
use crate::sum::{ComplexKahanSum, KahanSum};
use crate::{Error, Result};

pub use gram::{gram_matrix, GramMatrix};

/// Parameters `(m, n, q)` of the space of polyanalytic polynomials
/// `sum_{r<q} zbar^r p_r(z)` with `deg p_r <= n-1`, weighted by `exp(-m|z|^2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnsembleParams {
    pub m: f64,
    pub n: usize,
    pub q: usize,
}

impl EnsembleParams {
    pub fn new(m: f64, n: usize, q: usize) -> Result<Self> {
        let p = Self { m, n, q };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.m.is_finite() && self.m > 0.0) {
            return Err(Error::InvalidParams(format!("m must be positive, got {}", self.m)));
        }
        if self.m > 1e6 {
            return Err(Error::InvalidParams(format!("m = {} exceeds 1e6", self.m)));
        }
        if self.n == 0 || self.q == 0 {
            return Err(Error::InvalidParams("n and q must be positive".into()));
        }
        if self.q > self.n {
            return Err(Error::InvalidParams(format!(
                "q = {} must not exceed n = {}",
                self.q, self.n
            )));
        }
        if self.n.saturating_mul(self.q) > 100_000 {
            return Err(Error::InvalidParams(format!(
                "n*q = {} exceeds 1e5",
                self.n * self.q
            )));
        }
        Ok(())
    }

    /// Dimension `nq` of the space.
    pub fn dim(&self) -> usize {
        self.n * self.q
    }
}

/// Label of an orthonormal basis function.
///
/// `Analytic { i, r }` is `sqrt(r!/(r+i)!) m^{(i+1)/2} z^i L^i_r(m|z|^2)` and
/// `Antianalytic { j, k }` is `sqrt(j!/(j+k)!) m^{(k+1)/2} zbar^k L^k_j(m|z|^2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BasisIndex {
    Analytic { i: usize, r: usize },
    Antianalytic { j: usize, k: usize },
}

impl BasisIndex {
    pub fn is_valid(&self, params: &EnsembleParams) -> bool {
        match *self {
            BasisIndex::Analytic { i, r } => r < params.q && i + r < params.n,
            BasisIndex::Antianalytic { j, k } => k >= 1 && k < params.q && j + k < params.q,
        }
    }

    /// Pure polyanalytic level the function belongs to.
    pub fn level(&self) -> usize {
        match *self {
            BasisIndex::Analytic { r, .. } => r,
            BasisIndex::Antianalytic { j, k } => j + k,
        }
    }

    /// Angular frequency: the function is `e^{i f theta}` times a radial profile.
    pub fn frequency(&self) -> i64 {
        match *self {
            BasisIndex::Analytic { i, .. } => i as i64,
            BasisIndex::Antianalytic { k, .. } => -(k as i64),
        }
    }

    /// Total polynomial degree in `(z, zbar)`.
    pub fn degree(&self) -> usize {
        match *self {
            BasisIndex::Analytic { i, r } => i + 2 * r,
            BasisIndex::Antianalytic { j, k } => k + 2 * j,
        }
    }

    pub fn is_analytic(&self) -> bool {
        matches!(self, BasisIndex::Analytic { .. })
    }

    /// All `nq` labels in natural order.
    pub fn all(params: &EnsembleParams) -> Vec<BasisIndex> {
        let mut out = Vec::with_capacity(params.dim());
        for r in 0..params.q {
            for i in 0..params.n - r {
                out.push(BasisIndex::Analytic { i, r });
            }
        }
        for k in 1..params.q {
            for j in 0..params.q - k {
                out.push(BasisIndex::Antianalytic { j, k });
            }
        }
        out
    }
}

/// `sign(l) * exp(log_weight + ln|l|)`, zero when `l == 0`.
#[inline]
fn signed_exp<T: Real>(log_weight: T, l: T) -> T {
    if l == T::zero() {
        return T::zero();
    }
    let v = (log_weight + l.abs().ln()).exp();
    if l < T::zero() {
        -v
    } else {
        v
    }
}

/// Weighted basis function `phi(z) = e(z) exp(-m|z|^2/2)` for one label.
pub fn basis_weighted<T: Real>(
    params: &EnsembleParams,
    index: BasisIndex,
    z: Complex<T>,
) -> Result<Complex<T>> {
    if !index.is_valid(params) {
        return Err(Error::Domain(format!("{index:?} is not a basis label for {params:?}")));
    }
    let m = T::lit(params.m);
    let u = m * z.norm_sqr();
    let theta = z.arg();
    let (alpha, degree, f) = match index {
        BasisIndex::Analytic { i, r } => (i, r, i as i64),
        BasisIndex::Antianalytic { j, k } => (k, j, -(k as i64)),
    };
    let l = laguerre(degree, T::of(alpha), u)?;
    // sqrt(d!/(d+alpha)!) sqrt(m) u^{alpha/2} e^{-u/2}
    let mut lw = T::lit(0.5) * m.ln() - u / T::lit(2.0);
    if alpha > 0 {
        lw += T::of(alpha) * T::lit(0.5) * u.ln();
    }
    for s in 1..=alpha {
        lw -= T::lit(0.5) * T::of(degree + s).ln();
    }
    let mag = signed_exp(lw, l);
    let phase = T::lit(f as f64) * theta;
    Ok(Complex::new(mag * phase.cos(), mag * phase.sin()))
}

/// Closed-form full-space kernel
/// `m L^1_{q-1}(m|z-w|^2) exp(-m|z-w|^2/2) exp(i m Im(z wbar))`.
pub fn corr_kernel_fock<T: Real>(m: T, q: usize, z: Complex<T>, w: Complex<T>) -> Complex<T> {
    let d = m * (z - w).norm_sqr();
    let mut seq = Vec::new();
    laguerre_sequence(q.saturating_sub(1), T::one(), d, &mut seq);
    let mag = m * seq[q.saturating_sub(1)] * (-d / T::lit(2.0)).exp();
    let phase = m * (z * w.conj()).im;
    Complex::new(mag * phase.cos(), mag * phase.sin())
}

/// Evaluates the whole weighted basis at once.
///
/// Functions are stored in slots ordered by total degree, which is also the
/// order every kernel sum is accumulated in.
#[derive(Debug, Clone)]
pub struct FeatureMap<T> {
    params: EnsembleParams,
    indices: Vec<BasisIndex>,
    analytic_offset: Vec<usize>,
    anti_offset: Vec<usize>,
    natural_to_slot: Vec<usize>,
    ln_int: Vec<T>,
    half_ln_m: T,
    m: T,
}

impl<T: Real> FeatureMap<T> {
    pub fn new(params: &EnsembleParams) -> Result<Self> {
        params.validate()?;
        let natural = BasisIndex::all(params);
        let mut order: Vec<usize> = (0..natural.len()).collect();
        order.sort_by_key(|&a| (natural[a].degree(), natural[a]));
        let mut natural_to_slot = vec![0; natural.len()];
        for (slot, &a) in order.iter().enumerate() {
            natural_to_slot[a] = slot;
        }
        let indices = order.iter().map(|&a| natural[a]).collect();
        let mut analytic_offset = Vec::with_capacity(params.q);
        let mut off = 0;
        for r in 0..params.q {
            analytic_offset.push(off);
            off += params.n - r;
        }
        let mut anti_offset = Vec::with_capacity(params.q);
        for k in 1..params.q {
            anti_offset.push(off);
            off += params.q - k;
        }
        let ln_int = (0..=params.n + params.q)
            .map(|k| T::of(k.max(1)).ln())
            .collect();
        let m = T::lit(params.m);
        Ok(Self {
            params: *params,
            indices,
            analytic_offset,
            anti_offset,
            natural_to_slot,
            ln_int,
            half_ln_m: T::lit(0.5) * m.ln(),
            m,
        })
    }

    pub fn params(&self) -> &EnsembleParams {
        &self.params
    }

    pub fn dim(&self) -> usize {
        self.indices.len()
    }

    /// Labels in slot order.
    pub fn indices(&self) -> &[BasisIndex] {
        &self.indices
    }

    /// Slot holding the given label.
    pub fn slot_of(&self, index: BasisIndex) -> Option<usize> {
        if !index.is_valid(&self.params) {
            return None;
        }
        let natural = match index {
            BasisIndex::Analytic { i, r } => self.analytic_offset[r] + i,
            BasisIndex::Antianalytic { j, k } => self.anti_offset[k - 1] + j,
        };
        Some(self.natural_to_slot[natural])
    }

    /// Signed radial profiles `phi_a(r)` (value at `z = r >= 0`), so that
    /// `phi_a(r e^{i theta}) = phi_a(r) e^{i f_a theta}`.
    pub fn eval_radial(&self, r: T, out: &mut [T]) {
        self.fill(r * r, |slot, _, mag| out[slot] = mag);
    }

    /// All `nq` weighted basis values at `z`, in slot order.
    pub fn eval(&self, z: Complex<T>, out: &mut [Complex<T>]) {
        let theta = z.arg();
        self.fill(z.norm_sqr(), |slot, f, mag| {
            let ph = T::lit(f as f64) * theta;
            out[slot] = Complex::new(mag * ph.cos(), mag * ph.sin());
        });
    }

    pub fn eval_vec(&self, z: Complex<T>) -> Vec<Complex<T>> {
        let mut out = vec![Complex::new(T::zero(), T::zero()); self.dim()];
        self.eval(z, &mut out);
        out
    }

    /// Shared radial loop: calls `sink(slot, frequency, signed_modulus)`.
    fn fill<F: FnMut(usize, i64, T)>(&self, r2: T, mut sink: F) {
        let (n, q) = (self.params.n, self.params.q);
        let u = self.m * r2;
        let ln_u = u.ln();
        let half = T::lit(0.5);
        let base = self.half_ln_m - u * half;
        let mut lag = Vec::with_capacity(q);

        // Analytic side, i outer so each Laguerre sequence shares alpha = i.
        let mut lw = vec![base; q];
        for i in 0..n {
            let rmax = (q - 1).min(n - 1 - i);
            laguerre_sequence(rmax, T::of(i), u, &mut lag);
            for r in 0..=rmax {
                if i > 0 {
                    lw[r] += half * (ln_u - self.ln_int[r + i]);
                }
                let slot = self.natural_to_slot[self.analytic_offset[r] + i];
                sink(slot, i as i64, signed_exp(lw[r], lag[r]));
            }
        }

        // Antianalytic side.
        for k in 1..q {
            let jmax = q - k - 1;
            laguerre_sequence(jmax, T::of(k), u, &mut lag);
            let mut w = base + T::of(k) * half * ln_u;
            for s in 1..=k {
                w -= half * self.ln_int[s];
            }
            for j in 0..=jmax {
                if j > 0 {
                    w += half * (self.ln_int[j] - self.ln_int[j + k]);
                }
                let slot = self.natural_to_slot[self.anti_offset[k - 1] + j];
                sink(slot, -(k as i64), signed_exp(w, lag[j]));
            }
        }
    }

    /// Diagonal `Ж(z,z) = sum_a |phi_a(z)|^2`, real arithmetic only.
    pub fn diag(&self, z: Complex<T>) -> T {
        let mut sq = vec![T::zero(); self.dim()];
        self.fill(z.norm_sqr(), |slot, _, mag| sq[slot] = mag * mag);
        sq.into_iter().collect::<KahanSum<T>>().value()
    }

    /// `sum_a phi_a(z) conj(phi_a(w))` over slots selected by `keep`.
    pub fn contract<F: Fn(&BasisIndex) -> bool>(
        &self,
        phi_z: &[Complex<T>],
        phi_w: &[Complex<T>],
        keep: F,
    ) -> Complex<T> {
        let mut acc = ComplexKahanSum::new();
        for (a, idx) in self.indices.iter().enumerate() {
            if keep(idx) {
                acc.add(phi_z[a] * phi_w[a].conj());
            }
        }
        acc.value()
    }

    pub fn kernel(&self, z: Complex<T>, w: Complex<T>) -> Complex<T> {
        let pz = self.eval_vec(z);
        let pw = self.eval_vec(w);
        self.contract(&pz, &pw, |_| true)
    }

    pub fn kernel_split(&self, z: Complex<T>, w: Complex<T>) -> (Complex<T>, Complex<T>) {
        let pz = self.eval_vec(z);
        let pw = self.eval_vec(w);
        (
            self.contract(&pz, &pw, |a| a.is_analytic()),
            self.contract(&pz, &pw, |a| !a.is_analytic()),
        )
    }

    pub fn kernel_level(&self, r: usize, z: Complex<T>, w: Complex<T>) -> Result<Complex<T>> {
        if r >= self.params.q {
            return Err(Error::Domain(format!(
                "level {r} outside 0..{}",
                self.params.q
            )));
        }
        let pz = self.eval_vec(z);
        let pw = self.eval_vec(w);
        Ok(self.contract(&pz, &pw, |a| a.level() == r))
    }
}

/// Correlation kernel of the polynomial space, `sum_a phi_a(z) conj(phi_a(w))`.
pub fn corr_kernel_poly<T: Real>(
    params: &EnsembleParams,
    z: Complex<T>,
    w: Complex<T>,
) -> Result<Complex<T>> {
    Ok(FeatureMap::new(params)?.kernel(z, w))
}

/// Analytic-side and antianalytic-side parts of [`corr_kernel_poly`].
pub fn corr_kernel_split<T: Real>(
    params: &EnsembleParams,
    z: Complex<T>,
    w: Complex<T>,
) -> Result<(Complex<T>, Complex<T>)> {
    Ok(FeatureMap::new(params)?.kernel_split(z, w))
}

/// Kernel of the pure level `r` component (true polyanalytic of exact order `r+1`).
pub fn corr_subkernel_pure<T: Real>(
    params: &EnsembleParams,
    r: usize,
    z: Complex<T>,
    w: Complex<T>,
) -> Result<Complex<T>> {
    FeatureMap::new(params)?.kernel_level(r, z, w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn params(m: f64, n: usize, q: usize) -> EnsembleParams {
        EnsembleParams::new(m, n, q).unwrap()
    }

    #[test]
    fn validation() {
        assert!(EnsembleParams::new(1.0, 2, 3).is_err());
        assert!(EnsembleParams::new(0.0, 2, 1).is_err());
        assert!(EnsembleParams::new(2e6, 2, 1).is_err());
        assert!(EnsembleParams::new(1.0, 100_001, 1).is_err());
        assert!(EnsembleParams::new(1.0, 1000, 100).is_ok());
        assert_eq!(BasisIndex::all(&params(1.0, 7, 3)).len(), 21);
    }

    #[test]
    fn basis_worked_values() {
        let z = c(0.3, -1.1);
        let v = basis_weighted(&params(1.0, 2, 1), BasisIndex::Analytic { i: 0, r: 0 }, z).unwrap();
        assert!((v - c((-z.norm_sqr() / 2.0).exp(), 0.0)).norm() < 1e-15);
        let v = basis_weighted(&params(4.0, 2, 1), BasisIndex::Analytic { i: 1, r: 0 }, c(0.5, 0.0))
            .unwrap();
        // 4^{(1+1)/2} * 0.5 * e^{-1/2}
        assert!((v.re - 2.0 * (-0.5f64).exp()).abs() < 1e-14);
        let v = basis_weighted(&params(1.0, 2, 2), BasisIndex::Antianalytic { j: 0, k: 1 }, c(1.0, 0.0))
            .unwrap();
        assert!((v.re - (-0.5f64).exp()).abs() < 1e-14);
        assert!(basis_weighted(&params(1.0, 2, 2), BasisIndex::Antianalytic { j: 1, k: 1 }, z).is_err());
    }

    #[test]
    fn feature_map_matches_pointwise_basis() {
        let p = params(3.0, 9, 4);
        let fm = FeatureMap::<f64>::new(&p).unwrap();
        for z in [c(0.0, 0.0), c(0.2, 0.7), c(-1.3, 0.4), c(2.5, -2.0)] {
            let phi = fm.eval_vec(z);
            for idx in BasisIndex::all(&p) {
                let want = basis_weighted(&p, idx, z).unwrap();
                let got = phi[fm.slot_of(idx).unwrap()];
                assert!((got - want).norm() <= 1e-13 * want.norm().max(1e-300) + 1e-300, "{idx:?} at {z}");
            }
        }
    }

    #[test]
    fn kernel_worked_values() {
        let (z, w) = (c(0.4, 0.1), c(-0.3, 0.9));
        let k = corr_kernel_poly(&params(1.0, 1, 1), z, w).unwrap();
        assert!((k.re - (-(z.norm_sqr() + w.norm_sqr()) / 2.0).exp()).abs() < 1e-15);
        assert!(k.im.abs() < 1e-15);
        for (m, n, q) in [(1.0, 3, 2), (7.5, 10, 4), (100.0, 100, 3)] {
            let d = corr_kernel_poly(&params(m, n, q), c(0.0, 0.0), c(0.0, 0.0)).unwrap();
            assert!((d.re - m * q as f64).abs() < 1e-12 * m * q as f64);
        }
    }

    #[test]
    fn fock_worked_values() {
        let z = c(0.8, -0.3);
        assert!((corr_kernel_fock(1.0, 1, z, z) - c(1.0, 0.0)).norm() < 1e-15);
        assert!((corr_kernel_fock(1.0, 2, c(0.0, 0.0), c(0.0, 0.0)).re - 2.0).abs() < 1e-15);
        let v = corr_kernel_fock(2.0, 1, c(0.0, 0.0), c(1.0, 0.0));
        assert!((v.re - 2.0 * (-1.0f64).exp()).abs() < 1e-15);
        // direct substitution with exponentiation at small scale
        let w = c(0.2, 0.5);
        let direct = (z * w.conj() - (z.norm_sqr() + w.norm_sqr()) / 2.0).exp();
        assert!((corr_kernel_fock(1.0, 1, z, w) - direct).norm() < 1e-15);
    }

    #[test]
    fn poly_kernel_close_to_fock_in_bulk() {
        let p = params(100.0, 100, 3);
        let a = corr_kernel_poly(&p, c(0.3, 0.0), c(0.5, 0.0)).unwrap();
        let b = corr_kernel_fock(100.0, 3, c(0.3, 0.0), c(0.5, 0.0));
        assert!((a - b).norm() <= 1e-4);
    }

    #[test]
    fn split_and_levels_resum() {
        let p = params(10.0, 10, 3);
        let (z, w) = (c(0.31, -0.2), c(0.05, 0.44));
        let full = corr_kernel_poly(&p, z, w).unwrap();
        let (k1, k2) = corr_kernel_split(&p, z, w).unwrap();
        assert!((k1 + k2 - full).norm() <= 1e-12 * full.norm());
        let (d1, d2) = corr_kernel_split(&p, z, z).unwrap();
        assert!(d1.re >= 0.0 && d2.re >= 0.0 && d1.im.abs() < 1e-15 && d2.im.abs() < 1e-15);
        let (_, zero) = corr_kernel_split(&params(3.0, 4, 1), z, w).unwrap();
        assert_eq!(zero, c(0.0, 0.0));

        let p8 = params(8.0, 8, 3);
        let levels: Complex64 = (0..3)
            .map(|r| corr_subkernel_pure(&p8, r, z, w).unwrap())
            .sum();
        let full8 = corr_kernel_poly(&p8, z, w).unwrap();
        assert!((levels - full8).norm() < 1e-10);
        let analytic = corr_kernel_poly(&params(8.0, 8, 1), z, w).unwrap();
        assert!((corr_subkernel_pure(&p8, 0, z, w).unwrap() - analytic).norm() < 1e-14);
        assert!(corr_subkernel_pure(&p8, 3, z, w).is_err());
    }

    #[test]
    fn hermitian_symmetry_is_exact() {
        let fm = FeatureMap::<f64>::new(&params(20.0, 15, 4)).unwrap();
        let (z, w) = (c(0.3, 0.8), c(-0.6, 0.1));
        assert_eq!(fm.kernel(z, w), fm.kernel(w, z).conj());
    }

    #[test]
    fn diagonal_path_matches_complex_path() {
        let fm = FeatureMap::<f64>::new(&params(50.0, 40, 5)).unwrap();
        for z in [c(0.1, 0.2), c(0.9, 0.0), c(0.0, -1.05)] {
            let d = fm.diag(z);
            let k = fm.kernel(z, z);
            assert!((d - k.re).abs() < 1e-12 * d);
            assert!(d <= 50.0 * 5.0 * (1.0 + 1e-12));
        }
    }

    #[test]
    fn single_precision_feature_map() {
        let p = params(5.0, 6, 2);
        let f32map = FeatureMap::<f32>::new(&p).unwrap();
        let f64map = FeatureMap::<f64>::new(&p).unwrap();
        let a = f32map.diag(Complex::new(0.3f32, 0.2));
        let b = f64map.diag(c(0.3, 0.2));
        assert!((a as f64 - b).abs() < 1e-4 * b);
    }
}
