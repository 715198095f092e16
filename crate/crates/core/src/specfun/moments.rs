use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{check_degree, hermite_coefficients, ln_factorial, normal_cdf};
use crate::Result;

const SQRT_2PI: f64 = 2.506_628_274_631_000_7;

/// Moments `M_k = int_{-inf}^a t^k e^{-t^2/2} dt` for `k = 0..=K`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaussMomentTable {
    pub endpoint: Complex64,
    pub moments: Vec<Complex64>,
}

/// Builds the moment table by integration by parts,
/// `M_k = -a^{k-1} e^{-a^2/2} + (k-1) M_{k-2}`.
pub fn gauss_halfline_moment(kmax: usize, a: Complex64) -> Result<GaussMomentTable> {
    check_degree(kmax)?;
    let g = (-a * a * 0.5).exp();
    let mut moments = Vec::with_capacity(kmax + 1);
    moments.push(normal_cdf(a) * SQRT_2PI);
    if kmax >= 1 {
        moments.push(-g);
    }
    let mut apow = a; // a^{k-1}
    for k in 2..=kmax {
        let next = -apow * g + moments[k - 2] * (k - 1) as f64;
        moments.push(next);
        apow *= a;
    }
    Ok(GaussMomentTable {
        endpoint: a,
        moments,
    })
}

impl GaussMomentTable {
    /// Largest relative violation of the integration-by-parts recurrence.
    pub fn recurrence_residual(&self) -> f64 {
        let a = self.endpoint;
        let g = (-a * a * 0.5).exp();
        let mut worst: f64 = 0.0;
        for k in 2..self.moments.len() {
            let lhs = self.moments[k];
            let rhs = -a.powu(k as u32 - 1) * g + self.moments[k - 2] * (k - 1) as f64;
            let scale = lhs.norm().max(rhs.norm()).max(f64::MIN_POSITIVE);
            worst = worst.max((lhs - rhs).norm() / scale);
        }
        worst
    }

    /// `(1/r!) int_{-inf}^a H_r(t+alpha) H_r(t+beta) e^{-t^2/2} dt` by
    /// expanding the product into monomials in `t`. Needs `2r` moments.
    ///
    /// Exact in exact arithmetic; loses digits to cancellation as `r` grows,
    /// which is why [`HermitePairIntegrals`] is the production path.
    pub fn pair_integral(&self, r: usize, alpha: Complex64, beta: Complex64) -> Result<Complex64> {
        if 2 * r >= self.moments.len() {
            return Err(crate::Error::Capacity {
                degree: 2 * r,
                max: self.moments.len().saturating_sub(1),
            });
        }
        let p = shifted_coefficients(r, alpha)?;
        let s = shifted_coefficients(r, beta)?;
        let mut acc = Complex64::new(0.0, 0.0);
        for (i, pi) in p.iter().enumerate() {
            for (j, sj) in s.iter().enumerate() {
                acc += pi * sj * self.moments[i + j];
            }
        }
        Ok(acc * (-ln_factorial(r)).exp())
    }
}

/// Monomial coefficients (in `t`) of `H_r(t + shift)`.
fn shifted_coefficients(r: usize, shift: Complex64) -> Result<Vec<Complex64>> {
    let h = hermite_coefficients(r)?;
    let mut out = vec![Complex64::new(0.0, 0.0); r + 1];
    for (i, ci) in h.iter().enumerate() {
        if *ci == 0.0 {
            continue;
        }
        // (t + s)^i = sum_l binom(i,l) s^{i-l} t^l
        let mut binom = 1.0;
        for l in 0..=i {
            out[l] += shift.powu((i - l) as u32) * binom * *ci;
            binom = binom * (i - l) as f64 / (l + 1) as f64;
        }
    }
    Ok(out)
}

/// Half-line integrals of products of normalized Hermite polynomials,
/// `P_{jk} = int_{-inf}^a He_j(t) He_k(t) e^{-t^2/2} dt / sqrt(j! k!)`,
/// for `j, k < dim`, and the shifted level integrals built on them.
#[derive(Debug, Clone)]
pub struct HermitePairIntegrals {
    endpoint: Complex64,
    dim: usize,
    table: Vec<Complex64>,
}

impl HermitePairIntegrals {
    pub fn new(dim: usize, a: Complex64) -> Result<Self> {
        check_degree(2 * dim)?;
        let dim = dim.max(1);
        let kmax = 2 * (dim - 1);
        let g = (-a * a * 0.5).exp();

        // Row 0: int He_k / sqrt(k!) e^{-t^2/2}, using He_k e^{-t^2/2} = -(He_{k-1} e^{-t^2/2})'.
        let mut h = vec![Complex64::new(1.0, 0.0), a];
        for j in 1..kmax {
            let next = (a * h[j] - h[j - 1] * (j as f64).sqrt()) / ((j + 1) as f64).sqrt();
            h.push(next);
        }
        let mut row0 = Vec::with_capacity(kmax + 1);
        row0.push(normal_cdf(a) * SQRT_2PI);
        for k in 1..=kmax {
            row0.push(-h[k - 1] * g / (k as f64).sqrt());
        }

        // P_{j+1,k} = (sqrt(k+1) P_{j,k+1} + sqrt(k) P_{j,k-1} - sqrt(j) P_{j-1,k}) / sqrt(j+1)
        let mut rows: Vec<Vec<Complex64>> = vec![row0];
        for j in 0..dim - 1 {
            let len = rows[j].len() - 1;
            let mut next = Vec::with_capacity(len);
            for k in 0..len {
                let mut v = rows[j][k + 1] * ((k + 1) as f64).sqrt();
                if k > 0 {
                    v += rows[j][k - 1] * (k as f64).sqrt();
                }
                if j > 0 {
                    v -= rows[j - 1][k] * (j as f64).sqrt();
                }
                next.push(v / ((j + 1) as f64).sqrt());
            }
            rows.push(next);
        }
        let mut table = Vec::with_capacity(dim * dim);
        for row in rows.iter().take(dim) {
            table.extend_from_slice(&row[..dim]);
        }
        Ok(Self {
            endpoint: a,
            dim,
            table,
        })
    }

    pub fn endpoint(&self) -> Complex64 {
        self.endpoint
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, j: usize, k: usize) -> Complex64 {
        self.table[j * self.dim + k]
    }

    /// `(1/r!) int_{-inf}^a H_r(t+alpha) H_r(t+beta) e^{-t^2/2} dt` for
    /// every `r < q` (`q <= dim`).
    pub fn levels(&self, q: usize, alpha: Complex64, beta: Complex64) -> Vec<Complex64> {
        assert!(q <= self.dim, "level count exceeds table dimension");
        let zero = Complex64::new(0.0, 0.0);
        let mut out = Vec::with_capacity(q);
        // Coefficients of He_r(t+shift)/sqrt(r!) in the normalized basis.
        let mut a_prev = vec![zero; self.dim];
        let mut a_cur = vec![zero; self.dim];
        let mut b_prev = vec![zero; self.dim];
        let mut b_cur = vec![zero; self.dim];
        a_cur[0] = Complex64::new(1.0, 0.0);
        b_cur[0] = Complex64::new(1.0, 0.0);
        for r in 0..q {
            out.push(self.contract(&a_cur[..=r], &b_cur[..=r]));
            if r + 1 < q {
                step(&mut a_prev, &mut a_cur, r, alpha);
                step(&mut b_prev, &mut b_cur, r, beta);
            }
        }
        out
    }

    fn contract(&self, a: &[Complex64], b: &[Complex64]) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, aj) in a.iter().enumerate() {
            let row = &self.table[j * self.dim..j * self.dim + b.len()];
            let inner: Complex64 = row.iter().zip(b).map(|(p, bk)| p * bk).sum();
            acc += aj * inner;
        }
        acc
    }
}

/// Advances `cur = A_r` to `A_{r+1} = ((t + shift) A_r - sqrt(r) A_{r-1}) / sqrt(r+1)`
/// with `t He_j = sqrt(j+1) He_{j+1} + sqrt(j) He_{j-1}` in normalized form.
fn step(prev: &mut [Complex64], cur: &mut [Complex64], r: usize, shift: Complex64) {
    let zero = Complex64::new(0.0, 0.0);
    let mut next = vec![zero; cur.len()];
    for j in 0..=r + 1 {
        let mut v = if j <= r { cur[j] * shift } else { zero };
        if j >= 1 {
            v += cur[j - 1] * (j as f64).sqrt();
        }
        if j < r {
            v += cur[j + 1] * ((j + 1) as f64).sqrt();
        }
        if r >= 1 && j < r {
            v -= prev[j] * (r as f64).sqrt();
        }
        next[j] = v / ((r + 1) as f64).sqrt();
    }
    prev.copy_from_slice(cur);
    cur.copy_from_slice(&next);
}
