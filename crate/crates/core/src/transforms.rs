//! Finite-dimensional realization of the level operators
//! `T_{m,r} f = m^{-r/2} (r!)^{-1/2} e^{m|z|^2} d_z^r (f e^{-m|z|^2})`,
//! the Bargmann transform on Hermite coefficients and the poly-Bargmann kernels.
//!
//! `T_{m,r}` sends the analytic basis `e_{j,m} = sqrt(m^{j+1}/j!) z^j` to the
//! level-`r` basis functions of the polyanalytic space:
//! `Analytic { i: j-r, r }` for `j >= r` and `(-1)^{r-j} Antianalytic { j, k: r-j }`
//! for `j < r`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::berezin::boundary_kernel_levels;
use crate::kernel::{basis_weighted, corr_subkernel_pure, BasisIndex, EnsembleParams};
use crate::specfun::laguerre_coefficients;
use crate::{Error, Result};

/// Largest level accepted by the operators here.
pub const MAX_LEVEL: usize = 64;

/// Which basis a coefficient sequence refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BasisTag {
    /// `e_{j,m} = sqrt(m^{j+1}/j!) z^j`, `j = 0, 1, ...`.
    MonomialAnalytic,
    /// `(2 pi)^{-1/4} (j!)^{-1/2} He_j(t) e^{-t^2/4}` on the real line.
    HermiteLine,
    /// `T_{m,r}[e_{j,m}]`, `j = 0, 1, ...`.
    PureLevel(usize),
    /// `zbar^s z^t`, stored with `s` outer and `z_terms` entries per row.
    PolyanalyticMonomial { zbar_terms: usize, z_terms: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefficientVector {
    pub basis: BasisTag,
    pub coefficients: Vec<Complex64>,
}

impl CoefficientVector {
    pub fn new(basis: BasisTag, coefficients: Vec<Complex64>) -> Result<Self> {
        if let BasisTag::PolyanalyticMonomial { zbar_terms, z_terms } = basis {
            if zbar_terms * z_terms != coefficients.len() {
                return Err(Error::Domain(format!(
                    "{} coefficients do not fill a {zbar_terms} x {z_terms} table",
                    coefficients.len()
                )));
            }
        }
        if coefficients.iter().any(|c| !(c.re.is_finite() && c.im.is_finite())) {
            return Err(Error::Domain("coefficients must be finite".into()));
        }
        Ok(Self { basis, coefficients })
    }

    /// Unit vector at `index`.
    pub fn unit(basis: BasisTag, len: usize, index: usize) -> Self {
        let mut coefficients = vec![Complex64::new(0.0, 0.0); len];
        coefficients[index] = Complex64::new(1.0, 0.0);
        Self { basis, coefficients }
    }

    /// Coefficient 2-norm (the function norm for the orthonormal tags).
    pub fn norm(&self) -> f64 {
        self.coefficients.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }
}

/// Label and sign of `T_{m,r}[e_{j,m}]` in the polyanalytic basis.
pub fn pure_level_index(j: usize, r: usize) -> (BasisIndex, f64) {
    if j >= r {
        (BasisIndex::Analytic { i: j - r, r }, 1.0)
    } else {
        let sign = if (r - j) % 2 == 0 { 1.0 } else { -1.0 };
        (BasisIndex::Antianalytic { j, k: r - j }, sign)
    }
}

/// Result of [`t_op_apply`]: coefficients in the level-`r` basis plus evaluators.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelImage {
    pub r: usize,
    pub m: f64,
    pub coefficients: CoefficientVector,
}

impl LevelImage {
    /// Value times `exp(-m|z|^2/2)`, which is what the `L^2(dA)` norm sees.
    pub fn eval_weighted(&self, z: Complex64) -> Complex64 {
        self.coefficients
            .coefficients
            .iter()
            .enumerate()
            .filter(|(_, c)| c.norm_sqr() > 0.0)
            .map(|(j, c)| {
                let (index, sign) = pure_level_index(j, self.r);
                let params = EnsembleParams { m: self.m, n: j.max(self.r) + 1, q: self.r + 1 };
                c * sign * basis_weighted(&params, index, z).expect("label valid by construction")
            })
            .sum()
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.eval_weighted(z) * (self.m * z.norm_sqr() / 2.0).exp()
    }

    /// Expansion in `zbar^s z^t` from the Laguerre closed forms.
    pub fn to_poly(&self) -> Result<PolyanalyticPoly> {
        let r = self.r;
        let m = self.m;
        let len = self.coefficients.coefficients.len();
        let mut p = PolyanalyticPoly::zero(r + 1, len.max(1));
        let mut ln_fact = vec![0.0f64; len + r + 1];
        for k in 1..ln_fact.len() {
            ln_fact[k] = ln_fact[k - 1] + (k as f64).ln();
        }
        for (j, c) in self.coefficients.coefficients.iter().enumerate() {
            if c.norm_sqr() == 0.0 {
                continue;
            }
            let (index, sign) = pure_level_index(j, r);
            match index {
                BasisIndex::Analytic { i, r } => {
                    // sqrt(r!/(r+i)!) m^{(i+1)/2} z^i sum_k l_k m^k (zbar z)^k
                    let pre = (0.5 * (ln_fact[r] - ln_fact[r + i]) + 0.5 * (i as f64 + 1.0) * m.ln()).exp();
                    for (k, l) in laguerre_coefficients(r, i as f64)?.iter().enumerate() {
                        p.add(k, i + k, c * (sign * pre * l * m.powi(k as i32)));
                    }
                }
                BasisIndex::Antianalytic { j, k } => {
                    let pre = (0.5 * (ln_fact[j] - ln_fact[j + k]) + 0.5 * (k as f64 + 1.0) * m.ln()).exp();
                    for (s, l) in laguerre_coefficients(j, k as f64)?.iter().enumerate() {
                        p.add(k + s, s, c * (sign * pre * l * m.powi(s as i32)));
                    }
                }
            }
        }
        Ok(p)
    }
}

/// `T_{m,r}` applied to an analytic coefficient vector.
pub fn t_op_apply(r: usize, m: f64, input: &CoefficientVector) -> Result<LevelImage> {
    if r > MAX_LEVEL {
        return Err(Error::Capacity { degree: r, max: MAX_LEVEL });
    }
    if !(m.is_finite() && m > 0.0) {
        return Err(Error::InvalidParams(format!("m must be positive, got {m}")));
    }
    if input.basis != BasisTag::MonomialAnalytic {
        return Err(Error::Domain(format!("T_r acts on analytic coefficients, got {:?}", input.basis)));
    }
    Ok(LevelImage {
        r,
        m,
        coefficients: CoefficientVector {
            basis: BasisTag::PureLevel(r),
            coefficients: input.coefficients.clone(),
        },
    })
}

/// Bargmann transform on Hermite-function coefficients: the `j`-th Hermite
/// function goes to `z^j / sqrt(j!)`, so the coefficients carry over unchanged.
pub fn bargmann_apply(input: &CoefficientVector) -> Result<CoefficientVector> {
    if input.basis != BasisTag::HermiteLine {
        return Err(Error::Domain(format!(
            "the Bargmann transform acts on Hermite coefficients, got {:?}",
            input.basis
        )));
    }
    Ok(CoefficientVector {
        basis: BasisTag::MonomialAnalytic,
        coefficients: input.coefficients.clone(),
    })
}

/// Poly-Bargmann transform of level `r`: `T_r` after `B` (with `m = 1`).
pub fn poly_bargmann_apply(r: usize, input: &CoefficientVector) -> Result<LevelImage> {
    t_op_apply(r, 1.0, &bargmann_apply(input)?)
}

/// Reproducing kernel of the level-`r` boundary space,
/// `e^{xi etabar} / (r! sqrt(2 pi)) int_{-inf}^{-xi-etabar} He_r(t+xi-eta) He_r(t+etabar-xibar) e^{-t^2/2} dt`.
pub fn poly_bargmann_kernel(r: usize, xi: Complex64, eta: Complex64) -> Result<Complex64> {
    if r > MAX_LEVEL {
        return Err(Error::Capacity { degree: r, max: MAX_LEVEL });
    }
    Ok(boundary_kernel_levels(r + 1, xi, eta)?[r])
}

/// Polynomial `sum c_{s,t} zbar^s z^t`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyanalyticPoly {
    zbar_terms: usize,
    z_terms: usize,
    coeffs: Vec<Complex64>,
}

impl PolyanalyticPoly {
    pub fn zero(zbar_terms: usize, z_terms: usize) -> Self {
        Self {
            zbar_terms,
            z_terms,
            coeffs: vec![Complex64::new(0.0, 0.0); zbar_terms * z_terms],
        }
    }

    /// `e_{j,m} = sqrt(m^{j+1}/j!) z^j`.
    pub fn analytic_basis(j: usize, m: f64) -> Self {
        let mut p = Self::zero(1, j + 1);
        let ln = 0.5 * ((j as f64 + 1.0) * m.ln() - libm::lgamma(j as f64 + 1.0));
        p.coeffs[j] = Complex64::new(ln.exp(), 0.0);
        p
    }

    pub fn from_coefficients(v: &CoefficientVector) -> Result<Self> {
        match v.basis {
            BasisTag::PolyanalyticMonomial { zbar_terms, z_terms } => Ok(Self {
                zbar_terms,
                z_terms,
                coeffs: v.coefficients.clone(),
            }),
            other => Err(Error::Domain(format!("expected polyanalytic monomials, got {other:?}"))),
        }
    }

    pub fn to_coefficients(&self) -> CoefficientVector {
        CoefficientVector {
            basis: BasisTag::PolyanalyticMonomial {
                zbar_terms: self.zbar_terms,
                z_terms: self.z_terms,
            },
            coefficients: self.coeffs.clone(),
        }
    }

    pub fn get(&self, s: usize, t: usize) -> Complex64 {
        if s < self.zbar_terms && t < self.z_terms {
            self.coeffs[s * self.z_terms + t]
        } else {
            Complex64::new(0.0, 0.0)
        }
    }

    /// Adds `v` to the coefficient of `zbar^s z^t`, growing the table as needed.
    pub fn add(&mut self, s: usize, t: usize, v: Complex64) {
        if s >= self.zbar_terms || t >= self.z_terms {
            let mut grown = Self::zero(self.zbar_terms.max(s + 1), self.z_terms.max(t + 1));
            for a in 0..self.zbar_terms {
                for b in 0..self.z_terms {
                    grown.coeffs[a * grown.z_terms + b] = self.get(a, b);
                }
            }
            *self = grown;
        }
        self.coeffs[s * self.z_terms + t] += v;
    }

    /// `T_{m,1} f = m^{-1/2} (d_z f - m zbar f)`, exact on coefficients.
    pub fn t1(&self, m: f64) -> Self {
        let mut out = Self::zero(self.zbar_terms + 1, self.z_terms);
        let scale = m.sqrt().recip();
        for s in 0..self.zbar_terms {
            for t in 0..self.z_terms {
                let c = self.get(s, t);
                if t > 0 {
                    out.add(s, t - 1, c * (t as f64 * scale));
                }
                out.add(s + 1, t, -c * (m * scale));
            }
        }
        out
    }

    /// `T_{m,r} = (r!)^{-1/2} T_{m,1}^r`.
    pub fn t_op(&self, r: usize, m: f64) -> Self {
        let mut p = self.clone();
        let mut norm = 1.0;
        for k in 1..=r {
            p = p.t1(m);
            norm *= k as f64;
        }
        let f = norm.sqrt().recip();
        for c in p.coeffs.iter_mut() {
            *c *= f;
        }
        p
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        let zb = z.conj();
        let mut acc = Complex64::new(0.0, 0.0);
        for s in (0..self.zbar_terms).rev() {
            let mut row = Complex64::new(0.0, 0.0);
            for t in (0..self.z_terms).rev() {
                row = row * z + self.get(s, t);
            }
            acc = acc * zb + row;
        }
        acc
    }
}

/// Level-`r` kernel built as the Gram sum over `T_{m,r}[e_{j,m}]`, `j < n`,
/// each image obtained by differentiating monomials (no Laguerre closed forms).
/// Intended for small `n`; the monomial expansion loses accuracy as `n` grows.
pub fn pure_level_kernel_by_operator(
    params: &EnsembleParams,
    r: usize,
    z: Complex64,
    w: Complex64,
) -> Result<Complex64> {
    params.validate()?;
    if r >= params.q {
        return Err(Error::Domain(format!("level {r} not below q = {}", params.q)));
    }
    let m = params.m;
    let weight = (-m * (z.norm_sqr() + w.norm_sqr()) / 2.0).exp();
    Ok((0..params.n)
        .map(|j| {
            let img = PolyanalyticPoly::analytic_basis(j, m).t_op(r, m);
            img.eval(z) * img.eval(w).conj()
        })
        .sum::<Complex64>()
        * weight)
}

/// Largest `|pure kernel - operator Gram sum|` over all pairs of `points`.
pub fn pure_level_projection_check(params: &EnsembleParams, r: usize, points: &[Complex64]) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for &z in points {
        for &w in points {
            let a = corr_subkernel_pure(params, r, z, w)?;
            let b = pure_level_kernel_by_operator(params, r, z, w)?;
            worst = worst.max((a - b).norm());
        }
    }
    Ok(worst)
}
