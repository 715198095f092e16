//! Berezin densities, their `m^{-1/2}` blow-ups and the limiting profiles.

use num_complex::{Complex, Complex64};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::kernel::{EnsembleParams, FeatureMap};
use crate::quadrature::{GaussLegendre, PolarQuadrature};
use crate::scalar::Real;
use crate::specfun::{bessel_j1_ratio, laguerre_sequence, HermitePairIntegrals};
use crate::sum::ComplexKahanSum;
use crate::{Error, Result};

pub use crate::specfun::christoffel_darboux_sum;

const SQRT_2PI: f64 = 2.506_628_274_631_000_7;

/// Largest number of levels accepted by the boundary-limit evaluators
/// (levels `0..=64`).
pub const MAX_BOUNDARY_LEVELS: usize = 65;

/// Position of a blow-up center relative to the unit circle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CenterKind {
    Interior,
    Boundary,
    Exterior,
}

/// Center `z0` with local coordinate `xi = sqrt(m) (z - z0)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlowupFrame {
    pub center: Complex64,
    /// Half-width of the band `||z0| - 1| <= delta` classified as boundary.
    pub delta: f64,
}

impl BlowupFrame {
    pub fn new(center: Complex64) -> Self {
        Self {
            center,
            delta: 1e-9,
        }
    }

    pub fn with_tolerance(center: Complex64, delta: f64) -> Self {
        Self { center, delta }
    }

    /// The blow-up exponent; always `1/2`.
    pub fn scale_exponent(&self) -> f64 {
        0.5
    }

    pub fn classify(&self) -> CenterKind {
        let r = self.center.norm();
        if r < 1.0 - self.delta {
            CenterKind::Interior
        } else if r > 1.0 + self.delta {
            CenterKind::Exterior
        } else {
            CenterKind::Boundary
        }
    }

    /// Plane point `z0 + xi / sqrt(m)`.
    pub fn point(&self, m: f64, xi: Complex64) -> Complex64 {
        self.center + xi / m.sqrt()
    }
}

/// One grid point of a blow-up comparison.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProfileSample {
    pub xi: Complex64,
    pub density: f64,
    pub limit_density: f64,
    pub gap: f64,
}

impl ProfileSample {
    pub fn new(xi: Complex64, density: f64, limit_density: f64) -> Self {
        Self {
            xi,
            density,
            limit_density,
            gap: (density - limit_density).abs(),
        }
    }
}

/// Berezin density `w -> |Ж(z,w)|^2 / Ж(z,z)` for a fixed center `z`.
#[derive(Debug, Clone)]
pub struct BerezinDensity {
    fm: FeatureMap<f64>,
    center: Complex64,
    phi_center: Vec<Complex64>,
    diag: f64,
}

impl BerezinDensity {
    pub fn new(params: &EnsembleParams, center: Complex64) -> Result<Self> {
        let fm = FeatureMap::<f64>::new(params)?;
        let phi_center = fm.eval_vec(center);
        let diag = fm.diag(center);
        if !(diag.is_finite() && diag > f64::MIN_POSITIVE) {
            return Err(Error::DegenerateCenter);
        }
        Ok(Self {
            fm,
            center,
            phi_center,
            diag,
        })
    }

    pub fn center(&self) -> Complex64 {
        self.center
    }

    /// `Ж(z,z)` at the center.
    pub fn center_diag(&self) -> f64 {
        self.diag
    }

    pub fn feature_map(&self) -> &FeatureMap<f64> {
        &self.fm
    }

    /// `Ж(z, w)` with `z` the center.
    pub fn kernel_at(&self, w: Complex64) -> Complex64 {
        let pw = self.fm.eval_vec(w);
        self.fm.contract(&self.phi_center, &pw, |_| true)
    }

    pub fn density(&self, w: Complex64) -> f64 {
        self.kernel_at(w).norm_sqr() / self.diag
    }

    /// `m^{-1}` times the density at `center + xi/sqrt(m)`.
    pub fn blowup(&self, xi: Complex64) -> f64 {
        let m = self.fm.params().m;
        self.density(self.center + xi / m.sqrt()) / m
    }
}

pub fn berezin_density(params: &EnsembleParams, z: Complex64, w: Complex64) -> Result<f64> {
    Ok(BerezinDensity::new(params, z)?.density(w))
}

pub fn blowup_density(params: &EnsembleParams, frame: &BlowupFrame, xi: Complex64) -> Result<f64> {
    Ok(BerezinDensity::new(params, frame.center)?.blowup(xi))
}

/// Bulk limit `q^{-1} L^1_{q-1}(|xi|^2)^2 e^{-|xi|^2}`.
pub fn interior_profile<T: Real>(q: usize, xi: Complex<T>) -> T {
    let x = xi.norm_sqr();
    let mut seq = Vec::new();
    laguerre_sequence(q.saturating_sub(1), T::one(), x, &mut seq);
    let l = seq[q.saturating_sub(1)];
    l * l * (-x).exp() / T::of(q.max(1))
}

/// Interior profile in the variable `xi' = sqrt(q) xi`, normalized to 1 at
/// the origin: `q^{-2} L^1_{q-1}(|xi'|^2/q)^2 e^{-|xi'|^2/q}`.
pub fn interior_profile_rescaled<T: Real>(q: usize, xi_prime: Complex<T>) -> T {
    let s = T::of(q.max(1)).sqrt();
    interior_profile(q, xi_prime / s) / T::of(q.max(1))
}

/// Large-`q` limit `J_1(2|xi'|)^2 / |xi'|^2`.
pub fn bessel_profile<T: Real>(xi_prime: Complex<T>) -> T {
    let r = bessel_j1_ratio(xi_prime.norm());
    r * r
}

fn check_levels(q: usize) -> Result<()> {
    if q == 0 {
        return Err(Error::Domain("q must be positive".into()));
    }
    if q > MAX_BOUNDARY_LEVELS {
        return Err(Error::Capacity {
            degree: q,
            max: MAX_BOUNDARY_LEVELS,
        });
    }
    Ok(())
}

/// Per-level terms `e^{xi etabar} / (r! sqrt(2 pi)) int_{-inf}^{-xi-etabar}
/// H_r(t+xi-eta) H_r(t+etabar-xibar) e^{-t^2/2} dt` for `r < q`.
///
/// The substitution `t = s - xi - etabar` turns each term into the real
/// half-line integral
/// `(2 pi)^{-1/2} int_{-inf}^0 h_r(s; xi) conj(h_r(s; eta)) ds` with
/// `h_r(s; xi) = H_r(s - 2 Re xi)/sqrt(r!) exp(s xi - xi^2/2 - s^2/4)`,
/// whose integrand is bounded by the diagonal values. It is integrated with
/// composite Gauss–Legendre to roundoff.
pub fn boundary_kernel_levels(q: usize, xi: Complex64, eta: Complex64) -> Result<Vec<Complex64>> {
    check_levels(q)?;
    let (x1, x2) = (2.0 * xi.re, 2.0 * eta.re);
    let reach = 2.0 * (2.0 * q as f64).sqrt() + 14.0;
    let lower = (x1.min(x2).min(xi.re + eta.re) - reach).min(-reach);
    let panels = (-lower / 0.5).ceil() as usize;
    let gl = GaussLegendre::new(16);
    let c = xi + eta.conj();
    let shift = -(xi * xi + eta.conj() * eta.conj()) * 0.5;
    let mut h1 = vec![0.0; q];
    let mut h2 = vec![0.0; q];
    let mut acc = vec![ComplexKahanSum::<f64>::new(); q];
    let (nodes, weights) = gl.composite(lower, 0.0, panels);
    for (s, w) in nodes.into_iter().zip(weights) {
        let e = (c * s + shift - s * s * 0.5).exp() * w;
        if e == Complex64::new(0.0, 0.0) {
            continue;
        }
        normalized_hermite(s - x1, &mut h1);
        normalized_hermite(s - x2, &mut h2);
        for r in 0..q {
            acc[r].add(e * (h1[r] * h2[r]));
        }
    }
    Ok(acc.iter().map(|a| a.value() / SQRT_2PI).collect())
}

/// Exact algebraic evaluation of [`boundary_kernel_levels`] through the
/// half-line Hermite product table. Well conditioned only for small `q`
/// and moderate arguments; kept as an independent cross-check.
pub fn boundary_kernel_levels_algebraic(
    q: usize,
    xi: Complex64,
    eta: Complex64,
) -> Result<Vec<Complex64>> {
    check_levels(q)?;
    let a = -xi - eta.conj();
    let alpha = xi - eta;
    let beta = eta.conj() - xi.conj();
    let table = HermitePairIntegrals::new(q, a)?;
    let pre = (xi * eta.conj()).exp() / SQRT_2PI;
    Ok(table
        .levels(q, alpha, beta)
        .into_iter()
        .map(|v| v * pre)
        .collect())
}

/// `H_r(x)/sqrt(r!)` for `r < out.len()`.
fn normalized_hermite(x: f64, out: &mut [f64]) {
    let q = out.len();
    out[0] = 1.0;
    if q > 1 {
        out[1] = x;
    }
    for j in 1..q.saturating_sub(1) {
        out[j + 1] = (x * out[j] - (j as f64).sqrt() * out[j - 1]) / ((j + 1) as f64).sqrt();
    }
}

/// Boundary limit kernel: sum over the first `q` poly-Bargmann levels.
pub fn boundary_kernel_limit(q: usize, xi: Complex64, eta: Complex64) -> Result<Complex64> {
    Ok(boundary_kernel_levels(q, xi, eta)?.into_iter().sum())
}

/// Limit of the blow-up Berezin density at a unit-circle center, in the
/// frame rotated so the center sits at `1`:
/// `(1/(pi q)) |sum_r (1/r!) int_{-inf}^{-xi} H_r(t+xi) H_r(t-xibar) e^{-t^2/2} dt|^2 e^{-|xi|^2}`.
pub fn boundary_profile(q: usize, xi: Complex64) -> Result<f64> {
    let k = boundary_kernel_limit(q, xi, Complex64::new(0.0, 0.0))?;
    Ok(2.0 * k.norm_sqr() * (-xi.norm_sqr()).exp() / q as f64)
}

/// `Ж(z,z)/m` at `z = 1 + xi/sqrt(m)`.
pub fn one_point_intensity_blowup(params: &EnsembleParams, xi: Complex64) -> Result<f64> {
    let fm = FeatureMap::<f64>::new(params)?;
    let z = Complex64::new(1.0, 0.0) + xi / params.m.sqrt();
    Ok(fm.diag(z) / params.m)
}

/// `sum_{r<q} (1/(r! sqrt(2 pi))) int_{-inf}^{-2 Re xi} H_r(t)^2 e^{-t^2/2} dt`.
pub fn one_point_intensity_limit(q: usize, xi: Complex64) -> Result<f64> {
    check_levels(q)?;
    let table = HermitePairIntegrals::new(q, Complex64::new(-2.0 * xi.re, 0.0))?;
    Ok((0..q).map(|r| table.entry(r, r).re).sum::<f64>() / SQRT_2PI)
}

/// `(2q/pi) int_{-1}^{-s/sqrt(q)} sqrt(1 - tau^2) dtau`, clamped to `[0, q]`.
pub fn semicircle_intensity(q: usize, s: f64) -> f64 {
    let qf = q as f64;
    let tau = (-s / qf.sqrt()).clamp(-1.0, 1.0);
    let prim = |t: f64| 0.5 * (t * (1.0 - t * t).max(0.0).sqrt() + t.asin());
    let v = 2.0 * qf / std::f64::consts::PI * (prim(tau) - prim(-1.0));
    v.clamp(0.0, qf)
}

/// Limiting density for the frame's center class.
pub fn limit_density(q: usize, frame: &BlowupFrame, xi: Complex64) -> Result<f64> {
    match frame.classify() {
        CenterKind::Interior => Ok(interior_profile(q, xi)),
        CenterKind::Boundary => {
            let rot = Complex64::from_polar(1.0, -frame.center.arg());
            boundary_profile(q, xi * rot)
        }
        CenterKind::Exterior => Ok(0.0),
    }
}

/// Blow-up density and its limit at each `xi`, evaluated in parallel with
/// results in input order.
pub fn blowup_profile(
    params: &EnsembleParams,
    frame: &BlowupFrame,
    xis: &[Complex64],
) -> Result<Vec<ProfileSample>> {
    let bd = BerezinDensity::new(params, frame.center)?;
    xis.par_iter()
        .map(|&xi| {
            let lim = limit_density(params.q, frame, xi)?;
            Ok(ProfileSample::new(xi, bd.blowup(xi), lim))
        })
        .collect()
}

/// Polar rule on the disk `|xi| <= radius` used for blow-up integrals.
pub fn blowup_quadrature(radius: f64) -> PolarQuadrature {
    PolarQuadrature {
        radius,
        radial_panels: (radius * 20.0).ceil() as usize,
        radial_order: 8,
        angles: 64,
    }
}

/// `int_{|xi| <= radius} |blow-up density - limit| dA(xi)`.
pub fn profile_l1_gap(params: &EnsembleParams, frame: &BlowupFrame, radius: f64) -> Result<f64> {
    let bd = BerezinDensity::new(params, frame.center)?;
    let nodes = blowup_quadrature(radius).nodes();
    let parts: Result<Vec<f64>> = nodes
        .par_iter()
        .map(|&(xi, w)| Ok(w * (bd.blowup(xi) - limit_density(params.q, frame, xi)?).abs()))
        .collect();
    Ok(parts?.iter().sum())
}

/// `sup |blow-up density - limit|` over a lattice of spacing `step` in `|xi| <= radius`.
pub fn profile_sup_gap(params: &EnsembleParams, frame: &BlowupFrame, radius: f64, step: f64) -> Result<f64> {
    let bd = BerezinDensity::new(params, frame.center)?;
    let k = (radius / step).floor() as i64;
    let xis: Vec<Complex64> = (-k..=k)
        .flat_map(|i| (-k..=k).map(move |j| Complex64::new(i as f64 * step, j as f64 * step)))
        .filter(|xi| xi.norm() <= radius)
        .collect();
    let gaps: Result<Vec<f64>> = xis
        .par_iter()
        .map(|&xi| Ok((bd.blowup(xi) - limit_density(params.q, frame, xi)?).abs()))
        .collect();
    Ok(gaps?.into_iter().fold(0.0, f64::max))
}

/// `int_{|xi| <= radius}` of the blow-up density, i.e. its captured mass.
pub fn blowup_mass(params: &EnsembleParams, frame: &BlowupFrame, radius: f64) -> Result<f64> {
    let bd = BerezinDensity::new(params, frame.center)?;
    let nodes = blowup_quadrature(radius).nodes();
    let parts: Vec<f64> = nodes.par_iter().map(|&(xi, w)| w * bd.blowup(xi)).collect();
    Ok(parts.iter().sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::{hermite_prob, normal_cdf};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn params(m: f64, n: usize, q: usize) -> EnsembleParams {
        EnsembleParams::new(m, n, q).unwrap()
    }

    /// Contour quadrature of one level term: real axis to Re a, then vertical.
    fn level_by_contour(r: usize, xi: Complex64, eta: Complex64) -> Complex64 {
        let a = -xi - eta.conj();
        let (alpha, beta) = (xi - eta, eta.conj() - xi.conj());
        let f = |t: Complex64| {
            hermite_prob(r, t + alpha).unwrap() * hermite_prob(r, t + beta).unwrap() * (-t * t * 0.5).exp()
        };
        let gl = GaussLegendre::new(30);
        let mut acc = c(0.0, 0.0);
        for p in 0..80 {
            let (lo, hi) = (p as f64 * 0.5, (p + 1) as f64 * 0.5);
            for (s, w) in gl.mapped(lo, hi) {
                acc += f(c(a.re - s, 0.0)) * w;
            }
        }
        for p in 0..20 {
            let (lo, hi) = (a.im * p as f64 / 20.0, a.im * (p + 1) as f64 / 20.0);
            for (s, w) in gl.mapped(lo, hi) {
                acc += f(c(a.re, s)) * c(0.0, w);
            }
        }
        let mut fact = 1.0;
        for j in 1..=r {
            fact *= j as f64;
        }
        acc * (xi * eta.conj()).exp() / (fact * SQRT_2PI)
    }

    #[test]
    fn frame_classification() {
        assert_eq!(BlowupFrame::new(c(0.4, 0.0)).classify(), CenterKind::Interior);
        assert_eq!(BlowupFrame::new(c(0.0, 1.0)).classify(), CenterKind::Boundary);
        assert_eq!(BlowupFrame::new(c(1.3, 0.0)).classify(), CenterKind::Exterior);
        assert_eq!(BlowupFrame::new(c(0.0, 0.0)).scale_exponent(), 0.5);
    }

    #[test]
    fn density_worked_values() {
        let p = params(1.0, 1, 1);
        let z = c(0.3, 0.2);
        // K == 1 so berd(w) = e^{-|w|^2}
        for w in [c(0.0, 0.0), c(1.0, -0.5), c(2.0, 2.0)] {
            let d = berezin_density(&p, z, w).unwrap();
            assert!((d - (-w.norm_sqr()).exp()).abs() < 1e-14);
        }
        let p2 = params(30.0, 30, 2);
        let bd = BerezinDensity::new(&p2, c(0.2, 0.1)).unwrap();
        assert!((bd.density(c(0.2, 0.1)) - bd.center_diag()).abs() < 1e-12 * bd.center_diag());
    }

    #[test]
    fn density_integrates_to_one() {
        let p = params(60.0, 60, 1);
        let mass = blowup_mass(&p, &BlowupFrame::new(c(0.0, 0.0)), 6.0).unwrap();
        assert!((mass - 1.0).abs() < 1e-3);
    }

    #[test]
    fn degenerate_center_is_reported() {
        let p = params(400.0, 10, 1);
        assert_eq!(
            BerezinDensity::new(&p, c(30.0, 0.0)).unwrap_err(),
            Error::DegenerateCenter
        );
    }

    #[test]
    fn interior_profile_values() {
        let xi = c(0.7, -0.4);
        assert!((interior_profile(1, xi) - (-xi.norm_sqr()).exp()).abs() < 1e-15);
        assert!((interior_profile(5, c(0.0, 0.0)) - 5.0).abs() < 1e-13);
        assert!(interior_profile(2, c(2f64.sqrt(), 0.0)).abs() < 1e-28);
    }

    #[test]
    fn bessel_profile_values() {
        assert_eq!(bessel_profile(c(0.0, 0.0)), 1.0);
        assert!(bessel_profile(c(1.915_852_985_103_756, 0.0)) < 1e-28);
        let big_q = interior_profile_rescaled(64, c(1.0, 0.0));
        assert!((big_q - bessel_profile(c(1.0, 0.0))).abs() < 0.02);
    }

    #[test]
    fn boundary_limit_worked_values() {
        let zero = c(0.0, 0.0);
        assert!((boundary_kernel_limit(1, zero, zero).unwrap() - c(0.5, 0.0)).norm() < 1e-15);
        for q in 1..=10 {
            let v = boundary_kernel_limit(q, zero, zero).unwrap();
            assert!((v - c(q as f64 / 2.0, 0.0)).norm() < 1e-12, "q={q}");
        }
        assert!((boundary_profile(1, zero).unwrap() - 0.5).abs() < 1e-15);
        assert!((boundary_profile(2, zero).unwrap() - 1.0).abs() < 1e-14);
        assert!(boundary_profile(3, c(9.0, 0.0)).unwrap() < 1e-12);
        assert!(boundary_kernel_limit(66, zero, zero).is_err());
    }

    #[test]
    fn lowest_level_is_shifted_normal_cdf() {
        let (xi, eta) = (c(0.3, -0.8), c(-0.5, 0.2));
        let v = boundary_kernel_limit(1, xi, eta).unwrap();
        let want = (xi * eta.conj()).exp() * normal_cdf(-xi - eta.conj());
        assert!((v - want).norm() < 1e-13 * want.norm());
    }

    #[test]
    fn boundary_levels_match_contour_quadrature() {
        let pairs = [(c(0.3, -0.8), c(-0.5, 0.2)), (c(1.5, 1.0), c(-0.2, -2.0)), (c(-2.0, 0.4), c(0.0, 0.0))];
        for (xi, eta) in pairs {
            let lv = boundary_kernel_levels(6, xi, eta).unwrap();
            for (r, v) in lv.iter().enumerate() {
                let want = level_by_contour(r, xi, eta);
                assert!((v - want).norm() < 1e-9 * want.norm().max(1.0), "r={r} {v} {want}");
            }
        }
    }

    #[test]
    fn quadrature_and_algebraic_routes_agree() {
        let pairs = [(c(0.3, -0.8), c(-0.5, 0.2)), (c(2.5, 1.0), c(-0.2, -2.0)), (c(-3.0, 2.4), c(1.0, 3.0))];
        for (xi, eta) in pairs {
            let a = boundary_kernel_levels(6, xi, eta).unwrap();
            let b = boundary_kernel_levels_algebraic(6, xi, eta).unwrap();
            let scale = ((xi.norm_sqr() + eta.norm_sqr()) / 2.0).exp();
            for r in 0..6 {
                assert!((a[r] - b[r]).norm() < 1e-11 * scale, "r={r} {} {}", a[r], b[r]);
            }
        }
    }

    #[test]
    fn large_level_count_reference() {
        // High-precision evaluation of the monomial-moment formula.
        let cases = [
            (12, c(0.9, -1.4), c(-0.6, 2.2), c(-3.895_557_095_714_899, -1.521_016_161_684_753_5)),
            (32, c(1.2, -0.7), c(-0.4, 1.5), c(0.209_291_735_498_487_1, 1.041_838_409_200_670_5)),
            (64, c(-1.0, 2.0), c(0.5, -0.3), c(-3.100_247_948_880_503, -0.616_426_253_670_712_5)),
            (64, c(3.0, 1.0), c(3.0, 1.0), c(376_358.582_882_985, 0.0)),
            (40, c(-2.5, 0.5), c(0.0, 0.0), c(-1.213_126_831_760_344_9, 2.946_409_226_879_719_4)),
        ];
        for (q, xi, eta, want) in cases {
            let v = boundary_kernel_limit(q, xi, eta).unwrap();
            let scale = ((xi.norm_sqr() + eta.norm_sqr()) / 2.0).exp();
            assert!((v - want).norm() < 1e-13 * scale * q as f64, "q={q}: {v} vs {want}");
        }
    }

    #[test]
    fn boundary_limit_is_hermitian() {
        let (xi, eta) = (c(0.9, -1.4), c(-0.6, 2.2));
        for q in [1, 3, 12, 40] {
            let a = boundary_kernel_limit(q, xi, eta).unwrap();
            let b = boundary_kernel_limit(q, eta, xi).unwrap();
            assert!((a - b.conj()).norm() < 1e-9 * a.norm().max(1.0), "q={q} {a} {b}");
        }
    }

    #[test]
    fn one_point_limits() {
        for q in [1, 2, 5] {
            let qf = q as f64;
            assert!((one_point_intensity_limit(q, c(-12.0, 0.0)).unwrap() - qf).abs() < 1e-10);
            assert!((one_point_intensity_limit(q, c(0.0, 1.3)).unwrap() - qf / 2.0).abs() < 1e-12);
            assert!(one_point_intensity_limit(q, c(12.0, 0.0)).unwrap() < 1e-10);
        }
        let p = params(400.0, 400, 2);
        let u = one_point_intensity_blowup(&p, c(0.0, 0.0)).unwrap();
        assert!((u - 1.0).abs() < 0.1);
    }

    #[test]
    fn one_point_blowup_shares_the_diagonal_path() {
        let p = params(100.0, 100, 2);
        let xi = c(-3.0, 0.0);
        let z = c(1.0, 0.0) + xi / 10.0;
        let bd = BerezinDensity::new(&p, z).unwrap();
        assert_eq!(one_point_intensity_blowup(&p, xi).unwrap(), bd.center_diag() / 100.0);
    }

    #[test]
    fn semicircle_values() {
        for q in [1, 3, 8] {
            let qf = q as f64;
            assert!((semicircle_intensity(q, -qf.sqrt()) - qf).abs() < 1e-12);
            assert!((semicircle_intensity(q, 0.0) - qf / 2.0).abs() < 1e-12);
            assert_eq!(semicircle_intensity(q, qf.sqrt()), 0.0);
        }
    }

    #[test]
    fn blowup_samples_are_nonnegative() {
        let p = params(50.0, 50, 2);
        let frame = BlowupFrame::new(c(1.0, 0.0));
        let xis: Vec<Complex64> = (0..9).map(|k| c(k as f64 - 4.0, 0.5)).collect();
        for s in blowup_profile(&p, &frame, &xis).unwrap() {
            assert!(s.density >= 0.0 && s.limit_density >= 0.0);
            assert_eq!(s.gap, (s.density - s.limit_density).abs());
        }
    }

    #[test]
    fn rotated_boundary_center_uses_rotated_limit() {
        let i = c(0.0, 1.0);
        let frame = BlowupFrame::new(i);
        let xi = c(0.0, 0.7); // outward normal direction at i
        let v = limit_density(2, &frame, xi).unwrap();
        assert!((v - boundary_profile(2, c(0.7, 0.0)).unwrap()).abs() < 1e-14);
    }
}
