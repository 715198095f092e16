//! Exact sampling of the `nq`-point process and its determinant identities.
//!
//! The sampler is the sequential projection scheme: keep an orthonormal set of
//! used feature directions, draw each point from the residual diagonal by
//! rejection against the full diagonal `Ж(z,z)/(nq)`, then orthonormalize the
//! residual direction of the accepted point.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::kernel::{EnsembleParams, FeatureMap};
use crate::linalg::log_det;
use crate::quadrature::{tail_radius, GaussLegendre};
use crate::scaled::ScaledComplex;
use crate::{Error, Result};

const STALL_THRESHOLD: f64 = 1e-6;
const STALL_PROPOSALS: u64 = 1_000_000;

/// One sample: exactly `nq` points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Configuration {
    pub points: Vec<Complex64>,
    pub params: EnsembleParams,
    pub seed: u64,
}

impl Configuration {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Inverse-CDF sampler for `|z|` when `z` has density `Ж(z,z)/(nq)`.
///
/// The table is kept in `t = |z|^2`, where the density is `Ж/(nq)` against
/// `dt`; within a cell the CDF is inverted by Newton's method on a
/// Gauss–Legendre antiderivative, so draws are exact up to roundoff.
#[derive(Debug, Clone)]
pub struct RadialSampler {
    fm: FeatureMap<f64>,
    t_edges: Vec<f64>,
    cumulative: Vec<f64>,
    total: f64,
    gl: GaussLegendre,
}

impl RadialSampler {
    pub fn new(params: &EnsembleParams) -> Result<Self> {
        let fm = FeatureMap::<f64>::new(params)?;
        let t_max = tail_radius(params).powi(2);
        let density = |t: f64| fm.diag(Complex64::new(t.sqrt(), 0.0)) / params.dim() as f64;
        let pilot = (0..=1024)
            .map(|i| density(t_max * i as f64 / 1024.0))
            .fold(0.0, f64::max);
        let cells = ((t_max * pilot / 5e-4).ceil() as usize).max(1024);
        let gl = GaussLegendre::new(8);
        let h = t_max / cells as f64;
        let t_edges: Vec<f64> = (0..=cells).map(|i| i as f64 * h).collect();
        let masses: Vec<f64> = t_edges
            .par_windows(2)
            .map(|w| gl.mapped(w[0], w[1]).map(|(t, wt)| wt * density(t)).sum())
            .collect();
        let mut cumulative = Vec::with_capacity(cells + 1);
        let mut acc = crate::sum::KahanSum::new();
        cumulative.push(0.0);
        for m in masses {
            acc.add(m);
            cumulative.push(acc.value());
        }
        let total = acc.value();
        Ok(Self { fm, t_edges, cumulative, total, gl })
    }

    fn density(&self, t: f64) -> f64 {
        self.fm.diag(Complex64::new(t.sqrt(), 0.0)) / (self.fm.params().dim() as f64 * self.total)
    }

    /// Table of `(radius, cumulative mass)`, normalized to end at 1.
    pub fn cdf_grid(&self) -> Vec<(f64, f64)> {
        self.t_edges
            .iter()
            .zip(&self.cumulative)
            .map(|(t, c)| (t.sqrt(), c / self.total))
            .collect()
    }

    /// Mass captured before normalization (should be 1 up to the tail).
    pub fn raw_total(&self) -> f64 {
        self.total
    }

    /// Radius with `P(|z| <= r) = u`.
    pub fn quantile(&self, u: f64) -> f64 {
        let target = u.clamp(0.0, 1.0) * self.total;
        let cell = self
            .cumulative
            .partition_point(|c| *c <= target)
            .clamp(1, self.cumulative.len() - 1)
            - 1;
        let (a, b) = (self.t_edges[cell], self.t_edges[cell + 1]);
        let rest = (target - self.cumulative[cell]) / self.total;
        let mass_to = |t: f64| -> f64 { self.gl.mapped(a, t).map(|(s, w)| w * self.density(s)).sum() };
        let (mut lo, mut hi) = (a, b);
        let mut t = a + (b - a) * (rest / ((self.cumulative[cell + 1] - self.cumulative[cell]) / self.total)).clamp(0.0, 1.0);
        for _ in 0..40 {
            let f = mass_to(t) - rest;
            if f > 0.0 {
                hi = t;
            } else {
                lo = t;
            }
            let d = self.density(t);
            let step = if d > 0.0 { f / d } else { f64::NAN };
            if step.abs() <= 1e-13 * (b - a) {
                t = (t - step).clamp(a, b);
                break;
            }
            let next = t - step;
            t = if next > lo && next < hi { next } else { 0.5 * (lo + hi) };
        }
        t.sqrt()
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        self.quantile(rng.random::<f64>())
    }
}

/// Orthonormal used directions, Gram–Schmidt applied twice.
#[derive(Debug, Clone, Default)]
struct Directions {
    vecs: Vec<Vec<Complex64>>,
}

impl Directions {
    fn coefficients(&self, v: &[Complex64]) -> Vec<Complex64> {
        self.vecs
            .iter()
            .map(|e| e.iter().zip(v).map(|(a, b)| b * a.conj()).sum())
            .collect()
    }

    fn projected_norm_sqr(&self, v: &[Complex64]) -> f64 {
        self.coefficients(v).iter().map(|c| c.norm_sqr()).sum()
    }

    fn push(&mut self, v: &[Complex64]) {
        let mut r = v.to_vec();
        for _ in 0..2 {
            let c = self.coefficients(&r);
            for (e, ce) in self.vecs.iter().zip(&c) {
                for (ri, ei) in r.iter_mut().zip(e) {
                    *ri -= ce * ei;
                }
            }
        }
        let nrm = r.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        for x in r.iter_mut() {
            *x /= nrm;
        }
        self.vecs.push(r);
    }

    #[cfg(test)]
    fn orthonormality_error(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (i, a) in self.vecs.iter().enumerate() {
            for (j, b) in self.vecs.iter().enumerate() {
                let ip: Complex64 = a.iter().zip(b).map(|(x, y)| x * y.conj()).sum();
                let want = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((ip - want).norm());
            }
        }
        worst
    }
}

/// Reusable sampler for one parameter set.
#[derive(Debug, Clone)]
pub struct Sampler {
    params: EnsembleParams,
    fm: FeatureMap<f64>,
    radial: RadialSampler,
}

impl Sampler {
    pub fn new(params: &EnsembleParams) -> Result<Self> {
        if params.dim() > 5000 {
            return Err(Error::InvalidParams(format!(
                "sampling needs nq <= 5000, got {}",
                params.dim()
            )));
        }
        Ok(Self {
            params: *params,
            fm: FeatureMap::new(params)?,
            radial: RadialSampler::new(params)?,
        })
    }

    pub fn params(&self) -> &EnsembleParams {
        &self.params
    }

    pub fn radial(&self) -> &RadialSampler {
        &self.radial
    }

    fn propose(&self, rng: &mut ChaCha8Rng) -> Complex64 {
        let r = self.radial.sample(rng);
        let theta = 2.0 * std::f64::consts::PI * rng.random::<f64>();
        Complex64::from_polar(r, theta)
    }

    fn run(&self, seed: u64) -> Result<(Configuration, Directions)> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let total = self.params.dim();
        let mut dirs = Directions::default();
        let mut points = Vec::with_capacity(total);
        let mut phi = vec![Complex64::new(0.0, 0.0); self.fm.dim()];
        while points.len() < total {
            let mut stalled = 0u64;
            loop {
                let z = self.propose(&mut rng);
                self.fm.eval(z, &mut phi);
                let full: f64 = phi.iter().map(|v| v.norm_sqr()).sum();
                let ratio = if full > 0.0 {
                    ((full - dirs.projected_norm_sqr(&phi)) / full).clamp(0.0, 1.0)
                } else {
                    0.0
                };
                if rng.random::<f64>() < ratio {
                    points.push(z);
                    dirs.push(&phi);
                    break;
                }
                if ratio < STALL_THRESHOLD {
                    stalled += 1;
                    if stalled >= STALL_PROPOSALS {
                        return Err(Error::SamplerStall {
                            proposals: stalled,
                            threshold: STALL_THRESHOLD,
                        });
                    }
                } else {
                    stalled = 0;
                }
            }
        }
        Ok((Configuration { points, params: self.params, seed }, dirs))
    }

    /// One configuration, fully determined by `seed`.
    pub fn sample(&self, seed: u64) -> Result<Configuration> {
        self.run(seed).map(|(c, _)| c)
    }

    /// Independent configurations for each seed, in seed order.
    pub fn sample_many(&self, seeds: &[u64]) -> Result<Vec<Configuration>> {
        seeds.par_iter().map(|&s| self.sample(s)).collect()
    }
}

pub fn sample_configuration(params: &EnsembleParams, seed: u64) -> Result<Configuration> {
    Sampler::new(params)?.sample(seed)
}

/// `det[kernel(z_i, z_j)]` for a Hermitian kernel (real part of the LU determinant).
pub fn correlation_determinant<F>(points: &[Complex64], kernel: F) -> f64
where
    F: Fn(Complex64, Complex64) -> Complex64,
{
    let k = points.len();
    let mut a = Vec::with_capacity(k * k);
    for &zi in points {
        for &zj in points {
            a.push(kernel(zi, zj));
        }
    }
    log_det(a, k).to_complex().re
}

fn canonical(points: &[Complex64]) -> Vec<Complex64> {
    let mut p = points.to_vec();
    p.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    p
}

fn feature_matrix(fm: &FeatureMap<f64>, points: &[Complex64]) -> Vec<Complex64> {
    let phis: Vec<Vec<Complex64>> = points.iter().map(|&z| fm.eval_vec(z)).collect();
    let mut a = Vec::with_capacity(points.len() * points.len());
    for pi in &phis {
        for pj in &phis {
            a.push(fm.contract(pi, pj, |_| true));
        }
    }
    a
}

/// `k`-point intensity `det[Ж(z_i, z_j)]`.
///
/// Points are put in a canonical order first, so the value is exactly
/// invariant under permutations.
pub fn joint_intensity(params: &EnsembleParams, points: &[Complex64]) -> Result<f64> {
    if points.is_empty() {
        return Err(Error::Domain("joint_intensity needs at least one point".into()));
    }
    let fm = FeatureMap::<f64>::new(params)?;
    let pts = canonical(points);
    Ok(log_det(feature_matrix(&fm, &pts), pts.len()).to_complex().re)
}

/// Polyanalytic Vandermonde determinant: rows `zbar^s z^t`, `(s, t)` with `s`
/// outer, one column per point.
pub fn vandermonde_poly(points: &[Complex64], n: usize, q: usize) -> Result<ScaledComplex<f64>> {
    let size = n * q;
    if points.len() != size {
        return Err(Error::Domain(format!(
            "expected n*q = {size} points, got {}",
            points.len()
        )));
    }
    let mut a = vec![Complex64::new(0.0, 0.0); size * size];
    for (col, &z) in points.iter().enumerate() {
        let mut zs = Complex64::new(1.0, 0.0);
        for s in 0..q {
            let mut zt = zs;
            for t in 0..n {
                a[(s * n + t) * size + col] = zt;
                zt *= z;
            }
            zs *= z.conj();
        }
    }
    Ok(log_det(a, size))
}

/// `log det[Ж(z_i,z_j)] - (2 log|Δ_q| - m sum |z_i|^2)`, which does not depend
/// on the configuration.
pub fn det_identity_ratio(params: &EnsembleParams, points: &[Complex64]) -> Result<f64> {
    if points.len() != params.dim() {
        return Err(Error::Domain(format!(
            "expected nq = {} points, got {}",
            params.dim(),
            points.len()
        )));
    }
    let fm = FeatureMap::<f64>::new(params)?;
    let kdet = log_det(feature_matrix(&fm, points), points.len());
    let vdm = vandermonde_poly(points, params.n, params.q)?;
    if kdet.is_zero() || vdm.is_zero() {
        return Err(Error::Singular("both determinants vanish; ratio is indeterminate".into()));
    }
    let weight: f64 = points.iter().map(|z| z.norm_sqr()).sum::<f64>() * params.m;
    Ok(kdet.log_magnitude - (2.0 * vdm.log_magnitude - weight))
}

/// Counting region for empirical intensities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Region {
    /// `inner <= |z| < outer`.
    Annulus { inner: f64, outer: f64 },
    /// `re.0 <= Re z < re.1`, `im.0 <= Im z < im.1`.
    Rect { re: (f64, f64), im: (f64, f64) },
}

impl Region {
    pub fn contains(&self, z: Complex64) -> bool {
        match *self {
            Region::Annulus { inner, outer } => {
                let r = z.norm();
                r >= inner && r < outer
            }
            Region::Rect { re, im } => z.re >= re.0 && z.re < re.1 && z.im >= im.0 && z.im < im.1,
        }
    }

    /// `int_region Ж(z,z) dA(z)`.
    pub fn expected_count(&self, fm: &FeatureMap<f64>) -> f64 {
        let gl = GaussLegendre::new(12);
        let sm = fm.params().m.sqrt();
        let panels = |len: f64| ((len * sm / 0.1).ceil() as usize).max(1);
        match *self {
            Region::Annulus { inner, outer } => {
                let (rs, ws) = gl.composite(inner, outer, panels(outer - inner));
                rs.iter()
                    .zip(&ws)
                    .map(|(&r, &w)| 2.0 * r * w * fm.diag(Complex64::new(r, 0.0)))
                    .sum()
            }
            Region::Rect { re, im } => {
                let (xs, wx) = gl.composite(re.0, re.1, panels(re.1 - re.0));
                let (ys, wy) = gl.composite(im.0, im.1, panels(im.1 - im.0));
                let mut acc = 0.0;
                for (x, a) in xs.iter().zip(&wx) {
                    for (y, b) in ys.iter().zip(&wy) {
                        acc += a * b * fm.diag(Complex64::new(*x, *y));
                    }
                }
                acc / std::f64::consts::PI
            }
        }
    }
}

/// Observed versus expected counts in one region.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntensityBin {
    pub region: Region,
    pub observed_mean: f64,
    pub expected_mean: f64,
    pub standard_error: f64,
    pub z_score: f64,
}

/// Mean counts per annulus `[edges[i], edges[i+1])` against the intensity integral.
pub fn empirical_intensity(configs: &[Configuration], edges: &[f64]) -> Result<Vec<IntensityBin>> {
    if edges.len() < 2 || edges[0] < 0.0 || edges.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Domain("bin edges must be nonnegative and strictly increasing".into()));
    }
    let regions: Vec<Region> = edges
        .windows(2)
        .map(|w| Region::Annulus { inner: w[0], outer: w[1] })
        .collect();
    empirical_intensity_regions(configs, &regions)
}

/// [`empirical_intensity`] for arbitrary regions.
pub fn empirical_intensity_regions(configs: &[Configuration], regions: &[Region]) -> Result<Vec<IntensityBin>> {
    if configs.len() < 50 {
        return Err(Error::Domain(format!(
            "need at least 50 configurations, got {}",
            configs.len()
        )));
    }
    let params = configs[0].params;
    if configs.iter().any(|c| c.params != params) {
        return Err(Error::Domain("configurations have different parameters".into()));
    }
    let fm = FeatureMap::<f64>::new(&params)?;
    let n = configs.len() as f64;
    Ok(regions
        .par_iter()
        .map(|region| {
            let counts: Vec<f64> = configs
                .iter()
                .map(|c| c.points.iter().filter(|z| region.contains(**z)).count() as f64)
                .collect();
            let mean = counts.iter().sum::<f64>() / n;
            let expected = region.expected_count(&fm);
            // Rare bins often see no points at all; floor the variance at the
            // Bernoulli value so an empty bin with tiny expectation is not flagged.
            let e = expected.clamp(0.0, 1.0);
            let var = counts.iter().map(|c| (c - mean).powi(2)).sum::<f64>() / (n - 1.0);
            let se = (var.max(e * (1.0 - e)) / n).sqrt();
            let diff = mean - expected;
            let z_score = if se > 0.0 {
                diff / se
            } else if diff.abs() <= 1e-9 * expected.abs().max(1.0) {
                0.0
            } else {
                diff.signum() * f64::INFINITY
            };
            IntensityBin {
                region: *region,
                observed_mean: mean,
                expected_mean: expected,
                standard_error: se,
                z_score,
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn params(m: f64, n: usize, q: usize) -> EnsembleParams {
        EnsembleParams::new(m, n, q).unwrap()
    }

    #[test]
    fn radial_table_is_a_cdf() {
        for p in [params(1.0, 1, 1), params(30.0, 30, 2), params(5.0, 5, 2)] {
            let rs = RadialSampler::new(&p).unwrap();
            assert!((rs.raw_total() - 1.0).abs() < 1e-9, "{}", rs.raw_total());
            let grid = rs.cdf_grid();
            assert_eq!(grid[0].1, 0.0);
            assert!((grid.last().unwrap().1 - 1.0).abs() < 1e-15);
            assert!(grid.windows(2).all(|w| w[1].1 >= w[0].1 && w[1].1 - w[0].1 <= 1e-3));
        }
    }

    #[test]
    fn radial_quantile_single_point_case() {
        // m=n=q=1: |z|^2 is standard exponential.
        let rs = RadialSampler::new(&params(1.0, 1, 1)).unwrap();
        for u in [0.01, 0.3, 0.5, 0.9, 0.999] {
            let r = rs.quantile(u);
            let want = (-(1.0f64 - u).ln()).sqrt();
            assert!((r - want).abs() < 1e-10, "{u}: {r} {want}");
        }
    }

    #[test]
    fn exact_cardinality_and_determinism() {
        let p = params(30.0, 30, 2);
        let s = Sampler::new(&p).unwrap();
        let a = s.sample(7).unwrap();
        assert_eq!(a.len(), 60);
        assert_eq!(a, s.sample(7).unwrap());
        assert_ne!(a.points, s.sample(8).unwrap().points);
        assert!(a.points.iter().all(|z| z.re.is_finite() && z.im.is_finite()));
    }

    #[test]
    fn used_directions_stay_orthonormal() {
        let (_, dirs) = Sampler::new(&params(20.0, 20, 3)).unwrap().run(3).unwrap();
        assert!(dirs.orthonormality_error() < 1e-12);
    }

    #[test]
    fn single_point_radius_law() {
        let s = Sampler::new(&params(1.0, 1, 1)).unwrap();
        let seeds: Vec<u64> = (0..10_000).collect();
        let mean = s
            .sample_many(&seeds)
            .unwrap()
            .iter()
            .map(|c| c.points[0].norm_sqr())
            .sum::<f64>()
            / 1e4;
        assert!((mean - 1.0).abs() < 0.03, "{mean}");
    }

    #[test]
    fn joint_intensity_small_cases() {
        let p = params(3.0, 4, 2);
        let fm = FeatureMap::<f64>::new(&p).unwrap();
        let (z1, z2) = (c(0.3, -0.2), c(-0.1, 0.5));
        assert!((joint_intensity(&p, &[z1]).unwrap() - fm.diag(z1)).abs() < 1e-12);
        let k12 = fm.kernel(z1, z2);
        let want = fm.diag(z1) * fm.diag(z2) - k12.norm_sqr();
        assert!((joint_intensity(&p, &[z1, z2]).unwrap() - want).abs() < 1e-10 * want);
        let dup = joint_intensity(&p, &[z1, z2, z1]).unwrap();
        assert!(dup.abs() <= 1e-10 * fm.diag(z1).powi(2) * fm.diag(z2));
        assert_eq!(
            joint_intensity(&p, &[z1, z2, c(0.7, 0.1)]).unwrap(),
            joint_intensity(&p, &[c(0.7, 0.1), z1, z2]).unwrap()
        );
    }

    #[test]
    fn classical_vandermonde() {
        let v = vandermonde_poly(&[c(0.0, 0.0), c(1.0, 0.0), c(2.0, 0.0)], 3, 1).unwrap();
        assert!((v.to_complex() - c(2.0, 0.0)).norm() < 1e-13);
        let rep = vandermonde_poly(&[c(0.5, 0.1), c(0.5, 0.1), c(2.0, 0.0), c(1.0, 1.0)], 2, 2).unwrap();
        assert!(rep.is_zero() || rep.log_magnitude < -30.0);
        assert!(vandermonde_poly(&[c(1.0, 0.0)], 2, 1).is_err());
    }

    #[test]
    fn det_ratio_rotation_invariant() {
        let p = params(1.0, 2, 1);
        let pts = [c(0.3, 0.4), c(-0.8, 0.1)];
        let rot = Complex64::from_polar(1.0, 0.7);
        let a = det_identity_ratio(&p, &pts).unwrap();
        let b = det_identity_ratio(&p, &[pts[0] * rot, pts[1] * rot]).unwrap();
        assert!((a - b).abs() < 1e-12);
        assert!(det_identity_ratio(&p, &[pts[0], pts[0]]).is_err());
    }

    #[test]
    fn region_expected_counts() {
        let p = params(30.0, 30, 2);
        let fm = FeatureMap::<f64>::new(&p).unwrap();
        let all = Region::Annulus { inner: 0.0, outer: 3.0 }.expected_count(&fm);
        assert!((all - 60.0).abs() < 1e-8, "{all}");
        let bulk = Region::Annulus { inner: 0.2, outer: 0.4 }.expected_count(&fm);
        let area = 0.4f64.powi(2) - 0.2f64.powi(2);
        assert!((bulk / (30.0 * 2.0 * area) - 1.0).abs() < 0.02);
        let square = Region::Rect { re: (-0.1, 0.1), im: (-0.1, 0.1) }.expected_count(&fm);
        assert!((square / (60.0 * 0.04 / std::f64::consts::PI) - 1.0).abs() < 0.02);
    }

    #[test]
    fn bad_edges_rejected() {
        let s = Sampler::new(&params(2.0, 2, 1)).unwrap();
        let cs = s.sample_many(&(0..50).collect::<Vec<_>>()).unwrap();
        assert!(empirical_intensity(&cs, &[0.0, 1.0, 0.5]).is_err());
        assert!(empirical_intensity(&cs[..10], &[0.0, 1.0]).is_err());
    }
}
