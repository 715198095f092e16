//! Verification suites: each law is measured on a parameter grid and reported
//! against its tolerance. The command-line `verify` subcommand prints these.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::asymptotics::{
    boundary_kernel_gap, exterior_mass_outside, exterior_moment, fit_rate, harmonic_moment,
    kernel_gap_sup, partial_exp_normal_gap, szego_residual, VerificationReport,
};
use crate::berezin::{
    bessel_profile, blowup_mass, interior_profile_rescaled, profile_l1_gap, profile_sup_gap,
    BlowupFrame,
};
use crate::dpp::{det_identity_ratio, empirical_intensity_regions, joint_intensity, Region, Sampler};
use crate::kernel::{corr_kernel_poly, corr_subkernel_pure, gram_matrix, EnsembleParams, FeatureMap};
use crate::quadrature::PolarQuadrature;
use crate::specfun::{
    bessel_j1_ratio, christoffel_darboux_ratio, christoffel_darboux_sum, exp_partial_scaled,
    gauss_halfline_moment, laguerre, laguerre_estimate_check, laguerre_root_bound, normal_cdf,
    normal_cdf_real,
};
use crate::transforms::{
    poly_bargmann_kernel, pure_level_projection_check, t_op_apply, BasisTag, CoefficientVector,
    PolyanalyticPoly,
};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Specfun,
    Kernels,
    Bulk,
    Boundary,
    Exterior,
    Dpp,
    Transforms,
    All,
}

impl Suite {
    /// Concrete suites in report order.
    pub const MODULES: [Suite; 7] = [
        Suite::Specfun,
        Suite::Kernels,
        Suite::Bulk,
        Suite::Boundary,
        Suite::Exterior,
        Suite::Dpp,
        Suite::Transforms,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Specfun => "specfun",
            Suite::Kernels => "kernels",
            Suite::Bulk => "bulk",
            Suite::Boundary => "boundary",
            Suite::Exterior => "exterior",
            Suite::Dpp => "dpp",
            Suite::Transforms => "transforms",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::MODULES
            .iter()
            .chain(std::iter::once(&Suite::All))
            .find(|v| v.name() == s)
            .copied()
            .ok_or_else(|| Error::Domain(format!("unknown suite '{s}'")))
    }
}

/// `fast` caps the ensemble size at `m <= 200` and shrinks sample counts.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct VerifyOptions {
    pub fast: bool,
}

/// Runs one suite (or all of them, in fixed order).
pub fn run_suite(suite: Suite, opts: VerifyOptions) -> Result<Vec<VerificationReport>> {
    match suite {
        Suite::Specfun => specfun_suite(opts),
        Suite::Kernels => kernels_suite(opts),
        Suite::Bulk => bulk_suite(opts),
        Suite::Boundary => boundary_suite(opts),
        Suite::Exterior => exterior_suite(opts),
        Suite::Dpp => dpp_suite(opts),
        Suite::Transforms => transforms_suite(opts),
        Suite::All => {
            let mut out = Vec::new();
            for s in Suite::MODULES {
                out.extend(run_suite(s, opts)?);
            }
            Ok(out)
        }
    }
}

fn params(m: f64, n: usize, q: usize) -> Result<EnsembleParams> {
    EnsembleParams::new(m, n, q)
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Term-by-term Pochhammer sum for `L^alpha_k(x)`, with the sum of moduli.
fn laguerre_definition_sum(k: usize, alpha: f64, x: f64) -> (f64, f64) {
    let mut value = 0.0;
    let mut scale = 0.0;
    for i in 0..=k {
        let mut t = 1.0;
        for j in 0..(k - i) {
            t *= (alpha + (i + 1 + j) as f64) / (j + 1) as f64;
        }
        for j in 1..=i {
            t *= x / j as f64;
        }
        value += if i % 2 == 0 { t } else { -t };
        scale += t;
    }
    (value, scale)
}

fn specfun_suite(_opts: VerifyOptions) -> Result<Vec<VerificationReport>> {
    let mut out = Vec::new();

    let mut worst: f64 = 0.0;
    for k in 0..=12 {
        for alpha in [0.0, 0.5, 1.0, 3.0, 7.25, 15.0] {
            for s in 0..100 {
                let x = 50.0 * s as f64 / 99.0;
                let (def, scale) = laguerre_definition_sum(k, alpha, x);
                worst = worst.max((def - laguerre(k, alpha, x)?).abs() / scale.max(1.0));
            }
        }
    }
    out.push(VerificationReport::new(
        "laguerre_recurrence_vs_definition",
        "k<=12, alpha in {0,0.5,1,3,7.25,15}, 100 x in [0,50]",
        worst,
        1e-10,
    ));

    let est = laguerre_estimate_check(12, 15.0, 10, 100, 1)?;
    out.push(VerificationReport::new(
        "laguerre_elementary_estimates",
        format!("{} randomized (k<=12, alpha<=15, x) triples", est.checked),
        est.violations.len() as f64,
        0.0,
    ));

    // Zeros of L^alpha_k below beta: count sign changes on a fine grid. For k = 1
    // the single zero alpha+1 is exactly beta, so the scan runs slightly past it.
    let mut missing = 0usize;
    for k in 1..=10 {
        for alpha in [0.0, 1.0, 2.5, 6.0] {
            let beta = laguerre_root_bound(k, alpha) * (1.0 + 1e-9);
            let mut changes = 0;
            let mut prev = laguerre(k, alpha, 0.0)?;
            for i in 1..=20_000 {
                let v = laguerre(k, alpha, beta * i as f64 / 20_000.0)?;
                if v.signum() != prev.signum() {
                    changes += 1;
                }
                prev = v;
            }
            missing += k.abs_diff(changes);
        }
    }
    out.push(VerificationReport::new(
        "laguerre_zeros_below_root_bound",
        "k<=10, alpha in {0,1,2.5,6}",
        missing as f64,
        0.0,
    ));

    let mut worst: f64 = 0.0;
    for q in 1..=12 {
        for s in 0..50 {
            let x = 30.0 * s as f64 / 49.0;
            let mut sum = 0.0;
            for r in 0..q {
                sum += laguerre(r, 0.0, x)?;
            }
            let rhs = laguerre(q - 1, 1.0, x)?;
            worst = worst.max((sum - rhs).abs() / rhs.abs().max(1.0));
        }
    }
    out.push(VerificationReport::new(
        "laguerre_level_sum_identity",
        "q<=12, x in [0,30]",
        worst,
        1e-12,
    ));

    let mut bad = 0usize;
    for x in [0.0, 0.5, 3.0, 40.0, 399.5, 1000.0] {
        let mut prev = -1.0;
        for k in 0..600 {
            let v = exp_partial_scaled(k, x);
            if !(0.0..=1.0).contains(&v) || v < prev {
                bad += 1;
            }
            prev = v;
        }
    }
    out.push(VerificationReport::new(
        "exp_partial_monotone_in_k",
        "k<600, x in {0,0.5,3,40,399.5,1000}",
        bad as f64,
        0.0,
    ));

    let ns = [100usize, 400, 1600];
    let gaps: Vec<f64> = ns.iter().map(|&n| partial_exp_normal_gap(n)).collect();
    let ratio = ns
        .iter()
        .zip(&gaps)
        .map(|(&n, g)| g * (n as f64).sqrt() / 2.0)
        .fold(0.0, f64::max);
    let decreasing = gaps.windows(2).all(|w| w[1] < w[0]);
    out.push(
        VerificationReport::new("partial_exp_normal_gap", "n in {100,400,1600}; sup gap * sqrt(n)/2", ratio, 1.0)
            .with_rate(fit_rate(&ns.map(|n| n as f64), &gaps))
            .and(decreasing),
    );

    let mut worst: f64 = 0.0;
    for i in 0..=40 {
        let x = -10.0 + 0.5 * i as f64;
        worst = worst.max((normal_cdf(c(x, 0.0)).re - normal_cdf_real(x)).abs());
        for y in [-3.0, -0.5, 0.25, 2.0] {
            let a = c(x, y);
            worst = worst.max((normal_cdf(a) + normal_cdf(-a) - 1.0).norm() / normal_cdf(a).norm().max(1.0));
        }
    }
    out.push(VerificationReport::new(
        "normal_cdf_consistency",
        "real axis vs erfc and reflection Phi(a)+Phi(-a)=1 on a complex grid",
        worst,
        1e-13,
    ));

    let mut worst: f64 = 0.0;
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for q in [1usize, 2, 5, 8, 16] {
        for _ in 0..50 {
            let x = rng.random::<f64>() * 8.0 - 4.0;
            let y = rng.random::<f64>() * 8.0 - 4.0;
            let s = christoffel_darboux_sum(q, x, y);
            let r = christoffel_darboux_ratio(q, x, y);
            worst = worst.max((s - r).abs() / s.abs().max(1.0));
        }
    }
    out.push(VerificationReport::new(
        "christoffel_darboux_sum_vs_ratio",
        "q in {1,2,5,8,16}, 50 random (x,y) in [-4,4]^2",
        worst,
        1e-10,
    ));

    let series1: f64 = (0..30)
        .map(|i| {
            let s = if i % 2 == 0 { 1.0 } else { -1.0 };
            s / (libm::tgamma(i as f64 + 1.0) * libm::tgamma(i as f64 + 2.0))
        })
        .sum();
    let err = (bessel_j1_ratio(1.0f64) - series1)
        .abs()
        .max(bessel_j1_ratio(1.915_852_985_103_756_2f64).abs())
        .max((bessel_j1_ratio(0.0f64) - 1.0).abs());
    out.push(VerificationReport::new(
        "bessel_ratio_values",
        "s=0, s=1 series, first zero",
        err,
        1e-12,
    ));

    let mut worst: f64 = 0.0;
    for a in [c(0.0, 0.0), c(-1.5, 0.5), c(2.0, -1.0), c(0.3, 2.5)] {
        worst = worst.max(gauss_halfline_moment(40, a)?.recurrence_residual());
    }
    out.push(VerificationReport::new(
        "gauss_halfline_moment_recurrence",
        "k<=40, four complex endpoints",
        worst,
        1e-12,
    ));

    let mut worst: f64 = 0.0;
    for zeta in [c(0.5, 0.0), c(1.5, 0.0), c(0.3, 0.2), c(2.0, 0.5)] {
        worst = worst.max(szego_residual(2000, 2000, zeta)?.norm());
    }
    out.push(VerificationReport::new(
        "szego_partial_sums",
        "k=l=2000, zeta in {0.5, 1.5, 0.3+0.2i, 2+0.5i}",
        worst,
        0.05,
    ));

    Ok(out)
}

fn kernels_suite(_opts: VerifyOptions) -> Result<Vec<VerificationReport>> {
    let mut out = Vec::new();
    let mut worst: f64 = 0.0;
    let mut halving = true;
    for q in 1..=3 {
        let g100 = kernel_gap_sup(&params(100.0, 100, q)?, 0.7, 21)?;
        let g200 = kernel_gap_sup(&params(200.0, 200, q)?, 0.7, 21)?;
        worst = worst.max(g100);
        halving &= g200 <= 0.5 * g100;
    }
    out.push(
        VerificationReport::new(
            "kernel_closed_form",
            "sup over 21x21 lattice |z|,|w|<=0.7, m=n=100, q<=3; gap halves at m=n=200",
            worst,
            1e-4,
        )
        .and(halving),
    );

    let p = params(4.0, 6, 3)?;
    let gram = gram_matrix(&p, &PolarQuadrature::for_params(&p))?;
    out.push(VerificationReport::new(
        "gram_identity",
        "m=4, n=6, q=3",
        gram.identity_error(),
        1e-6,
    ));

    let p = params(10.0, 12, 4)?;
    let fm = FeatureMap::<f64>::new(&p)?;
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst: f64 = 0.0;
    for _ in 0..30 {
        let z = c(rng.random::<f64>() * 2.4 - 1.2, rng.random::<f64>() * 2.4 - 1.2);
        let w = c(rng.random::<f64>() * 2.4 - 1.2, rng.random::<f64>() * 2.4 - 1.2);
        let k = fm.kernel(z, w);
        let levels: Complex64 = (0..p.q).map(|r| fm.kernel_level(r, z, w)).sum::<Result<Complex64>>()?;
        worst = worst
            .max((k - fm.kernel(w, z).conj()).norm())
            .max((k - levels).norm())
            .max((fm.kernel(z, z).re - fm.diag(z)).abs());
    }
    out.push(VerificationReport::new(
        "kernel_hermitian_and_level_sum",
        "m=10, n=12, q=4, 30 random pairs",
        worst,
        1e-12,
    ));
    Ok(out)
}

fn bulk_suite(opts: VerifyOptions) -> Result<Vec<VerificationReport>> {
    let mut out = Vec::new();
    let m = if opts.fast { 200usize } else { 400 };
    let centers = [c(0.0, 0.0), c(0.4, 0.0), c(0.0, 0.6)];
    let mut worst: f64 = 0.0;
    let mut spread_ok = true;
    for q in 1..=3 {
        let p = params(m as f64, m, q)?;
        let gaps: Vec<f64> = centers
            .iter()
            .map(|&z0| profile_l1_gap(&p, &BlowupFrame::new(z0), 4.0))
            .collect::<Result<_>>()?;
        let mx = gaps.iter().cloned().fold(0.0, f64::max);
        let mn = gaps.iter().cloned().fold(f64::INFINITY, f64::min);
        // Center independence within 2x only means something above roundoff.
        spread_ok &= mx <= 2.0 * mn || mx < 1e-10;
        worst = worst.max(mx);
    }
    out.push(
        VerificationReport::new(
            "bulk_profile_l1",
            format!("|xi|<=4, m=n={m}, q<=3, centers 0, 0.4, 0.6i"),
            worst,
            0.05,
        )
        .and(spread_ok),
    );

    let mut worst: f64 = 0.0;
    for z0 in centers {
        let mass = blowup_mass(&params(m as f64, m, 2)?, &BlowupFrame::new(z0), 8.0)?;
        worst = worst.max(if mass < 0.99 { 0.99 - mass } else { (mass - 1.001).max(0.0) });
    }
    out.push(VerificationReport::new(
        "blowup_mass",
        format!("|xi|<=8, m=n={m}, q=2; distance from [0.99, 1.001]"),
        worst,
        0.0,
    ));

    let mut worst: f64 = 0.0;
    for i in 0..=600 {
        let s = 3.0 * i as f64 / 600.0;
        let xi = c(s, 0.0);
        worst = worst.max((interior_profile_rescaled(64, xi) - bessel_profile(xi)).abs());
    }
    out.push(VerificationReport::new(
        "bessel_limit",
        "q=64, |xi'|<=3",
        worst,
        0.02,
    ));
    Ok(out)
}

fn boundary_suite(opts: VerifyOptions) -> Result<Vec<VerificationReport>> {
    let mut out = Vec::new();
    let zero = c(0.0, 0.0);
    let (ms, m_value): (Vec<f64>, f64) = if opts.fast {
        (vec![50.0, 100.0, 200.0], 200.0)
    } else {
        (vec![100.0, 200.0, 400.0, 800.0], 400.0)
    };
    for q in [1usize, 2] {
        let p = params(m_value, m_value as usize, q)?;
        let gap = boundary_kernel_gap(&p, zero, zero)?;
        let gaps: Vec<f64> = ms
            .iter()
            .map(|&m| boundary_kernel_gap(&params(m, m as usize, q)?, zero, zero))
            .collect::<Result<_>>()?;
        let rate = fit_rate(&ms, &gaps);
        out.push(
            VerificationReport::new(
                format!("boundary_kernel_q{q}"),
                format!("xi=eta=0, m=n={m_value}; rate over m in {ms:?}"),
                gap,
                0.1,
            )
            .with_rate(rate)
            .and((0.3..=0.7).contains(&rate)),
        );
    }

    let (m1, m2) = if opts.fast { (50.0, 200.0) } else { (400.0, 1600.0) };
    let frame = BlowupFrame::new(c(1.0, 0.0));
    let mut worst: f64 = 0.0;
    let mut shrink_ok = true;
    for q in 1..=3 {
        let g1 = profile_sup_gap(&params(m1, m1 as usize, q)?, &frame, 2.0, 0.1)?;
        let g2 = profile_sup_gap(&params(m2, m2 as usize, q)?, &frame, 2.0, 0.1)?;
        worst = worst.max(g1);
        shrink_ok &= (0.3..=0.8).contains(&(g2 / g1));
    }
    out.push(
        VerificationReport::new(
            "boundary_profile_sup",
            format!("|xi|<=2, m=n={m1}, q<=3; factor in [0.3,0.8] at m={m2}"),
            worst,
            0.2,
        )
        .and(shrink_ok),
    );
    Ok(out)
}

fn exterior_suite(_opts: VerifyOptions) -> Result<Vec<VerificationReport>> {
    let mut out = Vec::new();
    let z = c(1.3, 0.0);
    let p = params(200.0, 200, 2)?;
    out.push(VerificationReport::new(
        "exterior_mass_outside",
        "z=1.3, rho=1.1, m=n=200, q=2",
        exterior_mass_outside(&p, z, 1.1)?,
        0.05,
    ));
    let mut worst: f64 = 0.0;
    let mut conserved: f64 = 0.0;
    for l in 0..=4 {
        let v = exterior_moment(&p, z, l)?;
        worst = worst.max((v - z.powi(-(l as i32))).norm());
        if l == 0 {
            conserved = (v - 1.0).norm();
        }
    }
    out.push(
        VerificationReport::new("exterior_moments", "z=1.3, l<=4, m=n=200, q=2", worst, 0.05)
            .and(conserved <= 1e-6),
    );
    let mut worst: f64 = 0.0;
    for zz in [c(1.3, 0.0), c(1.5, 0.0), c(0.0, 2.0), c(-1.1, 0.7), c(3.0, -4.0)] {
        for l in 0..=6 {
            worst = worst.max((harmonic_moment(zz, l)? - zz.powi(-(l as i32))).norm());
        }
    }
    out.push(VerificationReport::new(
        "harmonic_moments",
        "five exterior points, l<=6",
        worst,
        1e-10,
    ));
    Ok(out)
}

fn dpp_suite(opts: VerifyOptions) -> Result<Vec<VerificationReport>> {
    let mut out = Vec::new();
    let trials = if opts.fast { 1_000u64 } else { 10_000 };
    let p = params(5.0, 5, 2)?;
    let s = Sampler::new(&p)?;
    let seeds: Vec<u64> = (0..trials).collect();
    let wrong = s.sample_many(&seeds)?.iter().filter(|c| c.len() != p.dim()).count();
    out.push(VerificationReport::new(
        "sampler_cardinality",
        format!("{trials} samples, m=n=5, q=2"),
        wrong as f64,
        0.0,
    ));

    let samples = if opts.fast { 500u64 } else { 2_000 };
    let p = params(2.0, 2, 1)?;
    let cs = Sampler::new(&p)?.sample_many(&(0..samples).collect::<Vec<_>>())?;
    let mut regions = Vec::new();
    for i in 0..3 {
        for j in 0..3 {
            let (a, b) = (-1.5 + i as f64, -1.5 + j as f64);
            regions.push(Region::Rect { re: (a, a + 1.0), im: (b, b + 1.0) });
        }
    }
    let zmax = empirical_intensity_regions(&cs, &regions)?
        .iter()
        .map(|b| b.z_score.abs())
        .fold(0.0, f64::max);
    out.push(VerificationReport::new(
        "sampler_intensity",
        format!("{samples} samples, m=n=2, q=1, 3x3 unit cells on [-1.5,1.5]^2; max |z|"),
        zmax,
        4.0,
    ));

    let p = params(5.0, 4, 2)?;
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let ratios: Vec<f64> = (0..20)
        .map(|_| {
            let pts: Vec<Complex64> = (0..8)
                .map(|_| c(rng.random::<f64>() * 1.6 - 0.8, rng.random::<f64>() * 1.6 - 0.8))
                .collect();
            det_identity_ratio(&p, &pts)
        })
        .collect::<Result<_>>()?;
    let spread = ratios.iter().cloned().fold(f64::MIN, f64::max) - ratios.iter().cloned().fold(f64::MAX, f64::min);
    out.push(VerificationReport::new(
        "det_identity_ratio_spread",
        "20 random 8-point configurations, m=5, n=4, q=2",
        spread,
        1e-6,
    ));

    let fm = FeatureMap::<f64>::new(&p)?;
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let a = c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5);
        let b = c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5);
        let v = joint_intensity(&p, &[a, b, a])?;
        worst = worst.max(v.abs() / (fm.diag(a).powi(2) * fm.diag(b)));
    }
    out.push(VerificationReport::new(
        "joint_intensity_repulsion",
        "20 triples with a duplicated point, relative to the diagonal product",
        worst,
        1e-10,
    ));
    Ok(out)
}

fn transforms_suite(_opts: VerifyOptions) -> Result<Vec<VerificationReport>> {
    let mut out = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(5);

    let mut worst: f64 = 0.0;
    for (m, r) in [(1.0, 0usize), (1.0, 2), (2.0, 1), (3.0, 3)] {
        let coeffs: Vec<Complex64> = (0..=20)
            .map(|_| c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
            .collect();
        let f = CoefficientVector::new(BasisTag::MonomialAnalytic, coeffs)?;
        let img = t_op_apply(r, m, &f)?;
        let quad = PolarQuadrature::for_params(&params(m, 22 + r, r + 1)?);
        let nodes = quad.nodes();
        let norm2: f64 = nodes.par_iter().map(|&(z, w)| w * img.eval_weighted(z).norm_sqr()).sum();
        worst = worst.max((norm2.sqrt() / f.norm() - 1.0).abs());
    }
    out.push(VerificationReport::new(
        "t_op_isometry",
        "random degree-20 inputs, (m,r) in {(1,0),(1,2),(2,1),(3,3)}",
        worst,
        1e-8,
    ));

    let mut worst: f64 = 0.0;
    for m in [1.0, 2.0] {
        for r in 1..=6 {
            for j in 0..=12 {
                let unit = CoefficientVector::unit(BasisTag::MonomialAnalytic, j + 1, j);
                let lhs = t_op_apply(r - 1, m, &unit)?.to_poly()?.t1(m);
                let rhs = t_op_apply(r, m, &unit)?;
                for z in [c(0.3, -0.2), c(-0.8, 0.5), c(1.1, 0.9)] {
                    let want = rhs.eval(z) * (r as f64).sqrt();
                    worst = worst.max((lhs.eval(z) - want).norm() / want.norm().max(1.0));
                }
            }
        }
    }
    out.push(VerificationReport::new(
        "t_op_semigroup",
        "T1 T_{r-1} = sqrt(r) T_r, r<=6, degree<=12, m in {1,2}",
        worst,
        1e-10,
    ));

    let p = params(2.0, 5, 3)?;
    let pts: Vec<Complex64> = (0..20)
        .map(|_| c(rng.random::<f64>() * 2.0 - 1.0, rng.random::<f64>() * 2.0 - 1.0))
        .collect();
    let mut worst: f64 = 0.0;
    for r in 0..p.q {
        worst = worst.max(pure_level_projection_check(&p, r, &pts)?);
    }
    for &z in &pts[..6] {
        for &w in &pts[..6] {
            let levels: Complex64 = (0..p.q).map(|r| corr_subkernel_pure(&p, r, z, w)).sum::<Result<Complex64>>()?;
            worst = worst.max((levels - corr_kernel_poly(&p, z, w)?).norm());
        }
    }
    out.push(VerificationReport::new(
        "pure_level_reconstruction",
        "m=2, n=5, q=3, 20 random points",
        worst,
        1e-9,
    ));

    let mut worst: f64 = 0.0;
    let quad = PolarQuadrature::for_params(&params(1.5, 10, 4)?);
    let nodes = quad.nodes();
    let image = |r: usize, j: usize| -> Result<Vec<Complex64>> {
        let img = t_op_apply(r, 1.5, &CoefficientVector::unit(BasisTag::MonomialAnalytic, j + 1, j))?;
        Ok(nodes.iter().map(|(z, _)| img.eval_weighted(*z)).collect())
    };
    for (r1, r2) in [(0usize, 1usize), (0, 3), (1, 2), (2, 3)] {
        for (j1, j2) in [(0usize, 0usize), (3, 2), (5, 5), (1, 4)] {
            let a = image(r1, j1)?;
            let b = image(r2, j2)?;
            let ip: Complex64 = nodes.iter().zip(a.iter().zip(&b)).map(|((_, w), (x, y))| x * y.conj() * *w).sum();
            worst = worst.max(ip.norm());
        }
    }
    out.push(VerificationReport::new(
        "level_orthogonality",
        "quadrature inner products across levels, m=1.5",
        worst,
        1e-8,
    ));

    let mut worst: f64 = 0.0;
    for _ in 0..10 {
        let xi = c(rng.random::<f64>() * 4.0 - 2.0, rng.random::<f64>() * 4.0 - 2.0);
        let eta = c(rng.random::<f64>() * 4.0 - 2.0, rng.random::<f64>() * 4.0 - 2.0);
        for r in [0usize, 1, 4, 10] {
            let a = poly_bargmann_kernel(r, xi, eta)?;
            let b = poly_bargmann_kernel(r, eta, xi)?;
            worst = worst.max((a - b.conj()).norm() / a.norm().max(1.0));
        }
    }
    out.push(VerificationReport::new(
        "poly_bargmann_kernel_symmetry",
        "10 random (xi, eta) in [-2,2]^2, r in {0,1,4,10}",
        worst,
        1e-10,
    ));

    let mut worst: f64 = 0.0;
    for j in 0..=10 {
        let p = PolyanalyticPoly::analytic_basis(j, 1.0);
        for z in [c(0.5, 0.5), c(-1.0, 0.2)] {
            let want = z.powi(j as i32) / libm::tgamma(j as f64 + 1.0).sqrt();
            worst = worst.max((p.eval(z) - want).norm());
        }
    }
    out.push(VerificationReport::new(
        "analytic_basis_monomials",
        "e_j = z^j/sqrt(j!), j<=10",
        worst,
        1e-12,
    ));
    Ok(out)
}
