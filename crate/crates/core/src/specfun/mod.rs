//! Special functions consumed by the kernel, Berezin and sampling code.

mod bessel;
mod gamma;
mod hermite;
mod laguerre;
mod moments;
mod normal;

pub use bessel::bessel_j1_ratio;
pub use gamma::{exp_partial_scaled, poisson_pmf_at};
pub use hermite::{
    christoffel_darboux_ratio, christoffel_darboux_sum, hermite_coefficients, hermite_prob,
    hermite_prob_real,
};
pub use laguerre::{
    laguerre, laguerre_coefficients, laguerre_estimate_check, laguerre_root_bound, laguerre_sequence,
    LaguerreEstimateReport, LaguerreViolation,
};
pub use moments::{gauss_halfline_moment, GaussMomentTable, HermitePairIntegrals};
pub use normal::{erfcx, faddeeva, normal_cdf, normal_cdf_real};

/// Largest polynomial degree accepted by the checked entry points.
pub const MAX_DEGREE: usize = 512;

pub(crate) fn check_degree(degree: usize) -> crate::Result<()> {
    if degree > MAX_DEGREE {
        return Err(crate::Error::Capacity {
            degree,
            max: MAX_DEGREE,
        });
    }
    Ok(())
}

/// `ln k!` for small `k`, exact up to rounding of the logarithms.
pub(crate) fn ln_factorial(k: usize) -> f64 {
    libm::lgamma(k as f64 + 1.0)
}
