//! Polyanalytic Ginibre ensemble numerics.
//!
//! The process has `nq` points in the plane and correlation kernel
//! `Ж(z,w) = sum_a phi_a(z) conj(phi_a(w))` over an orthonormal basis of
//! polyanalytic polynomials `sum_{r<q} zbar^r p_r(z)`, `deg p_r < n`, in
//! `L^2(exp(-m|z|^2) dA)` with `dA = dx dy / pi`.
//!
//! Modules:
//! - [`specfun`]: Laguerre, Hermite, normal CDF, incomplete gamma, Bessel ratio.
//! - [`kernel`]: basis functions and correlation kernels.
//! - [`berezin`]: Berezin densities, blow-ups and their limiting profiles.
//! - [`asymptotics`]: measured residuals of the limit laws.
//! - [`dpp`]: exact sampling and determinant identities.
//! - [`transforms`]: `T_r`, Bargmann and poly-Bargmann realizations.
//! - [`verify`]: the verification suites behind the command-line tool.

pub mod asymptotics;
pub mod berezin;
pub mod dpp;
pub mod error;
pub mod kernel;
pub mod linalg;
pub mod quadrature;
pub mod scalar;
pub mod scaled;
pub mod specfun;
pub mod sum;
pub mod transforms;
pub mod verify;

pub use error::{Error, Result};
pub use kernel::{BasisIndex, EnsembleParams, FeatureMap};
pub use scalar::Real;
pub use scaled::ScaledComplex;

/// Double-precision feature map.
pub type FeatureMap64 = FeatureMap<f64>;
/// Single-precision feature map.
pub type FeatureMap32 = FeatureMap<f32>;
/// Double-precision log-scaled complex number.
pub type ScaledComplex64 = ScaledComplex<f64>;
