use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{EnsembleParams, FeatureMap};
use crate::quadrature::PolarQuadrature;
use crate::Result;

/// Numerical inner products `<phi_a, phi_b>` in slot order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GramMatrix {
    pub dim: usize,
    /// Row-major entries.
    pub entries: Vec<Complex64>,
    /// Set when the quadrature is smaller than the minimum for the parameters.
    pub accuracy_warning: bool,
}

impl GramMatrix {
    pub fn get(&self, a: usize, b: usize) -> Complex64 {
        self.entries[a * self.dim + b]
    }

    /// Largest entrywise deviation from the identity.
    pub fn identity_error(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for a in 0..self.dim {
            for b in 0..self.dim {
                let id = if a == b { 1.0 } else { 0.0 };
                worst = worst.max((self.get(a, b) - id).norm());
            }
        }
        worst
    }
}

pub fn gram_matrix(params: &EnsembleParams, quad: &PolarQuadrature) -> Result<GramMatrix> {
    let fm = FeatureMap::<f64>::new(params)?;
    let d = fm.dim();
    let mut entries = vec![Complex64::new(0.0, 0.0); d * d];
    let mut phi = vec![Complex64::new(0.0, 0.0); d];
    for (z, w) in quad.nodes() {
        fm.eval(z, &mut phi);
        for a in 0..d {
            let pa = phi[a] * w;
            for b in a..d {
                entries[a * d + b] += pa * phi[b].conj();
            }
        }
    }
    for a in 0..d {
        for b in 0..a {
            entries[a * d + b] = entries[b * d + a].conj();
        }
    }
    Ok(GramMatrix {
        dim: d,
        entries,
        accuracy_warning: !quad.covers(params),
    })
}
