//! Gauss–Legendre rules and the tensor polar rule used for plane integrals.

use num_complex::Complex64;

use crate::kernel::EnsembleParams;

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Nodes by Newton iteration on `P_n` from Chebyshev-like guesses.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre order must be positive");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            dp = if d != 0.0 { d } else { dp };
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Nodes and weights mapped affinely onto `[a, b]`.
    pub fn mapped(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(x, w)| (mid + half * x, half * w))
    }

    /// Composite rule on `[a, b]` with `panels` equal panels.
    pub fn composite(&self, a: f64, b: f64, panels: usize) -> (Vec<f64>, Vec<f64>) {
        let mut xs = Vec::with_capacity(panels * self.nodes.len());
        let mut ws = Vec::with_capacity(panels * self.nodes.len());
        let h = (b - a) / panels as f64;
        for p in 0..panels {
            let lo = a + h * p as f64;
            for (x, w) in self.mapped(lo, lo + h) {
                xs.push(x);
                ws.push(w);
            }
        }
        (xs, ws)
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Tensor rule on the disk `|z| <= radius`: composite Gauss–Legendre in the
/// radius times a uniform angular grid. Weights integrate against
/// `dA = dx dy / pi`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolarQuadrature {
    pub radius: f64,
    pub radial_panels: usize,
    pub radial_order: usize,
    pub angles: usize,
}

impl PolarQuadrature {
    /// Rule sized so every basis function of `params` is resolved and its
    /// tail beyond `radius` is below roundoff.
    pub fn for_params(params: &EnsembleParams) -> Self {
        let radius = tail_radius(params);
        let panels = ((radius * params.m.sqrt()) / 0.25).ceil().max(4.0) as usize;
        Self {
            radius,
            radial_panels: panels,
            radial_order: 12,
            angles: 2 * (params.n + params.q) + 1,
        }
    }

    /// Whether radius and angular count meet the minimum for `params`.
    pub fn covers(&self, params: &EnsembleParams) -> bool {
        let need = 2.0 * ((params.n + params.q) as f64 / params.m).sqrt();
        self.radius >= need && self.angles > 2 * (params.n + params.q)
    }

    /// Radial nodes `r` and weights for `int_0^R f(r) 2 r dr`.
    pub fn radial(&self) -> (Vec<f64>, Vec<f64>) {
        let gl = GaussLegendre::new(self.radial_order);
        let (rs, ws) = gl.composite(0.0, self.radius, self.radial_panels);
        let ws = rs.iter().zip(ws).map(|(r, w)| 2.0 * r * w).collect();
        (rs, ws)
    }

    /// All nodes with weights for `dA`.
    pub fn nodes(&self) -> Vec<(Complex64, f64)> {
        let (rs, ws) = self.radial();
        let mut out = Vec::with_capacity(rs.len() * self.angles);
        let inv = 1.0 / self.angles as f64;
        for (r, w) in rs.iter().zip(&ws) {
            for k in 0..self.angles {
                let th = 2.0 * std::f64::consts::PI * k as f64 * inv;
                out.push((Complex64::from_polar(*r, th), w * inv));
            }
        }
        out
    }
}

/// Radius beyond which `|phi(z)|^2` for every basis function is below `e^{-40}`
/// relative to its peak: `m r^2 = N + 14 sqrt N + 60` with `N = n + q`.
pub fn tail_radius(params: &EnsembleParams) -> f64 {
    let nn = (params.n + params.q) as f64;
    let r = ((nn + 14.0 * nn.sqrt() + 60.0) / params.m).sqrt();
    r.max(2.0 * (nn / params.m).sqrt())
}
