//! Initial vorticity in Fourier variables.
//!
//! Polar data follow `ξ = r sin θ`, `η = r cos θ`, so that θ is measured
//! from the η axis.

use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;

pub trait InitialData: Send + Sync {
    fn omega_hat(&self, xi: f64, eta: f64) -> Complex64;

    /// `(∂ξ ω̂₀, ∂η ω̂₀)`.
    fn grad(&self, xi: f64, eta: f64) -> [Complex64; 2];

    /// Radius beyond which `|ω̂₀|` and `|∇ω̂₀|` stay below `eps`.
    fn tail_radius(&self, eps: f64) -> f64;

    fn name(&self) -> String;

    fn v(&self, r: f64, theta: f64) -> Complex64 {
        let (s, c) = theta.sin_cos();
        self.omega_hat(r * s, r * c)
    }

    /// `∂_r v = sin θ ∂ξ ω̂₀ + cos θ ∂η ω̂₀`.
    fn v_r(&self, r: f64, theta: f64) -> Complex64 {
        let (s, c) = theta.sin_cos();
        let g = self.grad(r * s, r * c);
        g[0] * s + g[1] * c
    }
}

/// `ω̂₀ = e^{−(ξ²+η²)/2}`.
#[derive(Clone, Copy, Debug, Default)]
pub struct Gaussian;

impl InitialData for Gaussian {
    fn omega_hat(&self, xi: f64, eta: f64) -> Complex64 {
        Complex64::new((-0.5 * (xi * xi + eta * eta)).exp(), 0.0)
    }
    fn grad(&self, xi: f64, eta: f64) -> [Complex64; 2] {
        let g = (-0.5 * (xi * xi + eta * eta)).exp();
        [Complex64::new(-xi * g, 0.0), Complex64::new(-eta * g, 0.0)]
    }
    fn tail_radius(&self, eps: f64) -> f64 {
        // r e^{−r²/2} ≤ eps once r² ≥ 2 ln(1/eps) + ln(r²), iterate twice.
        let l = (1.0 / eps.min(0.5)).ln();
        let mut r2 = 2.0 * l;
        for _ in 0..2 {
            r2 = 2.0 * l + r2.ln().max(0.0);
        }
        r2.sqrt()
    }
    fn name(&self) -> String {
        "gaussian".into()
    }
}

/// Smooth bump `exp(1 − 1/(1 − |k − k₀|²/a²))` of radius `a` about `k₀`.
#[derive(Clone, Copy, Debug)]
pub struct Bump {
    pub centre: (f64, f64),
    pub radius: f64,
}

impl Default for Bump {
    fn default() -> Self {
        Bump {
            centre: (0.5, 0.5),
            radius: 1.0,
        }
    }
}

impl InitialData for Bump {
    fn omega_hat(&self, xi: f64, eta: f64) -> Complex64 {
        let a2 = self.radius * self.radius;
        let x2 = ((xi - self.centre.0).powi(2) + (eta - self.centre.1).powi(2)) / a2;
        if x2 >= 1.0 {
            return Complex64::new(0.0, 0.0);
        }
        Complex64::new((1.0 - 1.0 / (1.0 - x2)).exp(), 0.0)
    }
    fn grad(&self, xi: f64, eta: f64) -> [Complex64; 2] {
        let a2 = self.radius * self.radius;
        let (dx, dy) = (xi - self.centre.0, eta - self.centre.1);
        let x2 = (dx * dx + dy * dy) / a2;
        if x2 >= 1.0 {
            return [Complex64::new(0.0, 0.0); 2];
        }
        let f = (1.0 - 1.0 / (1.0 - x2)).exp();
        let df = -f / ((1.0 - x2) * (1.0 - x2)) * 2.0 / a2;
        [Complex64::new(df * dx, 0.0), Complex64::new(df * dy, 0.0)]
    }
    fn tail_radius(&self, _eps: f64) -> f64 {
        self.centre.0.hypot(self.centre.1) + self.radius
    }
    fn name(&self) -> String {
        "bump".into()
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct Zero;

impl InitialData for Zero {
    fn omega_hat(&self, _: f64, _: f64) -> Complex64 {
        Complex64::new(0.0, 0.0)
    }
    fn grad(&self, _: f64, _: f64) -> [Complex64; 2] {
        [Complex64::new(0.0, 0.0); 2]
    }
    fn tail_radius(&self, _: f64) -> f64 {
        0.0
    }
    fn name(&self) -> String {
        "zero".into()
    }
}

fn psi(u: f64) -> f64 {
    if u > 0.0 {
        (-1.0 / u).exp()
    } else {
        0.0
    }
}

fn dpsi(u: f64) -> f64 {
    if u > 0.0 {
        psi(u) / (u * u)
    } else {
        0.0
    }
}

/// Smooth step: 0 for `u ≤ 0`, 1 for `u ≥ 1`. Returns the value and slope.
pub fn smooth_step(u: f64) -> (f64, f64) {
    let (p, q) = (psi(u), psi(1.0 - u));
    let s = p + q;
    let ds = dpsi(u) * q + p * dpsi(1.0 - u);
    (p / s, ds / (s * s))
}

/// Gaussian restricted smoothly to `|ξ| ≥ 1 + √(η² + ε²)`, inside the
/// wedge `|ξ| ≥ 1 + |η|`.
#[derive(Clone, Copy, Debug)]
pub struct TruncatedGaussian {
    pub eps: f64,
}

impl Default for TruncatedGaussian {
    fn default() -> Self {
        TruncatedGaussian { eps: 0.1 }
    }
}

impl TruncatedGaussian {
    fn cut(&self, xi: f64, eta: f64) -> (f64, f64, f64) {
        let q = (eta * eta + self.eps * self.eps).sqrt();
        let (s, ds) = smooth_step(xi.abs() - 1.0 - q);
        (s, ds * xi.signum(), -ds * eta / q)
    }
}

impl InitialData for TruncatedGaussian {
    fn omega_hat(&self, xi: f64, eta: f64) -> Complex64 {
        let (s, _, _) = self.cut(xi, eta);
        Gaussian.omega_hat(xi, eta) * s
    }
    fn grad(&self, xi: f64, eta: f64) -> [Complex64; 2] {
        let (s, sx, sy) = self.cut(xi, eta);
        let g = Gaussian.omega_hat(xi, eta);
        let dg = Gaussian.grad(xi, eta);
        [dg[0] * s + g * sx, dg[1] * s + g * sy]
    }
    fn tail_radius(&self, eps: f64) -> f64 {
        Gaussian.tail_radius(eps)
    }
    fn name(&self) -> String {
        "truncated-gaussian".into()
    }
}

/// Sampled norms of the data.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DataNorms {
    pub beta: f64,
    /// `‖⟨k⟩^{2β+1} ω̂₀‖∞`.
    pub weighted_value: f64,
    /// `‖⟨k⟩^{2β+2} ∇ω̂₀‖∞`.
    pub weighted_gradient: f64,
    pub sup: f64,
    pub l1: f64,
}

impl DataNorms {
    /// Both weighted norms together, the data factor of the oscillatory bound.
    pub fn combined(&self) -> f64 {
        self.weighted_value + self.weighted_gradient
    }
}

/// Norms sampled on a polar grid out to well past the data's tail.
pub fn data_norms(data: &dyn InitialData, beta: f64) -> DataNorms {
    let reach = data.tail_radius(1e-18).max(1.0) * 1.5;
    let (nr, nt) = (1500, 256);
    let mut out = DataNorms {
        beta,
        weighted_value: 0.0,
        weighted_gradient: 0.0,
        sup: 0.0,
        l1: 0.0,
    };
    let dr = reach / nr as f64;
    let dt = 2.0 * PI / nt as f64;
    for i in 0..nr {
        let r = (i as f64 + 0.5) * dr;
        let w = 1.0 + r * r;
        for j in 0..nt {
            let th = j as f64 * dt;
            let (s, c) = th.sin_cos();
            let (xi, eta) = (r * s, r * c);
            let v = data.omega_hat(xi, eta).norm();
            let g = data.grad(xi, eta);
            let gn = (g[0].norm_sqr() + g[1].norm_sqr()).sqrt();
            out.weighted_value = out.weighted_value.max(w.powf(beta + 0.5) * v);
            out.weighted_gradient = out.weighted_gradient.max(w.powf(beta + 1.0) * gn);
            out.sup = out.sup.max(v);
            out.l1 += v * r * dr * dt;
        }
    }
    out
}
