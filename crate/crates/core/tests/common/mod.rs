//! Reference integrals for the unit Gaussian built in homogeneous
//! coordinates `η = ξζ`, sharing no code with the polar integrator.
//!
//! With `ζ = t + tan φ` the multiplier `ξ/(ξ² + (η − tξ)²)` turns into
//! `sgn ξ · dφ/dζ`, so
//!
//! ```text
//! φ_z = i/(2π)³ ∫ dφ ∫ sgn(ξ) e^{i(ξ(z + ζy) + ψ_t(ζ)/ξ)} ω̂₀(ξ, ξζ) dξ
//! ```
//!
//! and `φ_y` carries an extra factor ζ. The `e^{iψ/ξ}` singularity at
//! `ξ = 0` is removed by moving the `u = 1/ξ` contour off the real axis,
//! where it decays exponentially.
#![allow(dead_code)]

use num_complex::Complex64;
use std::f64::consts::PI;

/// Gauss–Legendre nodes and weights on `[−1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                let dp = {
                    let (mut q0, mut q1) = (1.0, z);
                    for k in 2..=n {
                        let q2 = ((2 * k - 1) as f64 * z * q1 - (k - 1) as f64 * q0) / k as f64;
                        q0 = q1;
                        q1 = q2;
                    }
                    n as f64 * (z * q1 - q0) / (z * z - 1.0)
                };
                x[i] = z;
                w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
                break;
            }
        }
    }
    (x, w)
}

pub struct Rule {
    x: Vec<f64>,
    w: Vec<f64>,
}

impl Rule {
    pub fn new(n: usize) -> Self {
        let (x, w) = gauss_legendre(n);
        Rule { x, w }
    }

    /// Composite rule with `panels` equal panels on `[a, b]`.
    pub fn apply(&self, a: f64, b: f64, panels: usize, mut f: impl FnMut(f64) -> Complex64) -> Complex64 {
        let h = (b - a) / panels as f64;
        let mut s = Complex64::new(0.0, 0.0);
        for p in 0..panels {
            let c = a + (p as f64 + 0.5) * h;
            for (x, w) in self.x.iter().zip(&self.w) {
                s += f(c + 0.5 * h * x) * (w * 0.5 * h);
            }
        }
        s
    }
}

/// `ψ_t(ζ) = arctan(t − ζ) + arctan(ζ)` in `(0, π)`.
fn psi(t: f64, zeta: f64) -> f64 {
    t.atan2(1.0 + zeta * zeta - t * zeta)
}

/// `∫_{−∞}^{∞} w(x) e^{i(kx + B/x)} e^{−x²/2} dx` for `w(x) = sgn x` or `|x|`.
fn inner(rule: &Rule, k: f64, b: f64, abs_weight: bool) -> Complex64 {
    let x_max = 9.0;
    let i = Complex64::new(0.0, 1.0);
    let mut total = Complex64::new(0.0, 0.0);
    for sigma in [1.0f64, -1.0] {
        let weight = |y: Complex64| if abs_weight { y } else { Complex64::new(sigma, 0.0) };
        // y = |x| ∈ [1, x_max] on the real axis.
        let panels = 40 + (2.0 * b.abs()) as usize;
        total += rule.apply(1.0, x_max, panels, |y| {
            let yc = Complex64::new(y, 0.0);
            (i * sigma * (k * y + b / y)).exp() * (-0.5 * y * y).exp() * weight(yc)
        });
        // y ∈ (0, 1]: u = 1/y on [1, ∞), moved to u = 1 + iσs.
        let scale = 1.0 / b.abs().max(0.05);
        let contour = rule.apply(0.0, 1.0, 60, |tau| {
            let s = scale * tau / (1.0 - tau);
            let ds = scale / ((1.0 - tau) * (1.0 - tau));
            let u = Complex64::new(1.0, sigma * s);
            let y = 1.0 / u;
            (i * sigma * (k * y + b * u)).exp() * (-0.5 * y * y).exp() * weight(y) / (u * u) * ds
        });
        total += contour * (i * sigma);
    }
    total
}

/// `(φ_z, φ_y)` at `z + iy` for the unit Gaussian.
pub fn gradients(t: f64, z: f64, y: f64, panels: usize) -> (Complex64, Complex64) {
    let rule = Rule::new(10);
    let mut fz = Complex64::new(0.0, 0.0);
    let mut fy = Complex64::new(0.0, 0.0);
    let h = PI / panels as f64;
    for p in 0..panels {
        let c = -0.5 * PI + (p as f64 + 0.5) * h;
        for (x, w) in rule.x.iter().zip(&rule.w) {
            let phi = c + 0.5 * h * x;
            let zeta = t + phi.tan();
            let l = 1.0 / (1.0 + zeta * zeta).sqrt();
            let j = inner(&rule, l * (z + zeta * y), psi(t, zeta) / l, false) * l;
            fz += j * (w * 0.5 * h);
            fy += j * (zeta * w * 0.5 * h);
        }
    }
    let c = Complex64::new(0.0, 1.0 / (8.0 * PI.powi(3)));
    (fz * c, fy * c)
}

/// Vorticity profile `f(t, z, y)` for the unit Gaussian.
pub fn vorticity(t: f64, z: f64, y: f64, panels: usize) -> Complex64 {
    let rule = Rule::new(10);
    let mut f = Complex64::new(0.0, 0.0);
    let h = PI / panels as f64;
    for p in 0..panels {
        let c = -0.5 * PI + (p as f64 + 0.5) * h;
        for (x, w) in rule.x.iter().zip(&rule.w) {
            let phi = c + 0.5 * h * x;
            let zeta = t + phi.tan();
            let l = 1.0 / (1.0 + zeta * zeta).sqrt();
            let jac = 1.0 + (zeta - t) * (zeta - t);
            let k = inner(&rule, l * (z + zeta * y), psi(t, zeta) / l, true) * (l * l);
            f += k * (jac * w * 0.5 * h);
        }
    }
    f / (4.0 * PI * PI)
}

/// Midpoint Riemann sum of the Cartesian gradient integrals on `[−L, L]²`.
pub fn riemann_gradients(t: f64, z: f64, y: f64, n: usize, l: f64) -> (Complex64, Complex64) {
    let h = 2.0 * l / n as f64;
    let mut sz = Complex64::new(0.0, 0.0);
    let mut sy = Complex64::new(0.0, 0.0);
    for a in 0..n {
        let xi = -l + (a as f64 + 0.5) * h;
        for b in 0..n {
            let eta = -l + (b as f64 + 0.5) * h;
            let g = (-0.5 * (xi * xi + eta * eta)).exp();
            if g < 1e-300 {
                continue;
            }
            let zeta = eta / xi;
            let phase = ((t - zeta).atan() + zeta.atan()) / xi;
            let d = xi * xi + (eta - t * xi).powi(2);
            let e = Complex64::from_polar(g / d, xi * z + eta * y + phase);
            sz += e * xi;
            sy += e * eta;
        }
    }
    let c = Complex64::new(0.0, h * h / (8.0 * PI.powi(3)));
    (sz * c, sy * c)
}
