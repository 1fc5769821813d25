//! The angular phase `h_t`, its generating function `ψ_t`, the Fourier
//! multipliers and the curve `γ_t = −e^{−iθ} h_t`.
//!
//! Polar convention: `ξ + iη = r e^{i(π/2 − θ)}`, so `ξ = r sin θ` and
//! `η = r cos θ`. The mode phase is then `Φ_t(ξ, η) = h_t(θ) / r`.

use crate::error::{invalid, Result};
use crate::quad::{integrate, Tolerance};
use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::{FRAC_PI_2, PI};

/// Shear time, strictly positive and finite.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize)]
pub struct TimeParam(f64);

impl TimeParam {
    pub fn new(t: f64) -> Result<Self> {
        if t.is_finite() && t > 0.0 {
            Ok(TimeParam(t))
        } else {
            invalid(format!("time must be positive and finite, got {t}"))
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for TimeParam {
    type Error = crate::Error;
    fn try_from(t: f64) -> Result<Self> {
        TimeParam::new(t)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PhaseSample {
    pub theta: f64,
    pub h: f64,
    /// dh/dθ
    pub h1: f64,
    /// d²h/dθ²
    pub h2: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GammaSample {
    pub theta: f64,
    /// γ′(θ)
    pub g1: Complex64,
    /// γ″(θ)
    pub g2: Complex64,
    /// Im[conj(γ′) γ″]
    pub curv: f64,
    /// Continuous argument of γ′ with w(0) = π.
    pub w: f64,
    /// dw/dθ
    pub wp: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MultiplierSample {
    pub theta: f64,
    pub mz: f64,
    pub my: f64,
    pub dmz: f64,
    pub dmy: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PhaseGradient {
    pub psi: f64,
    pub dr: f64,
    pub dtheta: f64,
}

/// `ψ_t(ζ) = arctan(t − ζ) + arctan(ζ)` with its first two derivatives.
///
/// The sum of arctangents is evaluated as `atan2(t, 1 + ζ² − tζ)`, which
/// avoids the cancellation between the two terms for large `|ζ|`.
pub fn psi_eval(t: TimeParam, zeta: f64) -> (f64, f64, f64) {
    let t = t.0;
    let psi = if zeta.abs() > 1.0 {
        let q = 1.0 / zeta;
        (t * q * q).atan2(q * q + 1.0 - t * q)
    } else {
        t.atan2(1.0 + zeta * zeta - t * zeta)
    };
    let u = t - zeta;
    let a = 1.0 + zeta * zeta;
    let b = 1.0 + u * u;
    let psi1 = t * (t - 2.0 * zeta) / (a * b);
    let p = zeta * u;
    let psi2 = -2.0 * t * (1.0 + p * (2.0 + t * t) - 3.0 * p * p) / (a * a * b * b);
    (psi, psi1, psi2)
}

/// Number of Taylor coefficients kept for `h_t` about `θ = 0`.
const SERIES_TERMS: usize = 26;

/// Taylor coefficients of `h_t` about zero.
///
/// `h_t(θ) = A(θ)/sin θ` where `A = arg z`, `z(θ) = 1/t + (i/2)(1 − e^{−2iθ})`.
/// The coefficients of `log z` follow from `z · (log z)′ = z′`.
fn taylor_coefficients(t: f64) -> [f64; SERIES_TERMS] {
    let n = SERIES_TERMS + 1;
    let mut z = vec![Complex64::new(0.0, 0.0); n + 1];
    z[0] = Complex64::new(1.0 / t, 0.0);
    let mut pow = Complex64::new(1.0, 0.0);
    let step = Complex64::new(0.0, -2.0);
    let mut fact = 1.0;
    for (k, zk) in z.iter_mut().enumerate().skip(1) {
        pow *= step;
        fact *= k as f64;
        *zk = Complex64::new(0.0, -0.5) * pow / fact;
    }
    let mut l = vec![Complex64::new(0.0, 0.0); n + 1];
    for k in 1..=n {
        let mut acc = z[k] * k as f64;
        for j in 1..k {
            acc -= l[j] * z[k - j] * j as f64;
        }
        l[k] = acc / (z[0] * k as f64);
    }
    // A(θ)/θ has coefficients Im l[k+1]; divide by sin θ / θ.
    let mut sinc = [0.0; SERIES_TERMS];
    // sin θ / θ = Σ (−1)^m θ^{2m}/(2m+1)!
    let mut fact = 1.0;
    for m in 0..SERIES_TERMS {
        if m > 0 {
            fact *= (m + 1) as f64;
        }
        sinc[m] = if m % 2 == 1 {
            0.0
        } else if (m / 2) % 2 == 0 {
            1.0 / fact
        } else {
            -1.0 / fact
        };
    }
    let mut h = [0.0; SERIES_TERMS];
    for k in 0..SERIES_TERMS {
        let mut acc = l[k + 1].im;
        for j in 1..=k {
            acc -= sinc[j] * h[k - j];
        }
        h[k] = acc;
    }
    h
}

fn series_eval(t: f64, x: f64) -> (f64, f64, f64) {
    let c = taylor_coefficients(t);
    let (mut v, mut d1, mut d2) = (0.0, 0.0, 0.0);
    for k in (0..SERIES_TERMS).rev() {
        v = v * x + c[k];
        if k >= 1 {
            d1 = d1 * x + k as f64 * c[k];
        }
        if k >= 2 {
            d2 = d2 * x + (k * (k - 1)) as f64 * c[k];
        }
    }
    (v, d1, d2)
}

/// `h_t`, `h_t′`, `h_t″` on the reduced interval `[−π/2, π/2]`.
fn h_reduced(t: f64, x: f64) -> (f64, f64, f64) {
    let (s, c) = x.sin_cos();
    if x.abs() < (0.01f64).min(0.1 / t) {
        series_eval(t, x)
    } else if s.abs() < 0.05 {
        // h = arg(z)/sin θ with z = 1/t − sin θ cos θ + i sin²θ.
        let z = Complex64::new(1.0 / t - s * c, s * s);
        let e = Complex64::new(0.0, -2.0 * x).exp();
        let q1 = -e / z;
        let q2 = Complex64::new(0.0, 2.0) * e / z;
        let a0 = z.im.atan2(z.re);
        let a1 = q1.im;
        let a2 = (q2 - q1 * q1).im;
        let g0 = 1.0 / s;
        let g1 = -c / (s * s);
        let g2 = (1.0 + c * c) / (s * s * s);
        (a0 * g0, a1 * g0 + a0 * g1, a2 * g0 + 2.0 * a1 * g1 + a0 * g2)
    } else {
        let csc = 1.0 / s;
        let cot = c / s;
        let (p0, p1, p2) = psi_eval(TimeParam(t), cot);
        let csc3 = csc * csc * csc;
        (
            p0 * csc,
            -csc3 * p1 - cot * csc * p0,
            csc3 * csc * csc * p2 + 4.0 * cot * csc3 * p1 + (csc3 + cot * cot * csc) * p0,
        )
    }
}

/// `h_t(θ) = [arctan(t − cot θ) + arctan(cot θ)] / sin θ` and two derivatives,
/// for every real θ (the singularities at θ ∈ πℤ are removable).
pub fn h_eval(t: TimeParam, theta: f64) -> PhaseSample {
    let k = (theta / PI).round();
    let x = theta - k * PI;
    let (h, h1, h2) = h_reduced(t.0, x);
    let sign = if (k as i64).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    PhaseSample {
        theta,
        h: sign * h,
        h1: sign * h1,
        h2: sign * h2,
    }
}

/// Reference evaluation of `h_t` straight from the defining arctangent sum.
/// Loses accuracy near θ ∈ πℤ; used only as an independent cross-check.
pub fn h_definition(t: TimeParam, theta: f64) -> f64 {
    let cot = theta.cos() / theta.sin();
    ((t.0 - cot).atan() + cot.atan()) / theta.sin()
}

/// `h_t` from the principal complex logarithm,
/// `Im log(1/t + (i/2)(1 − e^{−2iθ})) / sin θ`.
pub fn h_complex_log(t: TimeParam, theta: f64) -> f64 {
    let z = Complex64::new(1.0 / t.0, 0.0)
        + Complex64::new(0.0, 0.5) * (1.0 - Complex64::new(0.0, -2.0 * theta).exp());
    z.ln().im / theta.sin()
}

pub fn multipliers(t: TimeParam, theta: f64) -> MultiplierSample {
    let t = t.0;
    let (s, c) = theta.sin_cos();
    let e = c - t * s;
    let d = s * s + e * e;
    let dd = 2.0 * s * c - 2.0 * e * (s + t * c);
    MultiplierSample {
        theta,
        mz: s / d,
        my: c / d,
        dmz: (c * d - s * dd) / (d * d),
        dmy: (-s * d - c * dd) / (d * d),
    }
}

fn gamma_from(theta: f64, p: &PhaseSample) -> (Complex64, Complex64, f64) {
    let rot = Complex64::new(0.0, -theta).exp();
    let g1 = rot * Complex64::new(-p.h1, p.h);
    let g2 = rot * Complex64::new(p.h - p.h2, 2.0 * p.h1);
    let curv = p.h * p.h2 - 2.0 * p.h1 * p.h1 - p.h * p.h;
    (g1, g2, curv)
}

/// Lift of `arg γ′` anchored at `w(0) = π`.
///
/// On `[0, π)` the lift decreases monotonically from π towards −π, so it
/// coincides with the principal argument there; other angles follow from
/// `w(θ + π) = w(θ) − 2π`.
pub fn w_lift(t: TimeParam, theta: f64) -> f64 {
    let k = (theta / PI).floor();
    let mut x = theta - k * PI;
    if x >= PI {
        x -= PI;
    }
    let base = if x <= 0.0 {
        PI
    } else {
        let p = h_eval(t, x);
        let (g1, _, _) = gamma_from(x, &p);
        let a = g1.im.atan2(g1.re);
        if a <= -PI {
            PI
        } else {
            a
        }
    };
    base - 2.0 * PI * k
}

/// `W′ = Im[conj(γ′) γ″] / |γ′|²`.
pub fn wp_eval(t: TimeParam, theta: f64) -> f64 {
    let p = h_eval(t, theta);
    let (g1, _, curv) = gamma_from(theta, &p);
    curv / g1.norm_sqr()
}

pub fn gamma_derivs(t: TimeParam, theta: f64) -> GammaSample {
    let p = h_eval(t, theta);
    let (g1, g2, curv) = gamma_from(theta, &p);
    GammaSample {
        theta,
        g1,
        g2,
        curv,
        w: w_lift(t, theta),
        wp: curv / g1.norm_sqr(),
    }
}

/// Break points that isolate the critical zone near `θ = 1/t` (and its
/// image at `θ = π + 1/t`) inside `[lo, hi]`.
pub fn critical_breaks(t: f64, lo: f64, hi: f64) -> Vec<f64> {
    let mut pts = vec![lo, hi];
    let a = 1.0 / t;
    let w = 1.0 / (t * t);
    let v = t.powf(-1.5);
    for shift in [-PI, 0.0, PI, 2.0 * PI] {
        let c = a + shift;
        for k in [-64.0, -16.0, -4.0, -1.0, 0.0, 1.0, 4.0, 16.0, 64.0] {
            pts.push(c + k * w);
        }
        for k in [0.25, 0.5, 1.0, 2.0, 4.0] {
            pts.push(c + k * v);
        }
        pts.push(shift);
        pts.push(shift + FRAC_PI_2);
    }
    pts.retain(|x| *x >= lo && *x <= hi);
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    pts
}

/// Independent lift of `arg γ′`: `π + ∫₀^θ W′` by adaptive quadrature.
pub fn w_integrated(t: TimeParam, theta: f64) -> f64 {
    if theta == 0.0 {
        return PI;
    }
    let (lo, hi, sign) = if theta > 0.0 { (0.0, theta, 1.0) } else { (theta, 0.0, -1.0) };
    let breaks = critical_breaks(t.0, lo, hi);
    let r = integrate(|x| wp_eval(t, x), &breaks, &Tolerance::new(1e-13, 1e-13));
    PI + sign * r.value
}

/// Full phase `Ψ(r, θ) = ρ r sin(θ + α) + h_t(θ)/r` and its gradient.
pub fn phase_gradient(t: TimeParam, rho: f64, alpha: f64, r: f64, theta: f64) -> PhaseGradient {
    let p = h_eval(t, theta);
    let (s, c) = (theta + alpha).sin_cos();
    PhaseGradient {
        psi: rho * r * s + p.h / r,
        dr: rho * s - p.h / (r * r),
        dtheta: rho * r * c + p.h1 / r,
    }
}
