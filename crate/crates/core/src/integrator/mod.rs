//! Oscillatory integrals for the stream function and vorticity profiles.
//!
//! In polar variables the gradient of the stream-function profile is
//!
//! ```text
//! φ_{z,y} = i/(2π)³ ∫₀^{2π} ∫₀^∞ e^{i(ρ r sin(θ+α) + h_t(θ)/r)} v(r, θ) m^{z,y}_t(θ) dr dθ
//! ```
//!
//! with `z + iy = ρ e^{iα}`. The radial integral is shared by both
//! components. Near `r = 0` the phase `h/r` oscillates without bound, so
//! that piece is integrated in `s = 1/r` with Filon panels and closed off
//! by two integrations by parts; the remaining radial piece and the outer
//! angular integral use adaptive Gauss–Kronrod.

pub mod data;
pub mod decay;
pub mod dyadic;
pub mod mode;

use crate::error::{invalid, Error, Result};
use crate::filon::filon_panel;
use crate::phase::{critical_breaks, h_eval, multipliers, TimeParam};
use crate::quad::{integrate, integrate_with, CVec, QuadValue, Tolerance};
use crate::stationary::invert_w;
use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;

pub use data::{data_norms, Bump, DataNorms, InitialData, Gaussian, TruncatedGaussian, Zero};
pub use decay::{decay_sweep, vdc_bound_predict, DecayFit, DecayPoint};
pub use dyadic::{bump, default_dyadic_range, dyadic_contributions, DyadicReport, DyadicTerm, MISSING_TOL};
pub use mode::{mode_ode_oracle, mode_phase, per_mode_damping};

/// `(2π)⁻³`, the normalisation of the stream-function gradient.
pub const GRADIENT_NORM: f64 = 1.0 / (8.0 * PI * PI * PI);
/// `(2π)⁻²`, the normalisation of the vorticity profile.
pub const PROFILE_NORM: f64 = 1.0 / (4.0 * PI * PI);

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct QuadConfig {
    /// Radial truncation; chosen from the data when `None`.
    pub r_max: Option<f64>,
    pub rel_tol: f64,
    /// Absolute tolerance on the normalised outputs.
    pub abs_tol: f64,
    /// Cap on angular panels.
    pub max_subdivisions: usize,
    /// Initial angular panels per 2π of phase change.
    pub oscillation_resolution: f64,
}

impl Default for QuadConfig {
    fn default() -> Self {
        QuadConfig {
            r_max: None,
            rel_tol: 1e-6,
            abs_tol: 1e-13,
            max_subdivisions: 400_000,
            oscillation_resolution: 1.0,
        }
    }
}

impl QuadConfig {
    fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.rel_tol < 1.0) {
            return invalid(format!("rel_tol must lie in (0, 1), got {}", self.rel_tol));
        }
        if !(self.abs_tol > 0.0) {
            return invalid(format!("abs_tol must be positive, got {}", self.abs_tol));
        }
        if self.max_subdivisions < 16 {
            return invalid("max_subdivisions must be at least 16");
        }
        if !(self.oscillation_resolution > 0.0) {
            return invalid("oscillation_resolution must be positive");
        }
        if let Some(r) = self.r_max {
            if !(r > 0.0 && r.is_finite()) {
                return invalid(format!("r_max must be positive, got {r}"));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ProfileGradients {
    pub phi_z: Complex64,
    pub phi_y: Complex64,
    /// Estimated absolute errors.
    pub err_z: f64,
    pub err_y: f64,
    pub r_max: f64,
    pub theta_panels: usize,
    pub evaluations: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ProfileValue {
    pub value: Complex64,
    pub error: f64,
    pub r_max: f64,
    pub theta_panels: usize,
    pub evaluations: usize,
}

/// Result of one radial integral.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Radial {
    pub value: Complex64,
    pub error: f64,
    pub evaluations: usize,
    pub converged: bool,
}

/// `∫₀^R e^{i(a r + b/r)} amp(r) dr` to absolute accuracy `eps`.
pub(crate) fn radial_integral(
    a: f64,
    b: f64,
    r_max: f64,
    amp: &dyn Fn(f64) -> Complex64,
    amp_r: &dyn Fn(f64) -> Complex64,
    eps: f64,
) -> Radial {
    let mut out = Radial {
        value: Complex64::new(0.0, 0.0),
        error: 0.0,
        evaluations: 0,
        converged: true,
    };
    if r_max <= 0.0 {
        return out;
    }
    let plain = |lo: f64, hi: f64, out: &mut Radial, eps: f64| {
        let span = a.abs() * (hi - lo) + if b == 0.0 { 0.0 } else { b.abs() * (1.0 / lo - 1.0 / hi) };
        let n = ((span / PI).ceil() as usize).clamp(1, 4000);
        let breaks: Vec<f64> = (0..=n).map(|k| lo + (hi - lo) * k as f64 / n as f64).collect();
        let r = integrate(
            |r: f64| Complex64::from_polar(1.0, a * r + if b == 0.0 { 0.0 } else { b / r }) * amp(r),
            &breaks,
            &Tolerance::new(eps, 1e-14),
        );
        out.value += r.value;
        out.error += r.error;
        out.evaluations += r.evaluations;
        out.converged &= r.converged;
    };
    if b == 0.0 {
        plain(0.0, r_max, &mut out, eps);
        return out;
    }
    let rf = r_max.min(b.abs().sqrt());
    if rf < r_max {
        plain(rf, r_max, &mut out, eps / 3.0);
    }
    // Size of the amplitude near the origin, for the end-point remainder.
    let amax = [0.0, 0.25, 0.5, 1.0]
        .iter()
        .map(|f| amp(f * rf).norm())
        .fold(1e-300, f64::max);
    let r0 = (0.5 * rf)
        .min((eps * b * b / (6.0 * amax)).cbrt())
        .min((1e-3 * eps * b.abs() / amax).sqrt());
    // ∫_{r0}^{rf} in s = 1/r.
    let mut g = |s: f64| {
        let r = 1.0 / s;
        Complex64::from_polar(1.0, a * r) * amp(r) * (r * r)
    };
    let (s0, s1) = (1.0 / rf, 1.0 / r0);
    let mut breaks = vec![s0];
    while *breaks.last().unwrap() * 2.0 < s1 {
        let next = breaks.last().unwrap() * 2.0;
        breaks.push(next);
    }
    breaks.push(s1);
    let f = integrate_with(|lo, hi| filon_panel(&mut g, b, lo, hi), &breaks, &Tolerance::new(eps / 3.0, 1e-14));
    out.value += f.value;
    out.error += f.error;
    out.evaluations += f.evaluations;
    out.converged &= f.converged;
    // ∫_0^{r0} by two integrations by parts against e^{ib/r}.
    let e = Complex64::from_polar(1.0, b / r0);
    let ea = Complex64::from_polar(1.0, a * r0);
    let g0 = ea * amp(r0);
    let g1 = ea * (Complex64::new(0.0, a) * amp(r0) + amp_r(r0));
    let i = Complex64::new(0.0, 1.0);
    let tail = e * (i / b * r0 * r0 * g0 + r0 * r0 * (2.0 * r0 * g0 + r0 * r0 * g1) / (b * b));
    out.value += tail;
    out.error += 2.0 * amax * r0.powi(3) / (b * b);
    out.evaluations += 2;
    // The pieces share one budget; judge the total, not each piece.
    out.converged = out.error <= eps;
    out
}

/// Multipliers `(m^z, m^y)` for any `t ≥ 0`.
fn mult(t: Option<TimeParam>, theta: f64) -> (f64, f64) {
    match t {
        Some(tp) => {
            let m = multipliers(tp, theta);
            (m.mz, m.my)
        }
        None => theta.sin_cos(),
    }
}

fn phase_h(t: Option<TimeParam>, theta: f64) -> f64 {
    match t {
        Some(tp) => h_eval(tp, theta).h,
        None => 0.0,
    }
}

fn time_param(t: f64) -> Result<Option<TimeParam>> {
    if !(t >= 0.0 && t.is_finite()) {
        return invalid(format!("t must be finite and non-negative, got {t}"));
    }
    Ok(if t > 0.0 { Some(TimeParam::new(t)?) } else { None })
}

/// Angular break points: a uniform base, the critical zones, the
/// stationary directions, then subdivision until neither `h` nor
/// `ρ r_max sin(θ+α)` changes by more than `2π/resolution` per panel.
pub(crate) fn theta_breaks(t: Option<TimeParam>, rho: f64, alpha: f64, r_max: f64, resolution: f64, extra: &[f64]) -> Vec<f64> {
    let two_pi = 2.0 * PI;
    let mut b: Vec<f64> = (0..=32).map(|k| two_pi * k as f64 / 32.0).collect();
    if let Some(tp) = t {
        b.extend(critical_breaks(tp.get(), 0.0, two_pi));
        if rho > 0.0 {
            if let Ok(th) = invert_w(tp, alpha) {
                b.push(th);
                b.push(th + PI);
            }
        }
    }
    b.extend(extra.iter().copied().filter(|x| (0.0..=two_pi).contains(x)));
    b.sort_by(f64::total_cmp);
    b.dedup();
    let limit = two_pi / resolution;
    let mut out = vec![b[0]];
    for w in b.windows(2) {
        let mut stack = vec![(w[0], w[1], phase_h(t, w[0]), phase_h(t, w[1]))];
        let mut pieces = Vec::new();
        while let Some((lo, hi, hl, hh)) = stack.pop() {
            let change = (hh - hl).abs() + rho * r_max * (hi - lo);
            let mid = 0.5 * (lo + hi);
            if change > limit && hi - lo > 1e-12 && mid > lo && mid < hi {
                let hm = phase_h(t, mid);
                stack.push((mid, hi, hm, hh));
                stack.push((lo, mid, hl, hm));
            } else {
                pieces.push(hi);
            }
        }
        out.extend(pieces);
    }
    out
}

/// `∫₀^{2π} |m^z| + |m^y|` on the same break points, used to carry radial
/// errors into the angular total.
fn multiplier_l1(t: Option<TimeParam>, z_weight: f64) -> f64 {
    let breaks = theta_breaks(t, 0.0, 0.0, 0.0, 1.0, &[]);
    integrate(
        |th: f64| {
            let (mz, my) = mult(t, th);
            z_weight * mz.abs() + my.abs()
        },
        &breaks,
        &Tolerance::new(1e-10, 1e-8),
    )
    .value
}

/// Radial cutoff: the smaller of the data's own tail radius and the radius
/// at which the weighted-norm tail `‖⟨k⟩⁵ω̂₀‖∞ ∫_R^∞ r^{p−5} dr` drops below
/// a tenth of the requested accuracy.
pub fn radial_cutoff(data: &dyn InitialData, cfg: &QuadConfig, power: i32) -> f64 {
    if let Some(r) = cfg.r_max {
        return r;
    }
    let norms = data_norms(data, 2.0);
    if norms.sup == 0.0 {
        return 0.0;
    }
    let eps = 0.1 * cfg.rel_tol * norms.sup;
    let k = (4 - power) as f64;
    let weighted = (2.0 * PI * norms.weighted_value / (k * eps)).powf(1.0 / k);
    weighted.min(data.tail_radius(1e-3 * eps))
}

fn target(cfg: &QuadConfig, norm: f64, value: f64) -> f64 {
    (cfg.abs_tol / norm).max(cfg.rel_tol * value)
}

/// `∇φ = (φ_z, φ_y)` at `z + iy = ρe^{iα}`.
pub fn eval_profile_gradients(t: f64, rho: f64, alpha: f64, data: &dyn InitialData, cfg: &QuadConfig) -> Result<ProfileGradients> {
    cfg.validate()?;
    let tp = time_param(t)?;
    if !(rho >= 0.0 && rho.is_finite() && alpha.is_finite()) {
        return invalid(format!("need finite rho ≥ 0 and alpha, got ({rho}, {alpha})"));
    }
    let r_max = radial_cutoff(data, cfg, 0);
    let mut out = ProfileGradients {
        phi_z: Complex64::new(0.0, 0.0),
        phi_y: Complex64::new(0.0, 0.0),
        err_z: 0.0,
        err_y: 0.0,
        r_max,
        theta_panels: 0,
        evaluations: 0,
    };
    if r_max == 0.0 {
        return Ok(out);
    }
    // t m^z and m^y share a scale, so one vector tolerance serves both.
    let wz = t.max(1.0);
    let l1 = multiplier_l1(tp, wz);
    let eps_in = 0.1 * cfg.abs_tol / GRADIENT_NORM / l1.max(1.0);
    let breaks = theta_breaks(tp, rho, alpha, r_max, cfg.oscillation_resolution, &[]);
    let inner = std::cell::Cell::new((0.0f64, 0usize, true));
    let integrand = |th: f64| {
        let a = rho * (th + alpha).sin();
        let b = phase_h(tp, th);
        let r = radial_integral(a, b, r_max, &|r| data.v(r, th), &|r| data.v_r(r, th), eps_in);
        let (e, n, c) = inner.get();
        inner.set((e.max(r.error), n + r.evaluations, c && r.converged));
        let (mz, my) = mult(tp, th);
        CVec([r.value * (wz * mz), r.value * my])
    };
    let tol = Tolerance::new(cfg.abs_tol / GRADIENT_NORM, cfg.rel_tol).with_max_panels(cfg.max_subdivisions);
    let res = integrate(integrand, &breaks, &tol);
    let (inner_err, inner_evals, inner_ok) = inner.get();
    let total = res.error + inner_err * l1;
    let i = Complex64::new(0.0, GRADIENT_NORM);
    out.phi_z = res.value.0[0] * i / wz;
    out.phi_y = res.value.0[1] * i;
    out.err_z = total * GRADIENT_NORM / wz;
    out.err_y = total * GRADIENT_NORM;
    out.theta_panels = res.panels;
    out.evaluations = inner_evals;
    let want = target(cfg, GRADIENT_NORM, res.value.norm());
    if !(res.converged && inner_ok && total <= 2.0 * want) {
        return Err(Error::NoConvergence {
            what: format!("profile gradients at t={t}, rho={rho}, alpha={alpha}"),
            achieved: total * GRADIENT_NORM,
            requested: want * GRADIENT_NORM,
        });
    }
    Ok(out)
}

/// `f(t, z, y) = (2π)⁻² ∬ ω̂₀ e^{i(ξz + ηy + Φ_t)} dξ dη`.
pub fn eval_vorticity_profile(t: f64, z: f64, y: f64, data: &dyn InitialData, cfg: &QuadConfig) -> Result<ProfileValue> {
    cfg.validate()?;
    let tp = time_param(t)?;
    if !(z.is_finite() && y.is_finite()) {
        return invalid("z and y must be finite");
    }
    let rho = z.hypot(y);
    let alpha = y.atan2(z);
    let r_max = radial_cutoff(data, cfg, 1);
    let mut out = ProfileValue {
        value: Complex64::new(0.0, 0.0),
        error: 0.0,
        r_max,
        theta_panels: 0,
        evaluations: 0,
    };
    if r_max == 0.0 {
        return Ok(out);
    }
    let eps_in = 0.1 * cfg.abs_tol / PROFILE_NORM / (2.0 * PI);
    let breaks = theta_breaks(tp, rho, alpha, r_max, cfg.oscillation_resolution, &[]);
    let inner = std::cell::Cell::new((0.0f64, 0usize, true));
    let integrand = |th: f64| {
        let a = rho * (th + alpha).sin();
        let b = phase_h(tp, th);
        let r = radial_integral(
            a,
            b,
            r_max,
            &|r| data.v(r, th) * r,
            &|r| data.v(r, th) + data.v_r(r, th) * r,
            eps_in,
        );
        let (e, n, c) = inner.get();
        inner.set((e.max(r.error), n + r.evaluations, c && r.converged));
        r.value
    };
    let tol = Tolerance::new(cfg.abs_tol / PROFILE_NORM, cfg.rel_tol).with_max_panels(cfg.max_subdivisions);
    let res = integrate(integrand, &breaks, &tol);
    let (inner_err, inner_evals, inner_ok) = inner.get();
    let total = res.error + inner_err * 2.0 * PI;
    out.value = res.value * PROFILE_NORM;
    out.error = total * PROFILE_NORM;
    out.theta_panels = res.panels;
    out.evaluations = inner_evals;
    let want = target(cfg, PROFILE_NORM, res.value.norm());
    if !(res.converged && inner_ok && total <= 2.0 * want) {
        return Err(Error::NoConvergence {
            what: format!("vorticity profile at t={t}, z={z}, y={y}"),
            achieved: out.error,
            requested: want * PROFILE_NORM,
        });
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Velocity {
    pub ux: Complex64,
    pub uy: Complex64,
    /// The profile gradients the velocity was built from.
    pub gradients: ProfileGradients,
    /// Sheared coordinate `z = x − ty` at which they were evaluated.
    pub z: f64,
}

/// `u^x = φ_y − tφ_z`, `u^y = φ_z`, with the profile gradients taken at the
/// sheared point `(x − ty, y)`.
pub fn velocity(t: f64, x: f64, y: f64, data: &dyn InitialData, cfg: &QuadConfig) -> Result<Velocity> {
    if !(x.is_finite() && y.is_finite()) {
        return invalid("x and y must be finite");
    }
    let z = x - t * y;
    let g = eval_profile_gradients(t, z.hypot(y), y.atan2(z), data, cfg)?;
    Ok(Velocity {
        ux: g.phi_y - t * g.phi_z,
        uy: g.phi_z,
        gradients: g,
        z,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn radial_matches_plain_quadrature() {
        // Moderate b, so brute-force GK can still resolve e^{ib/r} down to
        // a small cutoff where the remainder is negligible.
        let amp = |r: f64| Complex64::new((-0.5 * r * r).exp(), 0.0);
        let amp_r = |r: f64| Complex64::new(-r * (-0.5 * r * r).exp(), 0.0);
        for (a, b) in [(0.7, 3.0), (-1.0, -5.0), (0.0, 0.5), (2.0, 0.0)] {
            let fast = radial_integral(a, b, 9.0, &amp, &amp_r, 1e-12);
            let breaks: Vec<f64> = (0..=4000).map(|k| 9.0 * (k as f64 / 4000.0).powi(3)).collect();
            let slow = integrate(
                |r: f64| {
                    if r == 0.0 {
                        Complex64::new(0.0, 0.0)
                    } else {
                        Complex64::from_polar(1.0, a * r + b / r) * amp(r)
                    }
                },
                &breaks,
                &Tolerance::new(1e-13, 1e-13).with_max_panels(400_000),
            );
            assert!(fast.converged);
            assert!((fast.value - slow.value).norm() < 1e-9, "a={a} b={b}: {} vs {}", fast.value, slow.value);
        }
    }

    #[test]
    fn zero_data_gives_zero() {
        let g = eval_profile_gradients(3.0, 1.0, 0.2, &Zero, &QuadConfig::default()).unwrap();
        assert_eq!(g.phi_z, Complex64::new(0.0, 0.0));
        assert_eq!(g.phi_y, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn vorticity_at_time_zero_origin() {
        let f = eval_vorticity_profile(0.0, 0.0, 0.0, &Gaussian, &QuadConfig::default()).unwrap();
        assert!((f.value - 1.0 / (2.0 * PI)).norm() < 1e-9, "{}", f.value);
    }

    #[test]
    fn time_zero_gradients_have_closed_form() {
        // At t = 0 the Gaussian gives φ = −(2π)⁻¹ ∫ e^{−k²/2} e^{ik·x}/|k|² ,
        // whose gradient at the origin vanishes by symmetry.
        let g = eval_profile_gradients(0.0, 0.0, 0.0, &Gaussian, &QuadConfig::default()).unwrap();
        assert!(g.phi_z.norm() < 1e-12 && g.phi_y.norm() < 1e-12);
    }

    #[test]
    fn velocity_is_composition() {
        let cfg = QuadConfig {
            rel_tol: 1e-5,
            ..QuadConfig::default()
        };
        let v = velocity(2.0, 1.0, 0.5, &Gaussian, &cfg).unwrap();
        assert_eq!(v.z, 0.0);
        let g = eval_profile_gradients(2.0, 0.5, 0.5f64.atan2(0.0), &Gaussian, &cfg).unwrap();
        assert_eq!(v.uy, g.phi_z);
        assert_eq!(v.ux, g.phi_y - 2.0 * g.phi_z);
    }
}
