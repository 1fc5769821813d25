//! Dyadic decomposition of the gradient integral by the size of the phase
//! gradient `|ρe^{iα} − γ′(θ)/r²|`.
//!
//! Each piece carries the cutoff `χ(x/N) − χ(2x/N)`, which is supported in
//! `N/2 < x < 2N`. In `u = 1/r²` the level sets of `x` solve a quadratic,
//! and in θ the support of the small-`N` pieces is an arc around the
//! stationary directions found through `W⁻¹`.

use super::data::{smooth_step, InitialData};
use super::{eval_profile_gradients, mult, radial_cutoff, theta_breaks, ProfileGradients, QuadConfig, GRADIENT_NORM};
use crate::error::{invalid, Result};
use crate::phase::{gamma_derivs, h_eval, TimeParam};
use crate::quad::{integrate, CVec, Tolerance};
use crate::stationary::invert_w;
use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;

/// Relative mismatch between the dyadic sum and the direct integral above
/// which a report carries a warning.
pub const MISSING_TOL: f64 = 1e-3;

/// Smooth cutoff: 1 on `[0, 1]`, 0 on `[2, ∞)`.
pub fn bump(x: f64) -> f64 {
    if x <= 1.0 {
        1.0
    } else if x >= 2.0 {
        0.0
    } else {
        smooth_step(2.0 - x).0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DyadicTerm {
    pub n: f64,
    pub phi_z: Complex64,
    pub phi_y: Complex64,
    pub error: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DyadicReport {
    pub t: f64,
    pub rho: f64,
    pub alpha: f64,
    pub terms: Vec<DyadicTerm>,
    pub sum_z: Complex64,
    pub sum_y: Complex64,
    pub direct: ProfileGradients,
    /// `max(|Δφ_z|/|φ_z|, |Δφ_y|/|φ_y|)` between the sum and the direct value.
    pub missing_rel: f64,
    pub warning: Option<String>,
}

/// `u = 1/r²` range where `|P − c u| ≤ level`, clipped to `u > 0`.
fn level_range(p: Complex64, c: Complex64, level: f64) -> Option<(f64, f64)> {
    let c2 = c.norm_sqr();
    let b = (p * c.conj()).re;
    let disc = b * b - c2 * (p.norm_sqr() - level * level);
    if disc < 0.0 {
        return None;
    }
    let sq = disc.sqrt();
    let hi = (b + sq) / c2;
    if hi <= 0.0 {
        return None;
    }
    // Stable form of the smaller root.
    let lo = if b > 0.0 { (p.norm_sqr() - level * level) / (b + sq) } else { (b - sq) / c2 };
    Some((lo.max(0.0), hi))
}

/// Angular arcs in `[0, 2π]` where some `r` has `x < level`.
fn theta_support(tp: TimeParam, rho: f64, alpha: f64, level: f64) -> Result<Vec<(f64, f64)>> {
    if level >= rho {
        return Ok(vec![(0.0, 2.0 * PI)]);
    }
    let half = (level / rho).asin();
    // W decreases, so the larger direction has the smaller angle.
    let lo = invert_w(tp, alpha + half)?;
    let hi = invert_w(tp, alpha - half)?;
    let base = if lo <= hi { vec![(lo, hi)] } else { vec![(0.0, hi), (lo, PI)] };
    Ok(base.iter().flat_map(|&(a, b)| [(a, b), (a + PI, b + PI)]).collect())
}

struct Piece<'a> {
    tp: TimeParam,
    rho: f64,
    alpha: f64,
    n: f64,
    r_max: f64,
    data: &'a dyn InitialData,
    eps: f64,
}

impl Piece<'_> {
    fn radial(&self, theta: f64) -> Complex64 {
        let c = gamma_derivs(self.tp, theta).g1;
        let p = Complex64::from_polar(self.rho, self.alpha);
        let Some((u0, u1)) = level_range(p, c, 2.0 * self.n) else {
            return Complex64::new(0.0, 0.0);
        };
        let s_min = 1.0 / self.r_max;
        let mut ss: Vec<f64> = vec![u0.sqrt().max(s_min), u1.sqrt()];
        for level in [0.5 * self.n, self.n] {
            if let Some((a, b)) = level_range(p, c, level) {
                ss.push(a.sqrt());
                ss.push(b.sqrt());
            }
        }
        ss.retain(|s| *s >= s_min && *s <= u1.sqrt());
        if ss.len() < 2 || u1.sqrt() <= s_min {
            return Complex64::new(0.0, 0.0);
        }
        ss.sort_by(f64::total_cmp);
        ss.dedup();
        let a = self.rho * (theta + self.alpha).sin();
        let b = h_eval(self.tp, theta).h;
        let mut breaks = vec![ss[0]];
        for w in ss.windows(2) {
            let span = b.abs() * (w[1] - w[0]) + a.abs() * (1.0 / w[0] - 1.0 / w[1]);
            let k = ((span / PI).ceil() as usize).clamp(1, 20_000);
            for j in 1..=k {
                breaks.push(w[0] + (w[1] - w[0]) * j as f64 / k as f64);
            }
        }
        let n = self.n;
        integrate(
            |s: f64| {
                let r = 1.0 / s;
                let x = (p - c * (s * s)).norm();
                let cut = bump(x / n) - bump(2.0 * x / n);
                if cut == 0.0 {
                    return Complex64::new(0.0, 0.0);
                }
                Complex64::from_polar(r * r * cut, a * r + b * s) * self.data.v(r, theta)
            },
            &breaks,
            &Tolerance::new(self.eps, 1e-12),
        )
        .value
    }
}

/// Exponent range `k` for `N = 2^k` that captures the Gaussian-decaying data
/// used here: pieces below `ρ 2^{−12}` and above `2^{22}` are below double
/// precision relative to the total.
pub fn default_dyadic_range(rho: f64) -> (i32, i32) {
    let low = rho.log2().floor() as i32 - 12;
    (low.min(0), 22)
}

/// `I_N` for dyadic `N = 2^k`, `k` in `n_range`, next to the direct value.
pub fn dyadic_contributions(
    t: f64,
    rho: f64,
    alpha: f64,
    data: &dyn InitialData,
    n_range: (i32, i32),
    cfg: &QuadConfig,
) -> Result<DyadicReport> {
    let tp = TimeParam::new(t)?;
    if !(rho > 0.0 && rho.is_finite()) {
        return invalid(format!("rho must be positive, got {rho}"));
    }
    if n_range.0 > n_range.1 {
        return invalid("empty dyadic range");
    }
    let direct = eval_profile_gradients(t, rho, alpha, data, cfg)?;
    let r_max = radial_cutoff(data, cfg, 0);
    let wz = t.max(1.0);
    let count = (n_range.1 - n_range.0 + 1) as f64;
    let scale = (direct.phi_z * wz).norm().hypot(direct.phi_y.norm()) / GRADIENT_NORM;
    let abs = (cfg.abs_tol / GRADIENT_NORM).max(1e-2 * MISSING_TOL * scale / count);
    let i_norm = Complex64::new(0.0, GRADIENT_NORM);
    let mut terms = Vec::new();
    for k in n_range.0..=n_range.1 {
        let n = 2f64.powi(k);
        let piece = Piece {
            tp,
            rho,
            alpha,
            n,
            r_max,
            data,
            eps: abs * 1e-2,
        };
        let mut extra = Vec::new();
        let support = theta_support(tp, rho, alpha, 2.0 * n)?;
        for level in [0.5 * n, n] {
            if level < rho {
                for (a, b) in theta_support(tp, rho, alpha, level)? {
                    extra.push(a);
                    extra.push(b);
                }
            }
        }
        for &(a, b) in &support {
            extra.push(a);
            extra.push(b);
        }
        let all = theta_breaks(Some(tp), rho, alpha, r_max, cfg.oscillation_resolution, &extra);
        let mut value = CVec([Complex64::new(0.0, 0.0); 2]);
        let mut error = 0.0;
        for &(a, b) in &support {
            let mut br: Vec<f64> = all.iter().copied().filter(|x| *x > a && *x < b).collect();
            br.insert(0, a);
            br.push(b);
            let res = integrate(
                |th: f64| {
                    let v = piece.radial(th);
                    let (mz, my) = mult(Some(tp), th);
                    CVec([v * (wz * mz), v * my])
                },
                &br,
                &Tolerance::new(abs, 1e-9).with_max_panels(cfg.max_subdivisions),
            );
            value = value + res.value;
            error += res.error;
        }
        terms.push(DyadicTerm {
            n,
            phi_z: value.0[0] * i_norm / wz,
            phi_y: value.0[1] * i_norm,
            error: error * GRADIENT_NORM,
        });
    }
    let sum_z: Complex64 = terms.iter().map(|t| t.phi_z).sum();
    let sum_y: Complex64 = terms.iter().map(|t| t.phi_y).sum();
    let rel = |a: Complex64, b: Complex64| if b.norm() > 0.0 { (a - b).norm() / b.norm() } else { a.norm() };
    let missing_rel = rel(sum_z, direct.phi_z).max(rel(sum_y, direct.phi_y));
    let warning = (missing_rel > MISSING_TOL).then(|| {
        format!(
            "dyadic range 2^{}..2^{} misses {:.2e} of the direct value",
            n_range.0, n_range.1, missing_rel
        )
    });
    Ok(DyadicReport {
        t,
        rho,
        alpha,
        terms,
        sum_z,
        sum_y,
        direct,
        missing_rel,
        warning,
    })
}
