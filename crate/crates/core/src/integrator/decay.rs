//! Time sweeps of the profile gradients, decay-rate fits and the
//! oscillatory-integral bound.

use super::data::{DataNorms, InitialData};
use super::{eval_profile_gradients, QuadConfig};
use crate::error::{invalid, Result};
use crate::regions::{scaling_fit, KappaReport, LogCorrection};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

/// One evaluated `(t, ρ, α)` sample.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DecayPoint {
    pub t: f64,
    pub rho: f64,
    pub alpha: f64,
    pub phi_z: Complex64,
    pub phi_y: Complex64,
    pub err_z: f64,
    pub err_y: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DecayFit {
    pub point: (f64, f64),
    pub t_grid: Vec<f64>,
    pub values_z: Vec<f64>,
    pub values_y: Vec<f64>,
    /// Slopes of `log(|φ| / ln(t+2))` against `log t`.
    pub exponent_z: f64,
    pub exponent_y: f64,
    pub residual_z: f64,
    pub residual_y: f64,
    pub samples: Vec<DecayPoint>,
    /// Times whose quadrature failed, with the reason; they are left out of
    /// the fit.
    pub failures: Vec<(f64, String)>,
}

/// Evaluate every `(ρ, α)` at every `t` in parallel and fit both decay
/// exponents with the `ln(t+2)` correction.
pub fn decay_sweep(points: &[(f64, f64)], t_grid: &[f64], data: &dyn InitialData, cfg: &QuadConfig) -> Result<Vec<DecayFit>> {
    if t_grid.len() < 3 {
        return invalid("decay sweep needs at least three times");
    }
    if t_grid.iter().any(|t| !(*t > 0.0 && t.is_finite())) {
        return invalid("sweep times must be positive");
    }
    let jobs: Vec<(usize, f64)> = (0..points.len()).flat_map(|p| t_grid.iter().map(move |&t| (p, t))).collect();
    let results: Vec<(usize, f64, Result<DecayPoint>)> = jobs
        .par_iter()
        .map(|&(p, t)| {
            let (rho, alpha) = points[p];
            let r = eval_profile_gradients(t, rho, alpha, data, cfg).map(|g| DecayPoint {
                t,
                rho,
                alpha,
                phi_z: g.phi_z,
                phi_y: g.phi_y,
                err_z: g.err_z,
                err_y: g.err_y,
            });
            (p, t, r)
        })
        .collect();
    let mut fits = Vec::new();
    for (p, &point) in points.iter().enumerate() {
        let mut samples = Vec::new();
        let mut failures = Vec::new();
        let mut first_error = None;
        for (q, t, r) in &results {
            if *q != p {
                continue;
            }
            match r {
                Ok(s) => samples.push(*s),
                Err(e) => {
                    failures.push((*t, e.to_string()));
                    first_error.get_or_insert_with(|| e.clone());
                }
            }
        }
        if samples.len() < 3 {
            if let Some(e) = first_error {
                return Err(e);
            }
        }
        let zs: Vec<(f64, f64)> = samples.iter().map(|s| (s.t, s.phi_z.norm())).collect();
        let ys: Vec<(f64, f64)> = samples.iter().map(|s| (s.t, s.phi_y.norm())).collect();
        let fz = scaling_fit(&zs, LogCorrection::Log)?;
        let fy = scaling_fit(&ys, LogCorrection::Log)?;
        fits.push(DecayFit {
            point,
            t_grid: samples.iter().map(|s| s.t).collect(),
            values_z: zs.iter().map(|s| s.1).collect(),
            values_y: ys.iter().map(|s| s.1).collect(),
            exponent_z: fz.exponent,
            exponent_y: fy.exponent,
            residual_z: fz.residual,
            residual_y: fy.residual,
            samples,
            failures,
        });
    }
    Ok(fits)
}

/// The oscillatory-integral bound with unit constant:
///
/// ```text
/// [(ρ^{β−1}(1+ρ⁻¹)κ∞ + κ₁) ln(ρ+2) + ⟨κ₁⟩(ln(ρ⁻¹+2) + ln(2+κ$))]
///     · (‖⟨r⟩^{2β+1} v‖∞ + ‖⟨r⟩^{2β+2} ∇v‖∞)
/// ```
pub fn vdc_bound_predict(rho: f64, kappas: &KappaReport, norms: &DataNorms, beta: f64) -> Result<f64> {
    if !(beta > 0.5) {
        return invalid(format!("beta must exceed 1/2, got {beta}"));
    }
    if !(rho > 0.0) {
        return invalid(format!("rho must be positive, got {rho}"));
    }
    let (ki, k1, kd) = (kappas.k_inf, kappas.k_one, kappas.k_dollar);
    let data = norms.combined();
    if data == 0.0 {
        return Ok(0.0);
    }
    let jk1 = (1.0 + k1 * k1).sqrt();
    let near = (rho.powf(beta - 1.0) * (1.0 + 1.0 / rho) * ki + k1) * (rho + 2.0).ln();
    let far = jk1 * ((1.0 / rho + 2.0).ln() + (2.0 + kd).ln());
    Ok((near + far) * data)
}
