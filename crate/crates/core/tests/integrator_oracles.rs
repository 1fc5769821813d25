//! The polar integrator against reference integrals computed in a
//! different coordinate system, plus properties of the integrals that do
//! not depend on any reference.

mod common;

use betaplane::integrator::*;
use betaplane::regions::{scaling_fit, LogCorrection};
use num_complex::Complex64;
use std::f64::consts::PI;

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm()
}

#[test]
fn gradients_match_contour_oracle() {
    let cfg = QuadConfig::default();
    for (t, rho, alpha) in [(5.0, 1.0, 0.0), (0.5, 1.0, 0.3), (5.0, 2.0, 2.0)] {
        let g = eval_profile_gradients(t, rho, alpha, &Gaussian, &cfg).unwrap();
        let (z, y) = common::gradients(t, rho * f64::cos(alpha), rho * f64::sin(alpha), 1000);
        assert!(rel(g.phi_z, z) < 1e-4, "t={t} phi_z {} vs {z}", g.phi_z);
        assert!(rel(g.phi_y, y) < 1e-4, "t={t} phi_y {} vs {y}", g.phi_y);
    }
}

#[test]
fn vorticity_matches_contour_oracle() {
    let cfg = QuadConfig::default();
    for (t, z, y) in [(5.0, 1.0, 1.0), (1.0, -0.5, 2.0)] {
        let f = eval_vorticity_profile(t, z, y, &Gaussian, &cfg).unwrap();
        let o = common::vorticity(t, z, y, 1000);
        assert!(rel(f.value, o) < 1e-4, "t={t} ({z},{y}): {} vs {o}", f.value);
    }
}

/// The literal 4000² midpoint sum on `[−20, 20]²`. The multiplier
/// `ξ/(ξ² + (η − tξ)²)` is not integrable to midpoint accuracy along
/// `ξ = 0`, where the phase `Φ_t ~ 1/ξ` also oscillates without bound, so
/// the sum stalls near 1e−2 relative error however fine the grid.
#[test]
#[ignore = "midpoint sum does not converge at the ξ = 0 singularity; the contour oracle replaces it"]
fn gradients_match_cartesian_riemann_sum() {
    let g = eval_profile_gradients(5.0, 1.0, 0.0, &Gaussian, &QuadConfig::default()).unwrap();
    let (z, y) = common::riemann_gradients(5.0, 1.0, 0.0, 4000, 20.0);
    assert!(rel(g.phi_z, z) < 1e-4, "phi_z {} vs {z}", g.phi_z);
    assert!(rel(g.phi_y, y) < 1e-4, "phi_y {} vs {y}", g.phi_y);
}

#[test]
fn zero_data_gives_zero() {
    for t in [0.0, 3.0, 100.0] {
        let g = eval_profile_gradients(t, 1.0, 0.4, &Zero, &QuadConfig::default()).unwrap();
        assert_eq!((g.phi_z, g.phi_y), (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)));
    }
}

/// At `t = 0`, `|ξ|/(ξ² + η²) ≤ 1/r` gives
/// `|∇φ| ≤ (2π sup|ω̂₀| + ‖ω̂₀‖₁) / (8π³)` after splitting at `r = 1`.
#[test]
fn initial_gradients_obey_crude_bound() {
    for data in [&Gaussian as &dyn InitialData, &Bump::default()] {
        let n = data_norms(data, 2.0);
        let bound = (2.0 * PI * n.sup + n.l1) * GRADIENT_NORM;
        for (rho, alpha) in [(0.0, 0.0), (0.5, 1.0), (3.0, -2.0)] {
            let g = eval_profile_gradients(0.0, rho, alpha, data, &QuadConfig::default()).unwrap();
            assert!(g.phi_z.norm() <= bound && g.phi_y.norm() <= bound, "{} at rho={rho}", data.name());
        }
    }
}

#[test]
fn tightening_tolerance_stays_within_estimate() {
    let loose = QuadConfig { rel_tol: 1e-5, ..Default::default() };
    let tight = QuadConfig { rel_tol: 5e-6, ..Default::default() };
    for (t, alpha) in [(3.0, 0.2), (20.0, 1.3)] {
        let a = eval_profile_gradients(t, 1.0, alpha, &Gaussian, &loose).unwrap();
        let b = eval_profile_gradients(t, 1.0, alpha, &Gaussian, &tight).unwrap();
        assert!((a.phi_z - b.phi_z).norm() <= a.err_z, "t={t}: z moved {:e}, estimate {:e}", (a.phi_z - b.phi_z).norm(), a.err_z);
        assert!((a.phi_y - b.phi_y).norm() <= a.err_y, "t={t}: y moved {:e}, estimate {:e}", (a.phi_y - b.phi_y).norm(), a.err_y);
    }
}

#[test]
fn velocity_is_the_shifted_gradient() {
    let cfg = QuadConfig::default();
    let (t, x, y) = (4.0, 2.5, 0.5);
    let v = velocity(t, x, y, &Gaussian, &cfg).unwrap();
    let z = x - t * y;
    let g = eval_profile_gradients(t, z.hypot(y), y.atan2(z), &Gaussian, &cfg).unwrap();
    assert_eq!(v.uy, g.phi_z);
    assert_eq!(v.ux, g.phi_y - t * g.phi_z);
    let v0 = velocity(0.0, x, y, &Gaussian, &cfg).unwrap();
    assert_eq!((v0.ux, v0.uy), (v0.gradients.phi_y, v0.gradients.phi_z));
}

/// The vertical velocity on the line `y = 0` decays at least as fast as
/// `ln(t+2) t^{−3/2}`.
#[test]
fn vertical_velocity_decays() {
    let ts: Vec<f64> = (2..=6).map(|k| 2f64.powi(k)).collect();
    let samples: Vec<(f64, f64)> = ts
        .iter()
        .map(|&t| (t, velocity(t, 1.0, 0.0, &Gaussian, &QuadConfig::default()).unwrap().uy.norm()))
        .collect();
    let fit = scaling_fit(&samples, LogCorrection::Log).unwrap();
    assert!(fit.exponent < -1.35, "exponent {}", fit.exponent);
}

/// Data supported in `|ξ| ≥ 1 + |η|` never meets the critical ray, and
/// `φ_z` decays like `t^{−2}` (the slope is allowed 0.1 of fit noise).
#[test]
fn data_off_the_critical_ray_decays_faster() {
    let data = TruncatedGaussian::default();
    let ts: Vec<f64> = (2..=6).map(|k| 2f64.powi(k)).collect();
    let fits = decay_sweep(&[(1.0, 0.0), (1.0, 1.0)], &ts, &data, &QuadConfig::default()).unwrap();
    for f in fits {
        assert!(f.failures.is_empty());
        let raw = scaling_fit(&f.t_grid.iter().copied().zip(f.values_z.iter().copied()).collect::<Vec<_>>(), LogCorrection::None).unwrap();
        assert!(raw.exponent <= -1.9, "point {:?}: exponent {}", f.point, raw.exponent);
    }
}

#[test]
fn dyadic_pieces_follow_both_branches() {
    let (t, rho) = (10.0, 5.0);
    let r = dyadic_contributions(t, rho, 0.3, &Gaussian, default_dyadic_range(rho), &QuadConfig::default()).unwrap();
    assert!(r.missing_rel < MISSING_TOL, "{:?}", r.warning);
    let size = |d: &DyadicTerm| d.phi_z.norm().hypot(d.phi_y.norm());
    // Small N: |I_N| ≲ N².
    let small: Vec<&DyadicTerm> = r.terms.iter().filter(|d| d.n < rho / 100.0).collect();
    let top = small.last().unwrap();
    let c = size(top) / (top.n * top.n);
    for d in &small {
        assert!(size(d) <= 2.0 * c * d.n * d.n + 1e-15, "N={}: {:e}", d.n, size(d));
    }
    // Large N: |I_N| ≲ ln(N+2)/N.
    let large: Vec<&DyadicTerm> = r.terms.iter().filter(|d| d.n >= 1024.0).collect();
    let scaled = |d: &DyadicTerm| size(d) * d.n / (d.n + 2.0).ln();
    let c = scaled(large[0]);
    for d in &large {
        assert!(scaled(d) <= 2.0 * c, "N={}: {:e}", d.n, scaled(d));
    }
}

#[test]
fn bound_prediction_tracks_phi_y() {
    use betaplane::regions::{kappa_report, Which};
    use betaplane::TimeParam;
    let norms = data_norms(&Gaussian, 2.0);
    let mut ratios = Vec::new();
    for t in [32.0, 64.0, 128.0, 256.0] {
        let g = eval_profile_gradients(t, 1.0, 0.0, &Gaussian, &QuadConfig::default()).unwrap();
        let k = kappa_report(TimeParam::new(t).unwrap(), 0.5, Which::Y, 2.0).unwrap();
        let bound = vdc_bound_predict(1.0, &k, &norms, 2.0).unwrap();
        ratios.push(g.phi_y.norm() / bound);
    }
    let mx = ratios.iter().copied().fold(0.0, f64::max);
    let mn = ratios.iter().copied().fold(f64::INFINITY, f64::min);
    assert!(mx / mn < 50.0, "ratios {ratios:?}");
}

/// The multiplier `e^{iΦ_t}` has modulus one, so `‖f(t)‖₂ = ‖ω₀‖₂`. The
/// phase is singular at `k = 0`, where the Gaussian does not vanish, and
/// the resulting tail in `(z, y)` decays slowly: the grid sum on
/// `[−16, 16]²` reaches 0.9969.
#[test]
#[ignore = "about 12 minutes on one core, and the truncated grid stays below the 1e-3 band"]
fn vorticity_profile_keeps_its_l2_norm() {
    let cfg = QuadConfig { rel_tol: 1e-5, ..Default::default() };
    let (t, half, h) = (0.05, 16.0f64, 1.0);
    let n = (2.0 * half / h).round() as i32;
    let (mut sf, mut s0) = (0.0, 0.0);
    for i in 0..=n {
        for j in 0..=n {
            let (z, y) = (-half + f64::from(i) * h, -half + f64::from(j) * h);
            sf += eval_vorticity_profile(t, z, y, &Gaussian, &cfg).unwrap().value.norm_sqr();
            s0 += ((-(z * z + y * y) / 2.0).exp() / (2.0 * PI)).powi(2);
        }
    }
    assert!((sf / s0 - 1.0).abs() < 1e-3, "ratio {}", sf / s0);
}
