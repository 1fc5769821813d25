//! Single Fourier modes: closed-form phase, an ODE cross-check and the
//! per-mode damping ratio.

use crate::error::{invalid, Result};
use crate::phase::{psi_eval, TimeParam};
use num_complex::Complex64;

fn check_xi(xi: f64) -> Result<()> {
    if xi == 0.0 || !xi.is_finite() {
        return invalid(format!("xi must be nonzero and finite, got {xi}"));
    }
    Ok(())
}

/// `Φ_t(ξ, η) = [arctan(t − η/ξ) + arctan(η/ξ)] / ξ`.
pub fn mode_phase(t: f64, xi: f64, eta: f64) -> Result<f64> {
    check_xi(xi)?;
    if t == 0.0 {
        return Ok(0.0);
    }
    let tp = TimeParam::new(t)?;
    Ok(psi_eval(tp, eta / xi).0 / xi)
}

/// RK4 integration of `f′(s) = i ξ / (ξ² + (η − sξ)²) f` from `f(0) = 1` to
/// `s = t`, which reproduces `e^{iΦ_t(ξ, η)}`.
///
/// The rate peaks at `1/|ξ|` over an `s`-width of order one, so the step is
/// capped at `0.005 min(1, |ξ|)` whatever `steps` asks for.
pub fn mode_ode_oracle(t: f64, xi: f64, eta: f64, steps: usize) -> Result<Complex64> {
    check_xi(xi)?;
    if !(t >= 0.0 && t.is_finite()) {
        return invalid(format!("t must be finite and non-negative, got {t}"));
    }
    if steps < 1000 {
        return invalid(format!("need at least 1000 steps, got {steps}"));
    }
    let hmax = 0.005 * xi.abs().min(1.0);
    let n = steps.max((t / hmax).ceil() as usize);
    let h = t / n as f64;
    let rate = |s: f64| xi / (xi * xi + (eta - s * xi).powi(2));
    let i = Complex64::new(0.0, 1.0);
    let mut f = Complex64::new(1.0, 0.0);
    for k in 0..n {
        let s = k as f64 * h;
        let r0 = rate(s);
        let r1 = rate(s + 0.5 * h);
        let r2 = rate(s + h);
        let k1 = i * r0 * f;
        let k2 = i * r1 * (f + 0.5 * h * k1);
        let k3 = i * r1 * (f + 0.5 * h * k2);
        let k4 = i * r2 * (f + h * k3);
        f += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    Ok(f)
}

/// `t² |ξ² + (η − tξ)²|⁻¹ / (ξ⁻² + η²ξ⁻⁴)`, the stream-function multiplier
/// measured against its `t⁻²` envelope.
pub fn per_mode_damping(t: f64, xi: f64, eta: f64) -> Result<f64> {
    check_xi(xi)?;
    if !(t >= 1.0) {
        return invalid(format!("t must be at least 1, got {t}"));
    }
    let m = 1.0 / (xi * xi + (eta - t * xi).powi(2));
    let envelope = 1.0 / (xi * xi) + eta * eta / xi.powi(4);
    Ok(t * t * m / envelope)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phase::h_eval;

    #[test]
    fn phase_examples() {
        assert!((mode_phase(7.0, 1.0, 0.0).unwrap() - 7f64.atan()).abs() < 1e-15);
        let a = mode_phase(3.0, 2.0, 4.0).unwrap();
        let b = mode_phase(3.0, 1.0, 2.0).unwrap() / 2.0;
        assert!((a - b).abs() < 1e-15);
        assert!(mode_phase(1.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn phase_matches_polar_form() {
        let tp = TimeParam::new(4.0).unwrap();
        for (xi, eta) in [(1.0, 0.3), (-0.4, 2.0), (0.05, -1.0), (3.0, 12.0)] {
            let r = f64::hypot(xi, eta);
            let theta = f64::atan2(xi, eta);
            let polar = h_eval(tp, theta).h / r;
            let cart = mode_phase(4.0, xi, eta).unwrap();
            assert!((polar - cart).abs() < 1e-12 * (1.0 + cart.abs()), "{polar} vs {cart}");
        }
    }

    #[test]
    fn ode_examples() {
        let f = mode_ode_oracle(10.0, 1.0, 0.0, 1000).unwrap();
        let exact = Complex64::from_polar(1.0, mode_phase(10.0, 1.0, 0.0).unwrap());
        assert!((f - exact).norm() < 1e-8);
        let g = mode_ode_oracle(10.0, 1.0, 3.0, 1000).unwrap();
        assert!((g.norm() - 1.0).abs() < 1e-10);
        let z = mode_ode_oracle(1e-9, 1.0, 3.0, 1000).unwrap();
        assert!((z - 1.0).norm() < 1e-8);
        assert!(mode_ode_oracle(1.0, 1.0, 0.0, 10).is_err());
    }

    #[test]
    fn damping_examples() {
        assert!((per_mode_damping(10.0, 1.0, 0.0).unwrap() - 100.0 / 101.0).abs() < 1e-15);
        let t = 30.0;
        let r = per_mode_damping(t, 1.0, t).unwrap();
        assert!((r - t * t / (1.0 + t * t)).abs() < 1e-14);
    }
}
