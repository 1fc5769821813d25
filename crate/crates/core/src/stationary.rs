//! Inversion of the stationary-phase condition `ρ e^{iα} = γ′(θ)/r²`.
//!
//! The lift `w` of `arg γ′` decreases strictly from π to −π on `[0, π)`, so
//! every direction α has exactly one preimage there. The second stationary
//! point sits at `θ + π` by the odd symmetry `h(θ + π) = −h(θ)`.

use crate::error::{invalid, Error, Result};
use crate::phase::{critical_breaks, gamma_derivs, phase_gradient, w_lift, TimeParam};
use crate::roots::bisect;
use serde::Serialize;
use std::f64::consts::PI;

/// Upper bound on bisection halvings.
pub const MAX_BISECTIONS: usize = 60;
const NEWTON_STEPS: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct StationaryPair {
    pub theta: f64,
    pub r: f64,
    /// `|∇Ψ|` at `(r, θ)`.
    pub grad_norm: f64,
}

/// Reduce an angle to `(−π, π]`.
pub fn principal_angle(a: f64) -> f64 {
    let mut x = a.rem_euclid(2.0 * PI);
    if x > PI {
        x -= 2.0 * PI;
    }
    x
}

/// Distance between two angles on the circle.
pub fn angle_distance(a: f64, b: f64) -> f64 {
    principal_angle(a - b).abs()
}

/// Knots in `[0, π]` that split the range where `w` is steep into pieces on
/// which bisection starts from a bracket already comparable to the local
/// scale of `w`.
fn knots(t: f64) -> Vec<f64> {
    let mut k = critical_breaks(t, 0.0, PI);
    let c = 1.0 / t;
    for sigma in [-8.0, -2.0, -0.5, 0.5, 2.0, 8.0] {
        k.push(c + sigma / (t * t));
    }
    for j in 1..16 {
        k.push(PI * j as f64 / 16.0);
    }
    k.push(PI);
    k.retain(|x| (0.0..=PI).contains(x));
    k.sort_by(f64::total_cmp);
    k.dedup();
    k
}

/// The unique `θ ∈ [0, π)` with `W_t(θ) ≡ α (mod 2π)`.
pub fn invert_w(t: TimeParam, alpha: f64) -> Result<f64> {
    if !alpha.is_finite() {
        return invalid(format!("alpha must be finite, got {alpha}"));
    }
    let target = principal_angle(alpha);
    if target == PI {
        return Ok(0.0);
    }
    // w(θ) − target on [0, π] is strictly decreasing from π − target > 0
    // to −π − target < 0; the endpoint value at π uses the lift's jump.
    let f = |x: f64| {
        if x >= PI {
            -PI - target
        } else {
            w_lift(t, x) - target
        }
    };
    let k = knots(t.get());
    let mut lo = 0.0;
    let mut hi = PI;
    for pair in k.windows(2) {
        if f(pair[1]) <= 0.0 {
            lo = pair[0];
            hi = pair[1];
            break;
        }
    }
    let (mut theta, _) = bisect(f, lo, hi, MAX_BISECTIONS)?;
    for _ in 0..NEWTON_STEPS {
        let g = gamma_derivs(t, theta);
        if g.wp == 0.0 || !g.wp.is_finite() {
            break;
        }
        let step = (g.w - target) / g.wp;
        let next = theta - step;
        if !(next > lo && next < hi) {
            break;
        }
        let better = (w_lift(t, next) - target).abs() < (g.w - target).abs();
        if !better {
            break;
        }
        theta = next;
    }
    let residual = angle_distance(w_lift(t, theta), target);
    if residual > 1e-6 {
        return Err(Error::NoConvergence {
            what: format!("invert_w(t={}, alpha={alpha})", t.get()),
            achieved: residual,
            requested: 1e-10,
        });
    }
    Ok(theta)
}

fn pair_at(t: TimeParam, rho: f64, alpha: f64, theta: f64) -> StationaryPair {
    let g = gamma_derivs(t, theta);
    let r = (g.g1.norm() / rho).sqrt();
    let p = phase_gradient(t, rho, alpha, r, theta);
    StationaryPair {
        theta,
        r,
        grad_norm: p.dr.hypot(p.dtheta),
    }
}

/// Both stationary points of `Ψ(r, θ) = ρ r sin(θ + α) + h_t(θ)/r`.
pub fn stationary_points(t: TimeParam, rho: f64, alpha: f64) -> Result<(StationaryPair, StationaryPair)> {
    if !(rho > 0.0 && rho.is_finite()) {
        return invalid(format!("rho must be positive and finite, got {rho}"));
    }
    let theta = invert_w(t, alpha)?;
    let first = pair_at(t, rho, alpha, theta);
    // Ψ(r, θ + π) = −Ψ(r, θ). Evaluating at the rounded θ + π instead would
    // cost |W′| ulp(π), which reaches 1e−5 for t ~ 10⁴.
    let second = StationaryPair { theta: theta + PI, ..first };
    Ok((first, second))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tp(t: f64) -> TimeParam {
        TimeParam::new(t).unwrap()
    }

    #[test]
    fn direction_pi_maps_to_zero() {
        assert_eq!(invert_w(tp(5.0), PI).unwrap(), 0.0);
        assert_eq!(invert_w(tp(5.0), -PI).unwrap(), 0.0);
    }

    #[test]
    fn round_trip_on_grid() {
        for t in [0.3, 2.0, 10.0, 1e3, 1e4] {
            let tt = tp(t);
            let mut thetas: Vec<f64> = (0..200).map(|k| PI * k as f64 / 200.0).collect();
            thetas.extend([0.7, 1.0 / t, 1.0 / t + 3.0 / (t * t), 1.0 / t + t.powf(-1.5)]);
            for th in thetas.into_iter().filter(|x| *x < PI) {
                let a = w_lift(tt, th);
                let back = invert_w(tt, a).unwrap();
                let res = angle_distance(w_lift(tt, back), a);
                assert!(res < 1e-10, "t={t} θ={th} residual {res:e}");
                if t <= 10.0 {
                    assert!((back - th).abs() < 1e-9, "t={t} θ={th} got {back}");
                }
            }
        }
    }

    #[test]
    fn t5_direction_pi() {
        let (p, q) = stationary_points(tp(5.0), 1.0, PI).unwrap();
        assert_eq!(p.theta, 0.0);
        assert!((p.r - 5f64.sqrt()).abs() < 1e-12);
        assert!((q.theta - PI).abs() < 1e-15);
        assert!((q.r - p.r).abs() < 1e-12);
    }

    #[test]
    fn radius_scales_with_rho() {
        let (a, _) = stationary_points(tp(3.0), 4.0, 0.4).unwrap();
        let (b, _) = stationary_points(tp(3.0), 1.0, 0.4).unwrap();
        assert_eq!(a.theta, b.theta);
        assert!((a.r - 0.5 * b.r).abs() < 1e-14 * b.r);
    }

    #[test]
    fn gradient_vanishes() {
        for (t, rho, alpha) in [(50.0, 2.0, 1.3), (1e4, 0.1, -2.0), (1.0, 10.0, 3.0), (700.0, 1.0, 0.0)] {
            let (p, q) = stationary_points(tp(t), rho, alpha).unwrap();
            for s in [p, q] {
                let g1 = gamma_derivs(tp(t), s.theta).g1.norm();
                assert!(s.grad_norm < 1e-9 * (1.0 + rho) * g1.max(1.0), "t={t}: {:e}", s.grad_norm);
            }
        }
    }

    #[test]
    fn rejects_zero_rho() {
        assert!(stationary_points(tp(3.0), 0.0, 1.0).is_err());
    }
}
