//! Round trips and vanishing gradients of the stationary map.

use betaplane::phase::{gamma_derivs, phase_gradient, w_lift};
use betaplane::stationary::*;
use betaplane::TimeParam;
use proptest::prelude::*;
use std::f64::consts::PI;

fn log_uniform(lo: f64, hi: f64) -> impl Strategy<Value = f64> {
    (lo..hi).prop_map(|e: f64| 10f64.powf(e))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn inverse_of_lift(t in log_uniform(0.0, 4.0), theta in 0.0f64..PI) {
        let tp = TimeParam::new(t).unwrap();
        let a = w_lift(tp, theta);
        let back = invert_w(tp, a).unwrap();
        prop_assert!(angle_distance(w_lift(tp, back), a) < 1e-9);
    }

    #[test]
    fn gradient_vanishes_at_both_points(t in log_uniform(0.0, 4.0), rho in log_uniform(-1.0, 1.0), alpha in -PI..PI) {
        let tp = TimeParam::new(t).unwrap();
        let (a, b) = stationary_points(tp, rho, alpha).unwrap();
        let g = gamma_derivs(tp, a.theta).g1.norm();
        let scale = (1.0 + rho) * g.max(1.0);
        prop_assert!(a.grad_norm < 1e-9 * scale);
        prop_assert!(b.grad_norm < 1e-9 * scale);
        prop_assert!((b.theta - a.theta - PI).abs() < 1e-15);
        prop_assert_eq!(a.r, b.r);
        prop_assert!((a.r - (g / rho).sqrt()).abs() <= 1e-14 * a.r);
    }

    /// Away from the steep critical zone the rounded angle θ + π is an
    /// accurate stand-in, and the gradient evaluated there also vanishes.
    #[test]
    fn half_turn_gradient_evaluated_directly(t in log_uniform(0.0, 1.0), rho in 0.5f64..2.0, alpha in -PI..PI) {
        let tp = TimeParam::new(t).unwrap();
        let (_, b) = stationary_points(tp, rho, alpha).unwrap();
        let p = phase_gradient(tp, rho, alpha, b.r, b.theta);
        prop_assert!(p.dr.hypot(p.dtheta) < 1e-7 * (1.0 + rho));
    }
}
