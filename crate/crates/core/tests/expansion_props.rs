//! The multiscale representation reproduces the phase at admissible angles.

use betaplane::expansions::*;
use betaplane::phase::{gamma_derivs, h_eval};
use betaplane::TimeParam;
use proptest::prelude::*;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn identities_hold_on_both_sides(e in 1.5f64..4.0, u in -1.0f64..1.0) {
        let t = 10f64.powf(e);
        let tp = TimeParam::new(t).unwrap();
        // |θ − 1/t| log-uniform between 1e−2/t² and 1e−1, on both sides.
        let lo = (1e-2 / (t * t)).log10();
        let theta = 1.0 / t + u.signum() * 10f64.powf(lo + (-1.0 - lo) * u.abs());
        let Ok((pt, v)) = multiscale_exact(tp, theta) else { return Ok(()); };
        let th = pt.theta;
        let p = h_eval(tp, th);
        let g = gamma_derivs(tp, th);
        prop_assert!(rel(v.H, th * p.h) < 1e-9);
        prop_assert!(rel(v.H1, th.powi(3) * p.h1) < 1e-8);
        prop_assert!(rel(v.H2, th.powi(5) * p.h2) < 1e-8);
        prop_assert!(rel(-v.K / v.G, g.wp) < 1e-9);
    }

    #[test]
    fn series_converges_towards_origin(s in 0.005f64..0.05, c in -1.0f64..1.0) {
        let (x, y) = (s * 0.6, s * c.clamp(-0.99, -0.2));
        let side = Side::Minus;
        let near = (multiscale_exact_at(side, x / 2.0, y / 2.0).H - multiscale_series(side, x / 2.0, y / 2.0).H).abs();
        let far = (multiscale_exact_at(side, x, y).H - multiscale_series(side, x, y).H).abs();
        prop_assert!(near <= far + 1e-15);
    }
}
