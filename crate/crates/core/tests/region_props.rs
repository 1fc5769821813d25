//! Bookkeeping properties of the region functionals.

use betaplane::regions::*;
use betaplane::TimeParam;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn l1_functional_is_additive(e in 3.3f64..4.5, z in proptest::bool::ANY) {
        let t = TimeParam::new(10f64.powf(e)).unwrap();
        let which = if z { Which::Z } else { Which::Y };
        let k = kappa_report(t, 0.5, which, 2.0).unwrap();
        let sum: f64 = k.per_region.iter().map(|r| r.k_one).sum();
        prop_assert!((sum - k.k_one).abs() <= 1e-8 * k.k_one);
        let sup = k.per_region.iter().map(|r| r.k_inf).fold(0.0, f64::max);
        prop_assert_eq!(sup, k.k_inf);
    }

    #[test]
    fn table_ratios_are_finite(e in 3.3f64..4.5) {
        let r = table_check(TimeParam::new(10f64.powf(e)).unwrap(), 0.5).unwrap();
        for c in &r.cells {
            prop_assert!(c.sup_ratio.is_finite() && c.sup_ratio > 0.0, "{:?}", c);
            if let Some(i) = c.inf_ratio {
                prop_assert!(i > 0.0 && i <= c.sup_ratio);
            }
        }
    }
}

#[test]
fn partitions_tile_the_circle() {
    for t in [2e3, 1e4, 1e5] {
        let p = partition(TimeParam::new(t).unwrap(), 0.5).unwrap();
        let mut pieces: Vec<(f64, f64)> = p.pieces().iter().map(|(_, iv)| (iv.lo, iv.hi)).collect();
        pieces.sort_by(|a, b| a.0.total_cmp(&b.0));
        for w in pieces.windows(2) {
            assert!((w[1].0 - w[0].1).abs() < 1e-12, "gap or overlap at t={t}: {:?}", w);
        }
        let span = pieces.last().unwrap().1 - pieces[0].0;
        assert!((span - std::f64::consts::PI).abs() < 1e-12, "t={t}: span {span}");
    }
}

#[test]
fn grid_refinement_does_not_lose_the_maximum() {
    let t = TimeParam::new(5e3).unwrap();
    let p = partition(t, 0.5).unwrap();
    for (_, iv) in p.pieces() {
        let f = |x: f64| kappa_inf_density(t, x, Which::Y, 2.0);
        let (_, coarse) = grid_max(f, &region_grid(t, 0.5, iv, 1000));
        let (_, fine) = grid_max(f, &region_grid(t, 0.5, iv, 2000));
        assert!(fine >= coarse * (1.0 - 1e-9), "{fine} < {coarse}");
    }
}
