//! Filon–Clenshaw–Curtis panels for `∫ e^{iωs} g(s) ds` with smooth `g`.
//!
//! `g` is interpolated at nested Chebyshev–Lobatto points (9 and 17 of
//! them) and the oscillatory factor is integrated exactly against the
//! Chebyshev polynomials. The difference of the two interpolants is the
//! basis of the error estimate. Panels that are not oscillatory enough for
//! a stable moment recurrence fall back to Gauss–Kronrod.

use crate::quad::{gk21, Panel};
use num_complex::Complex64;
use std::f64::consts::PI;

const N: usize = 16;

/// Smallest `|ω|·half-width` for which the moment recurrence is used.
pub const MIN_OSCILLATION: f64 = 64.0;

/// `∫_{−1}^{1} T_k(x) e^{iWx} dx` for `k = 0..=N`.
fn chebyshev_moments(w: f64) -> [Complex64; N + 1] {
    let iw = Complex64::new(0.0, w);
    let ep = Complex64::new(0.0, w).exp();
    let em = ep.conj();
    let mut m = [Complex64::new(0.0, 0.0); N + 1];
    m[0] = (ep - em) / iw;
    for k in 1..=N {
        // ∫ U_{k−1} e^{iWx} = 2 Σ_{0<j≤k−1, j≡k−1} M_j + [k−1 even] M_0
        let mut u = Complex64::new(0.0, 0.0);
        let mut j = k as isize - 1;
        while j > 0 {
            u += 2.0 * m[j as usize];
            j -= 2;
        }
        if j == 0 {
            u += m[0];
        }
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        m[k] = (ep - sign * em) / iw - u * (k as f64) / iw;
    }
    m
}

/// Chebyshev coefficients (with the end terms already halved) of the
/// interpolant through `vals` at `x_j = cos(jπ/n)`.
fn chebyshev_coefficients(vals: &[Complex64], n: usize) -> Vec<Complex64> {
    let mut c = vec![Complex64::new(0.0, 0.0); n + 1];
    for (k, ck) in c.iter_mut().enumerate() {
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, v) in vals.iter().enumerate() {
            let w = if j == 0 || j == n { 0.5 } else { 1.0 };
            acc += *v * (w * ((j * k) as f64 * PI / n as f64).cos());
        }
        let scale = if k == 0 || k == n { 1.0 / n as f64 } else { 2.0 / n as f64 };
        *ck = acc * scale;
    }
    c
}

/// One panel of `∫_a^b e^{iωs} g(s) ds`; returns the panel and the number of
/// evaluations of `g`.
pub fn filon_panel<G: FnMut(f64) -> Complex64>(g: &mut G, omega: f64, a: f64, b: f64) -> (Panel<Complex64>, usize) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let w = omega * h;
    if w.abs() < MIN_OSCILLATION {
        let mut f = |s: f64| Complex64::new(0.0, omega * s).exp() * g(s);
        return (gk21(&mut f, a, b), 21);
    }
    let vals: Vec<Complex64> = (0..=N).map(|j| g(c + h * (j as f64 * PI / N as f64).cos())).collect();
    let coarse: Vec<Complex64> = vals.iter().step_by(2).copied().collect();
    let fine_c = chebyshev_coefficients(&vals, N);
    let coarse_c = chebyshev_coefficients(&coarse, N / 2);
    let mom = chebyshev_moments(w);
    let phase = Complex64::new(0.0, omega * c).exp() * h;
    let fine: Complex64 = fine_c.iter().zip(mom.iter()).map(|(x, m)| x * m).sum::<Complex64>() * phase;
    let rough: Complex64 = coarse_c.iter().zip(mom.iter()).map(|(x, m)| x * m).sum::<Complex64>() * phase;
    let scale: f64 = vals.iter().map(|v| v.norm()).fold(0.0, f64::max) * 2.0 * h.abs();
    // Interpolation error decays geometrically, so the finer rule is
    // roughly as far off as the square of the coarse discrepancy.
    let diff = (fine - rough).norm();
    let error = if scale > 0.0 {
        diff.min(1e3 * diff * diff / scale).max(1e-15 * scale)
    } else {
        diff
    };
    (Panel { a, b, value: fine, error }, N + 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::{integrate_with, Tolerance};

    #[test]
    fn moments_match_direct_quadrature() {
        for w in [64.0, 100.0, 1e3, -300.0] {
            let m = chebyshev_moments(w);
            for (k, mk) in m.iter().enumerate() {
                let r = crate::quad::integrate(
                    |x: f64| Complex64::new(0.0, w * x).exp() * (k as f64 * x.acos()).cos(),
                    &(0..=64).map(|i| -1.0 + i as f64 / 32.0).collect::<Vec<_>>(),
                    &Tolerance::new(1e-15, 1e-14),
                );
                assert!((r.value - mk).norm() < 1e-13, "w={w} k={k}: {} vs {}", r.value, mk);
            }
        }
    }

    #[test]
    fn exact_for_polynomial_amplitude() {
        // ∫_0^1 s² e^{iωs} ds in closed form
        let om = 500.0;
        let mut g = |s: f64| Complex64::new(s * s, 0.0);
        let (p, _) = filon_panel(&mut g, om, 0.0, 1.0);
        let i = Complex64::new(0.0, 1.0);
        let e = (i * om).exp();
        let exact = e / (i * om) - 2.0 * (e / (i * om).powi(2) - (e - 1.0) / (i * om).powi(3));
        assert!((p.value - exact).norm() < 1e-15);
        assert!(p.error < 1e-14);
    }

    #[test]
    fn adaptive_filon_on_decaying_amplitude() {
        // ∫_1^∞ e^{iωs}/s² ds truncated at 2^12, compared with dense GK.
        let om = 200.0;
        let breaks: Vec<f64> = (0..=12).map(|k| 2f64.powi(k)).collect();
        let r = integrate_with(
            |a, b| filon_panel(&mut |s: f64| Complex64::new(1.0 / (s * s), 0.0), om, a, b),
            &breaks,
            &Tolerance::new(1e-13, 0.0),
        );
        let fine: Vec<f64> = (0..=40_960).map(|k| 1.0 + k as f64 * (4096.0 - 1.0) / 40_960.0).collect();
        let reference = crate::quad::integrate(
            |s: f64| Complex64::new(0.0, om * s).exp() / (s * s),
            &fine,
            &Tolerance::new(1e-14, 0.0).with_max_panels(200_000),
        );
        assert!((r.value - reference.value).norm() < 1e-12, "{} vs {}", r.value, reference.value);
        assert!(r.evaluations < 2000, "{} evaluations", r.evaluations);
    }
}
