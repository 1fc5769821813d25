//! Multiscale description of `h_t` near the critical angle `θ = 1/t`.
//!
//! With `φ = θ²/(θ − 1/t)` one has `θ h_t(θ) = H^±(θ, φ)` where `H^±` is
//! analytic near the origin; `−` applies for `θ < 1/t` and `+` otherwise.

use crate::error::{invalid, Error, Result};
use crate::fit::line_fit;
use crate::jet::Jet;
use crate::phase::{h_eval, multipliers, TimeParam};
use crate::roots::bisect;
use serde::Serialize;
use std::f64::consts::PI;

/// Half-width of the square on which the analytic representation is used.
pub const WINDOW: f64 = 0.3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Minus,
    Plus,
}

impl Side {
    pub fn of(t: TimeParam, theta: f64) -> Side {
        if theta < 1.0 / t.get() {
            Side::Minus
        } else {
            Side::Plus
        }
    }

    fn offset(self) -> f64 {
        match self {
            Side::Minus => 0.0,
            Side::Plus => PI,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MultiscalePoint {
    pub theta: f64,
    pub mvar: f64,
    pub side: Side,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[allow(non_snake_case)]
pub struct MultiscaleValues {
    pub H: f64,
    pub H1: f64,
    pub H2: f64,
    pub G: f64,
    pub K: f64,
}

impl MultiscaleValues {
    pub fn get(&self, q: Quantity) -> f64 {
        match q {
            Quantity::H => self.H,
            Quantity::H1 => self.H1,
            Quantity::H2 => self.H2,
            Quantity::G => self.G,
            Quantity::K => self.K,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Quantity {
    H,
    H1,
    H2,
    G,
    K,
}

impl Quantity {
    pub const ALL: [Quantity; 5] = [Quantity::H, Quantity::H1, Quantity::H2, Quantity::G, Quantity::K];
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RescaledSample {
    pub sigma: f64,
    pub mz_tilde: f64,
    pub my_tilde: f64,
    pub h_tilde: f64,
}

impl RescaledSample {
    /// Distances from the `t → ∞` limits, in the order (m̃ᶻ, m̃ʸ, h̃).
    pub fn deviations(&self) -> [f64; 3] {
        let lim = 1.0 / (1.0 + self.sigma * self.sigma);
        [
            (self.mz_tilde - lim).abs(),
            (self.my_tilde - lim).abs(),
            (self.h_tilde - PI / 2.0 - self.sigma.atan()).abs(),
        ]
    }
}

/// `φ(θ)` with its first two θ-derivatives.
pub fn mvar_eval(t: TimeParam, theta: f64) -> Result<(f64, f64, f64)> {
    let d = theta - 1.0 / t.get();
    if theta == 0.0 || d == 0.0 || !theta.is_finite() {
        return invalid(format!("multiscale variable undefined at theta = {theta}"));
    }
    let tt = t.get() * t.get();
    Ok((theta * theta / d, 1.0 - 1.0 / (tt * d * d), 2.0 / (tt * d * d * d)))
}

/// `sin θ/θ` and `(θ − sin θ cos θ)/θ²` with two derivatives each.
fn trig_factors(theta: f64) -> ([f64; 3], [f64; 3]) {
    if theta.abs() > 1.0 {
        let (s, c) = theta.sin_cos();
        let x = theta;
        let sinc = [
            s / x,
            c / x - s / (x * x),
            -s / x - 2.0 * c / (x * x) + 2.0 * s / (x * x * x),
        ];
        // f2 = 1/x − sin(2x)/(2x²)
        let (s2, c2) = (2.0 * x).sin_cos();
        let f2 = [
            1.0 / x - s2 / (2.0 * x * x),
            -1.0 / (x * x) - c2 / (x * x) + s2 / (x * x * x),
            2.0 / (x * x * x) + 2.0 * s2 / (x * x) + 4.0 * c2 / (x * x * x) - 3.0 * s2 / (x * x * x * x),
        ];
        return (sinc, f2);
    }
    // sinc = Σ (−1)^k x^{2k}/(2k+1)!,  f2 = Σ_{k≥1} (−1)^{k+1} 4^k x^{2k−1}/(2k+1)!
    let mut sinc = [0.0; 3];
    let mut f2 = [0.0; 3];
    let mut fact = 1.0;
    let mut four = 1.0;
    for k in 0..20usize {
        if k > 0 {
            fact *= (2 * k) as f64 * (2 * k + 1) as f64;
            four *= 4.0;
        }
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let n = 2 * k;
        accumulate(&mut sinc, sign / fact, n, theta);
        if k > 0 {
            accumulate(&mut f2, -sign * four / fact, n - 1, theta);
        }
    }
    (sinc, f2)
}

fn accumulate(out: &mut [f64; 3], coef: f64, n: usize, x: f64) {
    let p = |m: usize| if m == 0 { 1.0 } else { x.powi(m as i32) };
    out[0] += coef * p(n);
    if n >= 1 {
        out[1] += coef * n as f64 * p(n - 1);
    }
    if n >= 2 {
        out[2] += coef * (n * (n - 1)) as f64 * p(n - 2);
    }
}

/// `H^±(θ, φ)` as a jet in `(θ, φ)`.
fn h_jet(side: Side, theta: f64, mvar: f64) -> Jet {
    let x = Jet::var_x(theta);
    let p = Jet::var_y(mvar);
    let (s, f) = trig_factors(theta);
    let sinc = x.chain(s[0], s[1], s[2]);
    let f2 = x.chain(f[0], f[1], f[2]);
    let a = p * sinc * sinc / (-(p * f2) + 1.0);
    (-a.atan() + side.offset()) / sinc
}

/// Exact `H`, `H1`, `H2`, `G`, `K` at an arbitrary point `(θ, φ)` of the window.
pub fn multiscale_exact_at(side: Side, theta: f64, mvar: f64) -> MultiscaleValues {
    let j = h_jet(side, theta, mvar);
    let (t, p) = (theta, mvar);
    let (t2, p2) = (t * t, p * p);
    let h = j.v;
    let h1 = -t * h + t2 * j.x + (2.0 * p * t - p2) * j.y;
    let h2 = 2.0 * t2 * h - 2.0 * t2 * t * j.x
        + (-2.0 * t2 * p - 2.0 * t * p2 + 2.0 * p2 * p) * j.y
        + t2 * t2 * j.xx
        + (4.0 * p * t2 * t - 2.0 * p2 * t2) * j.xy
        + (4.0 * p2 * t2 - 4.0 * p2 * p * t + p2 * p2) * j.yy;
    MultiscaleValues {
        H: h,
        H1: h1,
        H2: h2,
        G: t2 * t2 * h * h + h1 * h1,
        K: t2 * t2 * h * h + 2.0 * h1 * h1 - h2 * h,
    }
}

/// Exact multiscale values at the angle `θ` for shear time `t`.
pub fn multiscale_exact(t: TimeParam, theta: f64) -> Result<(MultiscalePoint, MultiscaleValues)> {
    let (mvar, _, _) = mvar_eval(t, theta)?;
    if theta.abs() >= WINDOW || mvar.abs() >= WINDOW {
        return invalid(format!(
            "(theta, mvar) = ({theta}, {mvar}) lies outside the analyticity window {WINDOW}"
        ));
    }
    let side = Side::of(t, theta);
    Ok((MultiscalePoint { theta, mvar, side }, multiscale_exact_at(side, theta, mvar)))
}

/// Truncated Taylor polynomials of `H`, `H1`, `H2`, `G`, `K`.
pub fn multiscale_series(side: Side, theta: f64, mvar: f64) -> MultiscaleValues {
    let (t, p) = (theta, mvar);
    let h2_common = 2.0 * t * p.powi(2) - 2.0 * p.powi(3) + t.powi(4) * p - 9.0 * t.powi(3) * p.powi(2)
        + 53.0 / 3.0 * t.powi(2) * p.powi(3)
        - 14.0 * t * p.powi(4)
        + 4.0 * p.powi(5);
    match side {
        Side::Minus => MultiscaleValues {
            H: -p,
            H1: -t * p + p * p,
            H2: h2_common,
            G: t * t * p * p - 2.0 * t * p.powi(3) + p.powi(4) + 20.0 / 3.0 * t.powi(3) * p.powi(3)
                - 35.0 / 3.0 * t * t * p.powi(4)
                + 8.0 * t * p.powi(5)
                - 2.0 * p.powi(6),
            K: 2.0 * t * t * p * p - 2.0 * t * p.powi(3) + 4.0 * t.powi(3) * p.powi(3)
                - 4.0 * t * t * p.powi(4)
                + 2.0 / 3.0 * p.powi(6),
        },
        Side::Plus => MultiscaleValues {
            H: PI - p + PI * t * t / 6.0,
            H1: -PI * t - t * p + p * p,
            H2: 2.0 * PI * t * t + h2_common,
            G: PI * PI * t * t + 2.0 * PI * t * t * p - 2.0 * PI * t * p * p
                + 2.0 * PI * PI * t.powi(4) / 3.0
                + t * t * p * p
                - 2.0 * t * p.powi(3)
                + p.powi(4),
            K: 6.0 * PI * t * t * p - 6.0 * PI * t * p * p + 2.0 * PI * p.powi(3),
        },
    }
}

/// Remainder orders stated alongside the truncated expansions.
pub fn printed_order(side: Side, q: Quantity) -> f64 {
    match (side, q) {
        (Side::Minus, Quantity::H | Quantity::H1) => 3.0,
        (Side::Minus, Quantity::H2) => 6.0,
        (Side::Minus, Quantity::G | Quantity::K) => 7.0,
        (Side::Plus, Quantity::H | Quantity::H1) => 3.0,
        (Side::Plus, Quantity::H2) => 6.0,
        (Side::Plus, Quantity::G) => 5.0,
        (Side::Plus, Quantity::K) => 3.0,
    }
}

/// Rays used for the order fits: a balanced one and, on the minus side,
/// one dominated by each variable.
pub fn default_rays(side: Side) -> Vec<(f64, f64)> {
    match side {
        Side::Minus => vec![(0.6, -0.8), (1.0, -0.3), (0.3, -1.0)],
        Side::Plus => vec![(0.6, 0.8)],
    }
}

pub const ORDER_SCALES: [f64; 3] = [0.1, 0.05, 0.025];

#[derive(Clone, Debug, Serialize)]
pub struct OrderFit {
    pub side: Side,
    pub quantity: Quantity,
    pub ray: (f64, f64),
    pub printed: f64,
    pub measured: f64,
    /// Relative series error at scale 0.02 along the ray.
    pub rel_err: f64,
}

/// Fits the decay order of `|exact − series|` along the ray `s·(a, b)`.
pub fn remainder_order(side: Side, q: Quantity, ray: (f64, f64), scales: &[f64]) -> OrderFit {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for &s in scales {
        let (x, y) = (s * ray.0, s * ray.1);
        let rem = (multiscale_exact_at(side, x, y).get(q) - multiscale_series(side, x, y).get(q)).abs();
        xs.push(s.ln());
        ys.push(rem.max(f64::MIN_POSITIVE).ln());
    }
    let fit = line_fit(&xs, &ys).expect("at least two distinct scales");
    let (x, y) = (0.02 * ray.0, 0.02 * ray.1);
    let e = multiscale_exact_at(side, x, y).get(q);
    let rel_err = ((e - multiscale_series(side, x, y).get(q)) / e).abs();
    OrderFit { side, quantity: q, ray, printed: printed_order(side, q), measured: fit.slope, rel_err }
}

pub fn remainder_orders() -> Vec<OrderFit> {
    let mut out = Vec::new();
    for side in [Side::Minus, Side::Plus] {
        for q in Quantity::ALL {
            for ray in default_rays(side) {
                out.push(remainder_order(side, q, ray, &ORDER_SCALES));
            }
        }
    }
    out
}

/// Critical-zone functions in the variable `σ = t²(θ − 1/t)`.
pub fn rescaled_critical(t: TimeParam, sigma: f64) -> RescaledSample {
    let tv = t.get();
    let theta = 1.0 / tv + sigma / (tv * tv);
    let m = multipliers(t, theta);
    RescaledSample {
        sigma,
        mz_tilde: m.mz / tv,
        my_tilde: m.my / (tv * tv),
        h_tilde: h_eval(t, theta).h / tv,
    }
}

/// The zero of `h_t′` just to the right of the critical angle.
pub fn theta_star(t: TimeParam) -> Result<f64> {
    let tv = t.get();
    if tv < 10.0 {
        return invalid(format!("theta_star needs a large time, got t = {tv}"));
    }
    let base = 1.0 / tv;
    let scale = tv.powf(-1.5);
    // h′ changes sign inside [1/t + 0.05 t^{−3/2}, 1/t + 20 t^{−3/2}].
    let f = |q: f64| h_eval(t, base + q * scale).h1;
    let (q, _) = bisect(f, 0.05, 20.0, 200).map_err(|_| {
        Error::Bracket(format!("no sign change of h' to the right of 1/t at t = {tv}"))
    })?;
    Ok(base + q * scale)
}
