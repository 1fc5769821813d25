//! The acceptance suite. Each check runs a fixed, deterministic experiment
//! and compares what it measures against pinned tolerances.

use betaplane::{Error, Result};
use betaplane::expansions::{remainder_orders, rescaled_critical, theta_star};
use betaplane::figures::{figure, recheck_csv, FigureKind};
use betaplane::fit::power_fit;
use betaplane::integrator::{
    decay_sweep, default_dyadic_range, dyadic_contributions, mode_ode_oracle, mode_phase, per_mode_damping, Gaussian,
    QuadConfig,
};
use betaplane::phase::{gamma_derivs, h_complex_log, psi_eval, w_lift, TimeParam};
use betaplane::regions::{kappa_report, scaling_fit, table_check, LogCorrection, RegionName, TableQuantity, Which};
use betaplane::stationary::{angle_distance, stationary_points};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::f64::consts::PI;
use std::time::Instant;

pub const CHECK_IDS: [u32; 11] = [1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11];

/// One measured quantity with its admissible open interval.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckItem {
    pub name: String,
    pub measured: f64,
    pub lower: Option<f64>,
    pub upper: Option<f64>,
    pub pass: bool,
}

impl CheckItem {
    fn new(name: impl Into<String>, measured: f64, lower: Option<f64>, upper: Option<f64>) -> Self {
        let pass = !measured.is_nan() && lower.map_or(true, |l| measured > l) && upper.map_or(true, |u| measured < u);
        CheckItem { name: name.into(), measured, lower, upper, pass }
    }

    fn below(name: impl Into<String>, measured: f64, upper: f64) -> Self {
        Self::new(name, measured, None, Some(upper))
    }

    fn above(name: impl Into<String>, measured: f64, lower: f64) -> Self {
        Self::new(name, measured, Some(lower), None)
    }

    fn within(name: impl Into<String>, measured: f64, lower: f64, upper: f64) -> Self {
        Self::new(name, measured, Some(lower), Some(upper))
    }
}

/// Outcome of one check. `measured` counts the failing items and
/// `threshold` is the number allowed, always zero.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckReport {
    pub check_id: u32,
    pub title: String,
    #[serde(rename = "paper_ref")]
    pub claim: String,
    pub measured: f64,
    pub threshold: f64,
    pub pass: bool,
    pub seconds: f64,
    pub items: Vec<CheckItem>,
}

impl CheckReport {
    pub fn failing(&self) -> impl Iterator<Item = &CheckItem> {
        self.items.iter().filter(|i| !i.pass)
    }

    /// `PASS`/`FAIL` line with the first few failing items.
    pub fn summary_line(&self) -> String {
        let status = if self.pass { "PASS" } else { "FAIL" };
        let mut line = format!("{status} [{:>2}] {} ({:.1} s)", self.check_id, self.title, self.seconds);
        let fails: Vec<String> = self
            .failing()
            .take(4)
            .map(|i| {
                let lo = i.lower.map_or(String::new(), |l| format!("{l:.3e} < "));
                let hi = i.upper.map_or(String::new(), |u| format!(" < {u:.3e}"));
                format!("{}: need {lo}{:.4e}{hi}", i.name, i.measured)
            })
            .collect();
        if !fails.is_empty() {
            let more = self.failing().count().saturating_sub(fails.len());
            line.push_str(" | ");
            line.push_str(&fails.join("; "));
            if more > 0 {
                line.push_str(&format!("; and {more} more"));
            }
        }
        line
    }
}

struct CheckDef {
    title: &'static str,
    claim: &'static str,
    limit_s: f64,
    run: fn() -> Result<Vec<CheckItem>>,
}

fn check_def(id: u32) -> Option<CheckDef> {
    let s = |title, claim, limit_s, run| Some(CheckDef { title, claim, limit_s, run });
    match id {
        1 => s(
            "analytic structure",
            "psi_t > 0; 2 psi'^2 - psi psi'' > 0; Im[conj(gamma') gamma''] < 0; W decreasing with total increment 2 pi on [0, pi]",
            10.0,
            analytic_structure,
        ),
        2 => s(
            "stationary map",
            "W inversion round trip < 1e-9 and |grad Psi| < 1e-9 (1 + rho) max(1, |gamma'|) on 1000 draws",
            30.0,
            stationary_map,
        ),
        3 => s(
            "mode oracle",
            "closed-form mode phase agrees with RK4 integration of the mode ODE to 1e-8",
            60.0,
            mode_oracle,
        ),
        4 => s(
            "expansion orders",
            "remainders of the ten truncated multiscale expansions decay at the stated orders (+-0.5) with relative error <= 1e-3 at scale 0.02",
            60.0,
            expansion_orders,
        ),
        5 => s(
            "rescaled limits",
            "deviations of the rescaled m^z, m^y, h from their limits on |sigma| <= 10 halve when t doubles (+-30%)",
            10.0,
            rescaled_limits,
        ),
        6 => s(
            "theta_star asymptotics",
            "theta*_t - 1/t ~ t^(-3/2) / sqrt(pi)",
            10.0,
            theta_star_asymptotics,
        ),
        7 => s(
            "region bounds table",
            "every region/quantity sup ratio finite and varying < 10x over t; two-sided cells bracketed; integrated inverse speed ratio stable",
            300.0,
            region_table,
        ),
        8 => s(
            "kappa scalings",
            "kappa^{z,inf} ~ t^-1.5, kappa^{y,inf} ~ t^-1, kappa^{z,1} t^1.5/ln(t+2) and kappa^{y,1} t/ln(t+2) bounded, kappa^$ / t^4 bounded",
            300.0,
            kappa_scalings,
        ),
        9 => s(
            "decay rates",
            "phi_y ~ ln(t+2)/t and phi_z ~ ln(t+2)/t^1.5 for Gaussian data at rho = 1",
            1800.0,
            decay_rates,
        ),
        10 => s(
            "dyadic decomposition",
            "sum of dyadic pieces reproduces the direct integral to 1e-3; per-mode damping ratio <= 2",
            600.0,
            dyadic_diagnostic,
        ),
        11 => s(
            "figure datasets",
            "figure CSVs re-evaluate to 1e-10",
            10.0,
            figure_datasets,
        ),
        _ => None,
    }
}

/// Run one check. Numerical failures inside the experiment are returned as
/// errors rather than as failing items.
pub fn run_check(id: u32) -> Result<CheckReport> {
    let Some(sp) = check_def(id) else {
        return Err(Error::InvalidArgument(format!("no check with id {id}; ids are 1..=11")));
    };
    let start = Instant::now();
    let mut items = (sp.run)()?;
    let seconds = start.elapsed().as_secs_f64();
    items.push(CheckItem::below("runtime_s", seconds, sp.limit_s));
    let failing = items.iter().filter(|i| !i.pass).count();
    Ok(CheckReport {
        check_id: id,
        title: sp.title.to_string(),
        claim: sp.claim.to_string(),
        measured: failing as f64,
        threshold: 0.0,
        pass: failing == 0,
        seconds,
        items,
    })
}

fn tp(t: f64) -> TimeParam {
    TimeParam::new(t).expect("suite times are positive")
}

fn linspace(a: f64, b: f64, n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |k| a + (b - a) * k as f64 / (n - 1) as f64)
}

fn spread(v: &[f64]) -> f64 {
    let mx = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mn = v.iter().copied().fold(f64::INFINITY, f64::min);
    if v.iter().all(|x| x.is_finite()) && mn > 0.0 {
        mx / mn
    } else {
        f64::INFINITY
    }
}

/// θ-grid on `[0, π]` that resolves both critical scales.
fn structure_grid(t: f64) -> Vec<f64> {
    let c = 1.0 / t;
    let mut g: Vec<f64> = linspace(0.0, PI, 10_001).collect();
    g.extend(linspace(0.0, c, 2001));
    g.extend(linspace(-200.0, 200.0, 4001).map(|s| c + s / (t * t)));
    g.extend(linspace(0.0, 40.0, 2001).map(|q| c + q * t.powf(-1.5)));
    g.extend(linspace(c.ln(), 0.0, 2001).map(f64::exp));
    g.retain(|x| (0.0..=PI).contains(x));
    g.sort_by(f64::total_cmp);
    g.dedup();
    g
}

/// Change of `arg γ′` from `a` to `b`, reduced to `(−π, π]`.
fn wrapped_step(t: TimeParam, a: f64, b: f64) -> f64 {
    let d = gamma_derivs(t, b).g1.arg() - gamma_derivs(t, a).g1.arg();
    d - 2.0 * PI * (d / (2.0 * PI)).round()
}

/// Bisect grid gaps until `arg γ′` moves by less than 0.5 across each, so
/// that unwrapping cannot skip a turn. Near `θ*` the argument turns on a
/// scale far below the base grid spacing.
fn refine_unwrap(t: TimeParam, grid: Vec<f64>) -> Vec<f64> {
    let mut out = vec![grid[0]];
    for w in grid.windows(2) {
        let mut stack = vec![(w[0], w[1], 0)];
        while let Some((a, b, depth)) = stack.pop() {
            if depth < 60 && wrapped_step(t, a, b).abs() > 0.5 {
                let m = 0.5 * (a + b);
                stack.push((m, b, depth + 1));
                stack.push((a, m, depth + 1));
            } else {
                out.push(b);
            }
        }
    }
    out
}

fn analytic_structure() -> Result<Vec<CheckItem>> {
    let mut items = Vec::new();
    for t in [1.0, 10.0, 100.0, 1e3, 1e4] {
        let tt = tp(t);
        let mut psi_min = f64::INFINITY;
        let mut convex_min = f64::INFINITY;
        for z in linspace(-50.0 * t, 50.0 * t, 20_001) {
            let (p, p1, p2) = psi_eval(tt, z);
            psi_min = psi_min.min(p);
            let q = 2.0 * p1 * p1 - p * p2;
            convex_min = convex_min.min(q / (p1 * p1 + (p * p2).abs()));
        }
        items.push(CheckItem::above(format!("t={t}: min psi"), psi_min, 0.0));
        items.push(CheckItem::above(format!("t={t}: min normalised 2psi'^2-psi psi''"), convex_min, 0.0));

        let grid = refine_unwrap(tt, structure_grid(t));
        let mut curv_max = f64::NEG_INFINITY;
        let mut step_max = f64::NEG_INFINITY;
        let mut jump_max = 0.0f64;
        let mut lift_dev = 0.0f64;
        let mut total = 0.0;
        let mut unwrapped = PI;
        for (k, &x) in grid.iter().enumerate() {
            let g = gamma_derivs(tt, x);
            curv_max = curv_max.max(g.curv / (g.g1.norm() * g.g2.norm()));
            if k > 0 {
                let d = wrapped_step(tt, grid[k - 1], x);
                step_max = step_max.max(d);
                jump_max = jump_max.max(d.abs());
                total += d;
                unwrapped += d;
                if x < PI {
                    lift_dev = lift_dev.max((w_lift(tt, x) - unwrapped).abs());
                }
            }
        }
        items.push(CheckItem::below(format!("t={t}: max normalised curvature"), curv_max, 0.0));
        items.push(CheckItem::below(format!("t={t}: largest step of arg gamma' (rounding band)"), step_max, 1e-12));
        items.push(CheckItem::below(format!("t={t}: unwrap resolution"), jump_max, PI / 2.0));
        items.push(CheckItem::below(format!("t={t}: | |increment| - 2pi |"), (total.abs() - 2.0 * PI).abs(), 1e-9));
        items.push(CheckItem::below(format!("t={t}: lift vs unwrapped argument"), lift_dev, 1e-9));
        items.push(CheckItem::above(format!("t={t}: grid points"), grid.len() as f64, 1e4));
    }
    Ok(items)
}

fn stationary_map() -> Result<Vec<CheckItem>> {
    let mut rng = ChaCha8Rng::seed_from_u64(20_240_917);
    let mut round_trip = 0.0f64;
    let mut grad = 0.0f64;
    let mut pi_shift = 0.0f64;
    for _ in 0..1000 {
        let t = 10f64.powf(rng.gen_range(0.0..4.0));
        let rho = 10f64.powf(rng.gen_range(-1.0..1.0));
        let alpha = rng.gen_range(-PI..PI);
        let tt = tp(t);
        let (a, b) = stationary_points(tt, rho, alpha)?;
        let g = gamma_derivs(tt, a.theta);
        let back = Complex64::from_polar(rho, alpha) - g.g1 / (a.r * a.r);
        round_trip = round_trip.max(angle_distance(g.w, alpha)).max(back.norm() / rho);
        for p in [a, b] {
            grad = grad.max(p.grad_norm / ((1.0 + rho) * g.g1.norm().max(1.0)));
        }
        pi_shift = pi_shift.max((b.theta - a.theta - PI).abs());
    }
    Ok(vec![
        CheckItem::below("max round-trip residual", round_trip, 1e-9),
        CheckItem::below("max |grad Psi| / ((1+rho) max(1,|gamma'|))", grad, 1e-9),
        CheckItem::below("max |theta_2 - theta_1 - pi|", pi_shift, 1e-12),
    ])
}

fn mode_oracle() -> Result<Vec<CheckItem>> {
    let ts = [0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0, 128.0, 256.0];
    let xis = [-3.0, -1.0, -0.5, -0.2, -0.05, 0.05, 0.2, 0.5, 1.0, 3.0];
    let etas = [-20.0, -5.0, -1.0, 0.0, 0.5, 1.0, 3.0, 10.0, 50.0, 200.0];
    let mut worst = 0.0f64;
    let mut modulus = 0.0f64;
    let mut count = 0usize;
    for &t in &ts {
        for &xi in &xis {
            for &eta in &etas {
                let f = mode_ode_oracle(t, xi, eta, 1000)?;
                let exact = Complex64::from_polar(1.0, mode_phase(t, xi, eta)?);
                worst = worst.max((f - exact).norm());
                modulus = modulus.max((f.norm() - 1.0).abs());
                count += 1;
            }
        }
    }
    Ok(vec![
        CheckItem::below("max |ODE - exp(i Phi)|", worst, 1e-8),
        CheckItem::below("max ||ODE| - 1|", modulus, 1e-10),
        CheckItem::above("grid points", count as f64, 999.0),
    ])
}

fn expansion_orders() -> Result<Vec<CheckItem>> {
    let mut items = Vec::new();
    for f in remainder_orders() {
        let side = match f.side {
            betaplane::expansions::Side::Minus => "-",
            betaplane::expansions::Side::Plus => "+",
        };
        let label = format!("{:?}{side} ray ({}, {})", f.quantity, f.ray.0, f.ray.1);
        items.push(CheckItem::within(format!("{label}: order"), f.measured, f.printed - 0.5, f.printed + 0.5));
        items.push(CheckItem::below(format!("{label}: rel err at 0.02"), f.rel_err, 1e-3));
    }
    Ok(items)
}

fn rescaled_limits() -> Result<Vec<CheckItem>> {
    let ts = [1e3, 2e3, 4e3, 8e3, 1.6e4];
    let sup: Vec<[f64; 3]> = ts
        .iter()
        .map(|&t| {
            let mut s = [0.0f64; 3];
            for sigma in linspace(-10.0, 10.0, 4001) {
                let d = rescaled_critical(tp(t), sigma).deviations();
                for k in 0..3 {
                    s[k] = s[k].max(d[k]);
                }
            }
            s
        })
        .collect();
    let names = ["m^z", "m^y", "h"];
    let mut items = Vec::new();
    for w in 0..ts.len() - 1 {
        for k in 0..3 {
            items.push(CheckItem::within(
                format!("{} t={}->{}: halving ratio", names[k], ts[w], ts[w + 1]),
                sup[w][k] / sup[w + 1][k],
                1.4,
                2.6,
            ));
        }
    }
    Ok(items)
}

fn theta_star_asymptotics() -> Result<Vec<CheckItem>> {
    let ts: Vec<f64> = (4..=10).map(|k| 10f64.powf(k as f64 / 2.0)).collect();
    let mut gaps = Vec::new();
    for &t in &ts {
        gaps.push(theta_star(tp(t))? - 1.0 / t);
    }
    let fit = power_fit(&ts, &gaps)?;
    let t_last = ts[ts.len() - 1];
    let coefficient = gaps[gaps.len() - 1] * t_last.powf(1.5);
    let target = 1.0 / PI.sqrt();
    Ok(vec![
        CheckItem::within("exponent", fit.slope, -1.55, -1.45),
        CheckItem::within("coefficient / (1/sqrt(pi)) at t=1e5", coefficient / target, 0.8, 1.2),
    ])
}

fn region_table() -> Result<Vec<CheckItem>> {
    let ts = [2e3, 8e3, 3.2e4];
    let reports = ts.iter().map(|&t| table_check(tp(t), 0.5)).collect::<Result<Vec<_>>>()?;
    let mut items = Vec::new();
    for region in RegionName::ALL {
        for q in TableQuantity::ALL {
            let sups: Vec<f64> = reports.iter().map(|r| r.cell(q, region).sup_ratio).collect();
            let name = format!("{} / {}", region.label(), q.label());
            items.push(CheckItem::below(format!("{name}: sup variation"), spread(&sups), 10.0));
            if q.two_sided(region) {
                let inf = reports
                    .iter()
                    .map(|r| r.cell(q, region).inf_ratio.unwrap_or(0.0))
                    .fold(f64::INFINITY, f64::min);
                items.push(CheckItem::above(format!("{name}: min inf ratio"), inf, 0.0));
            }
        }
    }
    let integral: Vec<f64> = reports.iter().map(|r| r.integral_ratio).collect();
    items.push(CheckItem::below("integrated inverse speed: ratio variation", spread(&integral), 10.0));
    Ok(items)
}

fn kappa_scalings() -> Result<Vec<CheckItem>> {
    let ts: Vec<f64> = (0..6).map(|k| 2e3 * 2f64.powi(k)).collect();
    let mut z = Vec::new();
    let mut y = Vec::new();
    for &t in &ts {
        z.push(kappa_report(tp(t), 0.5, Which::Z, 2.0)?);
        y.push(kappa_report(tp(t), 0.5, Which::Y, 2.0)?);
    }
    let inf_z: Vec<(f64, f64)> = z.iter().map(|k| (k.t, k.k_inf)).collect();
    let inf_y: Vec<(f64, f64)> = y.iter().map(|k| (k.t, k.k_inf)).collect();
    let fz = scaling_fit(&inf_z, LogCorrection::None)?;
    let fy = scaling_fit(&inf_y, LogCorrection::None)?;
    let one_z: Vec<f64> = z.iter().map(|k| k.k_one * k.t.powf(1.5) / (k.t + 2.0).ln()).collect();
    let one_y: Vec<f64> = y.iter().map(|k| k.k_one * k.t / (k.t + 2.0).ln()).collect();
    let dollar: Vec<f64> = z.iter().chain(&y).map(|k| k.k_dollar / k.t.powi(4)).collect();
    let growth = |v: &[f64]| v.iter().copied().fold(0.0, f64::max) / v[0];
    Ok(vec![
        CheckItem::within("kappa^{z,inf} exponent", fz.exponent, -1.65, -1.35),
        CheckItem::within("kappa^{y,inf} exponent", fy.exponent, -1.15, -0.85),
        CheckItem::below("kappa^{z,1} t^1.5/ln(t+2): max/min", spread(&one_z), 5.0),
        CheckItem::below("kappa^{y,1} t/ln(t+2): max/min", spread(&one_y), 5.0),
        CheckItem::below("kappa^$ / t^4: max / first", growth(&dollar[..ts.len()]).max(growth(&dollar[ts.len()..])), 5.0),
    ])
}

fn decay_rates() -> Result<Vec<CheckItem>> {
    let ts: Vec<f64> = (2..=8).map(|k| 2f64.powi(k)).collect();
    let points = [(1.0, 0.0), (1.0, PI / 3.0)];
    let fits = decay_sweep(&points, &ts, &Gaussian, &QuadConfig::default())?;
    let mut items = Vec::new();
    for f in &fits {
        let label = format!("alpha={:.4}", f.point.1);
        items.push(CheckItem::below(format!("{label}: failed times"), f.failures.len() as f64, 0.5));
        items.push(CheckItem::within(format!("{label}: phi_y exponent"), f.exponent_y, -1.15, -0.85));
        items.push(CheckItem::within(format!("{label}: phi_z exponent"), f.exponent_z, -1.65, -1.35));
        let worst = f
            .samples
            .iter()
            .map(|s| (s.err_z / s.phi_z.norm()).max(s.err_y / s.phi_y.norm()))
            .fold(0.0, f64::max);
        items.push(CheckItem::below(format!("{label}: max error / value"), worst, 0.1));
    }
    Ok(items)
}

fn dyadic_diagnostic() -> Result<Vec<CheckItem>> {
    let mut items = Vec::new();
    let cfg = QuadConfig::default();
    for t in [10.0, 50.0] {
        for rho in [0.5, 1.0, 5.0] {
            let r = dyadic_contributions(t, rho, 0.3, &Gaussian, default_dyadic_range(rho), &cfg)?;
            items.push(CheckItem::below(format!("t={t} rho={rho}: relative mismatch"), r.missing_rel, 1e-3));
        }
    }
    let mut worst = 0.0f64;
    for t in [1.0, 2.0, 5.0, 10.0, 30.0, 100.0, 1e3] {
        for xi in [-10.0, -1.0, -0.1, 0.01, 0.1, 1.0, 10.0] {
            let mut etas: Vec<f64> = linspace(-200.0, 200.0, 401).collect();
            etas.push(t * xi);
            etas.push(0.5 * t * xi);
            for eta in etas {
                worst = worst.max(per_mode_damping(t, xi, eta)?);
            }
        }
    }
    items.push(CheckItem::below("max per-mode damping ratio", worst, 2.0));
    Ok(items)
}

fn figure_datasets() -> Result<Vec<CheckItem>> {
    let mut items = Vec::new();
    for kind in FigureKind::ALL {
        let csv = figure(kind, &kind.default_times())?.to_csv();
        items.push(CheckItem::below(format!("{}: max re-evaluation deviation", kind.name()), recheck_csv(kind, &csv)?, 1e-10));
    }
    // Second route for h_t through the complex logarithm, away from θ ∈ πℤ.
    let fig = figure(FigureKind::Ht, &FigureKind::Ht.default_times())?;
    let mut worst = 0.0f64;
    for r in &fig.rows {
        if r[1].sin().abs() > 0.2 {
            let alt = h_complex_log(tp(r[0]), r[1]);
            worst = worst.max((alt - r[2]).abs() / r[2].abs().max(1.0));
        }
    }
    items.push(CheckItem::below("ht: complex-log route deviation", worst, 1e-10));
    Ok(items)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn items_judge_open_intervals() {
        assert!(CheckItem::within("a", 0.5, 0.0, 1.0).pass);
        assert!(!CheckItem::within("a", 1.0, 0.0, 1.0).pass);
        assert!(!CheckItem::below("a", f64::NAN, 1.0).pass);
        assert!(CheckItem::above("a", f64::INFINITY, 0.0).pass);
    }

    #[test]
    fn unknown_id_is_rejected() {
        assert!(run_check(0).is_err());
        assert!(run_check(12).is_err());
    }

    #[test]
    fn fast_checks_pass() {
        for id in [3, 5, 6, 11] {
            let r = run_check(id).unwrap();
            assert!(r.pass, "{}", r.summary_line());
        }
    }

    #[test]
    fn spread_handles_degenerate_input() {
        assert_eq!(spread(&[2.0, 4.0]), 2.0);
        assert!(spread(&[0.0, 1.0]).is_infinite());
        assert!(spread(&[1.0, f64::INFINITY]).is_infinite());
    }
}
