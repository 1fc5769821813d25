//! Decomposition of `[−π/2, π/2]` around the critical angle, the κ
//! functionals that feed the oscillatory-integral bound, and the
//! region-by-region bounds on multipliers and phase.

use crate::error::{invalid, Error, Result};
use crate::expansions::theta_star;
use crate::fit::line_fit;
use crate::phase::{gamma_derivs, multipliers, TimeParam};
use crate::quad::{integrate, Tolerance};
use crate::roots::golden_max;
use serde::Serialize;
use std::f64::consts::FRAC_PI_2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RegionName {
    Bulk,
    Left,
    Critical,
    InnerRight,
    CriticalRight,
    OuterRight,
}

impl RegionName {
    pub const ALL: [RegionName; 6] = [
        RegionName::Bulk,
        RegionName::Left,
        RegionName::Critical,
        RegionName::InnerRight,
        RegionName::CriticalRight,
        RegionName::OuterRight,
    ];

    pub fn label(self) -> &'static str {
        match self {
            RegionName::Bulk => "bulk",
            RegionName::Left => "left",
            RegionName::Critical => "critical",
            RegionName::InnerRight => "inner_right",
            RegionName::CriticalRight => "critical_right",
            RegionName::OuterRight => "outer_right",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RegionPartition {
    pub t: f64,
    pub delta: f64,
    pub bulk: [Interval; 2],
    pub left: Interval,
    pub critical: Interval,
    pub inner_right: Interval,
    pub critical_right: Interval,
    pub outer_right: Interval,
}

impl RegionPartition {
    /// All pieces in increasing order; `bulk` contributes two arcs.
    pub fn pieces(&self) -> Vec<(RegionName, Interval)> {
        vec![
            (RegionName::Bulk, self.bulk[0]),
            (RegionName::Left, self.left),
            (RegionName::Critical, self.critical),
            (RegionName::InnerRight, self.inner_right),
            (RegionName::CriticalRight, self.critical_right),
            (RegionName::OuterRight, self.outer_right),
            (RegionName::Bulk, self.bulk[1]),
        ]
    }

    pub fn intervals(&self, name: RegionName) -> Vec<Interval> {
        self.pieces().into_iter().filter(|(n, _)| *n == name).map(|(_, i)| i).collect()
    }
}

/// Splits `[−π/2, π/2]` into six regions.
///
/// The right side of the critical zone is cut at `1/t + δ t^{−3/2}` and
/// `1/t + δ^{−1} t^{−3/2}`, bracketing the critical point `θ*_t`. This needs
/// `t > δ^{−4}`.
pub fn partition(t: TimeParam, delta: f64) -> Result<RegionPartition> {
    if !(delta > 0.0 && delta < 1.0) {
        return invalid(format!("delta must lie in (0, 1), got {delta}"));
    }
    let tv = t.get();
    let a = 1.0 / tv;
    let crit = 1.0 / (delta * tv * tv);
    let inner = a + delta * tv.powf(-1.5);
    let outer = a + tv.powf(-1.5) / delta;
    let cuts = [-FRAC_PI_2, -delta, a - crit, a + crit, inner, outer, delta, FRAC_PI_2];
    if cuts.windows(2).any(|w| w[0] >= w[1]) {
        return invalid(format!(
            "regions overlap for t = {tv}, delta = {delta} (need t > delta^-4 and 1/t + 1/(delta t^1.5) < delta)"
        ));
    }
    let iv = |i: usize| Interval { lo: cuts[i], hi: cuts[i + 1] };
    Ok(RegionPartition {
        t: tv,
        delta,
        bulk: [iv(0), iv(6)],
        left: iv(1),
        critical: iv(2),
        inner_right: iv(3),
        critical_right: iv(4),
        outer_right: iv(5),
    })
}

/// Every pointwise quantity bounded region by region.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PointQuantities {
    pub theta: f64,
    pub mz: f64,
    pub dmz: f64,
    pub my: f64,
    pub dmy: f64,
    /// |γ′|
    pub g1: f64,
    /// |γ″|/|γ′|
    pub g2_ratio: f64,
    /// |W′|
    pub wp: f64,
}

pub fn point_quantities(t: TimeParam, theta: f64) -> PointQuantities {
    let m = multipliers(t, theta);
    let g = gamma_derivs(t, theta);
    let n1 = g.g1.norm();
    PointQuantities {
        theta,
        mz: m.mz,
        dmz: m.dmz,
        my: m.my,
        dmy: m.dmy,
        g1: n1,
        g2_ratio: g.g2.norm() / n1,
        wp: g.wp.abs(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Which {
    Z,
    Y,
}

impl Which {
    fn pick(self, q: &PointQuantities) -> (f64, f64) {
        match self {
            Which::Z => (q.mz, q.dmz),
            Which::Y => (q.my, q.dmy),
        }
    }
}

/// Integrand of the sup-norm functional.
pub fn kappa_inf_density(t: TimeParam, theta: f64, which: Which, beta: f64) -> f64 {
    let q = point_quantities(t, theta);
    let (m, _) = which.pick(&q);
    (1.0 + q.g2_ratio) * (m / q.wp).abs() / q.g1.powf(beta)
}

/// Integrand of the L¹ functional.
pub fn kappa_one_density(t: TimeParam, theta: f64, which: Which) -> f64 {
    let q = point_quantities(t, theta);
    let (m, dm) = which.pick(&q);
    ((1.0 + q.g2_ratio) * m + dm).abs() / q.g1
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RegionKappa {
    pub region: RegionName,
    pub k_inf: f64,
    pub k_one: f64,
    pub dm_l1: f64,
    pub g1_sup: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KappaReport {
    pub which: Which,
    pub t: f64,
    pub delta: f64,
    pub beta: f64,
    pub k_inf: f64,
    pub k_one: f64,
    pub k_dollar: f64,
    pub per_region: Vec<RegionKappa>,
}

/// Sample points for `[lo, hi]`: uniform, geometric in the distance to
/// `0` and to `1/t`, and dense where the critical scales live.
pub fn region_grid(t: TimeParam, delta: f64, iv: Interval, n: usize) -> Vec<f64> {
    let tv = t.get();
    let (lo, hi) = (iv.lo, iv.hi);
    let mut pts = Vec::with_capacity(6 * n);
    for i in 0..=n {
        pts.push(lo + (hi - lo) * i as f64 / n as f64);
    }
    let span = hi - lo;
    let dmin = 1e-6 / (tv * tv);
    for c in [0.0, 1.0 / tv] {
        let dmax = (hi - c).abs().max((lo - c).abs()).max(span);
        let ratio = (dmax / dmin).powf(1.0 / n as f64);
        let mut d = dmin;
        for _ in 0..=n {
            pts.push(c + d);
            pts.push(c - d);
            d *= ratio;
        }
    }
    // At least 32 points per critical width, and per t^{−3/2}/δ.
    for w in [1.0 / (delta * tv * tv), tv.powf(-1.5) / delta] {
        let k = ((span / w) * 32.0).ceil().min(20.0 * n as f64) as usize;
        for i in 0..=k {
            pts.push(lo + span * i as f64 / k.max(1) as f64);
        }
    }
    pts.push(1.0 / tv);
    pts.push((1.0 / tv).atan());
    if let Ok(ts) = theta_star(t) {
        pts.push(ts);
    }
    pts.retain(|x| *x >= lo && *x <= hi);
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    pts
}

/// Maximum of `f` over `[lo, hi]`: grid search then golden-section polish.
pub fn grid_max(f: impl Fn(f64) -> f64, grid: &[f64]) -> (f64, f64) {
    let vals: Vec<f64> = grid.iter().map(|&x| f(x)).collect();
    let (mut i, mut best) = (0, f64::NEG_INFINITY);
    for (j, &v) in vals.iter().enumerate() {
        if v > best {
            best = v;
            i = j;
        }
    }
    let a = grid[i.saturating_sub(1)];
    let b = grid[(i + 1).min(grid.len() - 1)];
    if b > a {
        let (x, v) = golden_max(&f, a, b, 1e-12);
        if v > best {
            return (x, v);
        }
    }
    (grid[i], best)
}

/// Break points for adaptive integration over one interval.
fn quad_breaks(t: TimeParam, delta: f64, iv: Interval) -> Vec<f64> {
    let g = region_grid(t, delta, iv, 24);
    // thin to keep the number of initial panels moderate
    let step = (g.len() / 200).max(1);
    let mut b: Vec<f64> = g.iter().step_by(step).copied().collect();
    if *b.last().unwrap() != iv.hi {
        b.push(iv.hi);
    }
    b
}

const KAPPA_TOL: f64 = 1e-6;

fn region_integral(t: TimeParam, delta: f64, iv: Interval, f: impl Fn(f64) -> f64, what: &str) -> Result<f64> {
    let breaks = quad_breaks(t, delta, iv);
    let r = integrate(f, &breaks, &Tolerance::new(0.0, KAPPA_TOL * 1e-2).with_max_panels(200_000));
    if !r.converged && r.error > KAPPA_TOL * r.value.abs() {
        return Err(Error::NoConvergence {
            what: what.to_string(),
            achieved: r.error / r.value.abs(),
            requested: KAPPA_TOL,
        });
    }
    Ok(r.value)
}

/// The κ functionals of one multiplier at `(t, δ)`, with their restriction
/// to every region of the partition.
pub fn kappa_report(t: TimeParam, delta: f64, which: Which, beta: f64) -> Result<KappaReport> {
    let part = partition(t, delta)?;
    let mut per_region = Vec::new();
    for name in RegionName::ALL {
        let mut rk = RegionKappa { region: name, k_inf: 0.0, k_one: 0.0, dm_l1: 0.0, g1_sup: 0.0 };
        for iv in part.intervals(name) {
            let grid = region_grid(t, delta, iv, 2000);
            let (_, kinf) = grid_max(|x| kappa_inf_density(t, x, which, beta), &grid);
            let (_, gsup) = grid_max(|x| point_quantities(t, x).g1, &grid);
            rk.k_inf = rk.k_inf.max(kinf);
            rk.g1_sup = rk.g1_sup.max(gsup);
            rk.k_one += region_integral(t, delta, iv, |x| kappa_one_density(t, x, which), "kappa L1 norm")?;
            rk.dm_l1 += region_integral(
                t,
                delta,
                iv,
                |x| {
                    let m = multipliers(t, x);
                    match which {
                        Which::Z => m.dmz.abs(),
                        Which::Y => m.dmy.abs(),
                    }
                },
                "multiplier derivative L1 norm",
            )?;
        }
        per_region.push(rk);
    }
    let k_inf = per_region.iter().map(|r| r.k_inf).fold(0.0, f64::max);
    let k_one = per_region.iter().map(|r| r.k_one).sum();
    let dm: f64 = per_region.iter().map(|r| r.dm_l1).sum();
    let g1: f64 = per_region.iter().map(|r| r.g1_sup).fold(0.0, f64::max);
    Ok(KappaReport { which, t: t.get(), delta, beta, k_inf, k_one, k_dollar: dm + g1, per_region })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TableQuantity {
    Mz,
    DMz,
    My,
    DMy,
    InvG1,
    G2Ratio,
    InvWp,
}

impl TableQuantity {
    pub const ALL: [TableQuantity; 7] = [
        TableQuantity::Mz,
        TableQuantity::DMz,
        TableQuantity::My,
        TableQuantity::DMy,
        TableQuantity::InvG1,
        TableQuantity::G2Ratio,
        TableQuantity::InvWp,
    ];

    pub fn label(self) -> &'static str {
        match self {
            TableQuantity::Mz => "m_z",
            TableQuantity::DMz => "dm_z",
            TableQuantity::My => "m_y",
            TableQuantity::DMy => "dm_y",
            TableQuantity::InvG1 => "inv_abs_gamma1",
            TableQuantity::G2Ratio => "gamma2_over_gamma1",
            TableQuantity::InvWp => "inv_abs_wp",
        }
    }

    fn measure(self, q: &PointQuantities) -> f64 {
        match self {
            TableQuantity::Mz => q.mz.abs(),
            TableQuantity::DMz => q.dmz.abs(),
            TableQuantity::My => q.my.abs(),
            TableQuantity::DMy => q.dmy.abs(),
            TableQuantity::InvG1 => 1.0 / q.g1,
            TableQuantity::G2Ratio => q.g2_ratio,
            TableQuantity::InvWp => 1.0 / q.wp,
        }
    }

    /// Cells where the bound is claimed to be two-sided.
    pub fn two_sided(self, region: RegionName) -> bool {
        self == TableQuantity::InvG1 && matches!(region, RegionName::Critical | RegionName::Left)
    }
}

/// The bound in each cell of the table, as a function of θ.
pub fn table_bound(q: TableQuantity, region: RegionName, t: f64, theta: f64, g1: f64) -> f64 {
    use RegionName as R;
    use TableQuantity as Q;
    let d = (theta - 1.0 / t).abs();
    let a = theta.abs();
    let tt = t * t;
    match (region, q) {
        (R::Bulk, Q::Mz | Q::DMz | Q::My | Q::DMy) => 1.0 / tt,
        (R::Bulk, _) => 1.0,
        (R::Left | R::OuterRight, Q::Mz) => a / (tt * d * d),
        (R::Left | R::OuterRight, Q::DMz) => (1.0 + t * a) / (tt * t * d * d * d),
        (R::Left | R::OuterRight | R::InnerRight, Q::My) => 1.0 / (tt * d * d),
        (R::Left | R::OuterRight | R::InnerRight, Q::DMy) => 1.0 / (tt * d * d * d),
        (R::Left, Q::InvG1) => t * d * d / (1.0 + t * a * a),
        (R::Left, Q::G2Ratio) => (1.0 + t * a.powi(3)) / (d * (1.0 + t * a * a)),
        (R::Left, Q::InvWp) => (1.0 + t * a * a).powi(2) / (t * d * (1.0 + t * a.powi(3))),
        (R::Critical, Q::Mz) => t,
        (R::Critical, Q::DMz) => tt * t,
        (R::Critical, Q::My) => tt,
        (R::Critical, Q::DMy) => tt * tt,
        (R::Critical, Q::InvG1) => 1.0 / (tt * t),
        (R::Critical, Q::G2Ratio) => tt,
        (R::Critical, Q::InvWp) => 1.0,
        (R::InnerRight, Q::Mz) => 1.0 / (tt * t * d * d),
        (R::InnerRight, Q::DMz) => 1.0 / (tt * d * d),
        (R::InnerRight, Q::InvG1) => t * d * d,
        (R::InnerRight, Q::G2Ratio) => 1.0 / d,
        (R::InnerRight, Q::InvWp) => 1.0 / (tt * d),
        (R::CriticalRight, Q::Mz) => 1.0,
        (R::CriticalRight, Q::DMz) => t.powf(1.5),
        (R::CriticalRight, Q::My) => t,
        (R::CriticalRight, Q::DMy) => t.powf(2.5),
        (R::CriticalRight, Q::InvG1) => 1.0 / t,
        (R::CriticalRight, Q::G2Ratio) => t,
        (R::CriticalRight, Q::InvWp) => g1 * g1 / t.powf(4.5),
        (R::OuterRight, Q::InvG1) => theta * theta,
        (R::OuterRight, Q::G2Ratio) => 1.0 / theta,
        (R::OuterRight, Q::InvWp) => d.powi(3) * tt / (theta * theta * (tt * theta * theta + 1.0)),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TableCell {
    pub quantity: TableQuantity,
    pub region: RegionName,
    pub sup_ratio: f64,
    /// Only for the two-sided cells.
    pub inf_ratio: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TableReport {
    pub t: f64,
    pub delta: f64,
    pub cells: Vec<TableCell>,
    /// `∫ 1/|γ′|` over the critical-right region, times `t^{9/2}/ln(t+2)`.
    pub integral_ratio: f64,
}

impl TableReport {
    pub fn cell(&self, q: TableQuantity, r: RegionName) -> &TableCell {
        self.cells.iter().find(|c| c.quantity == q && c.region == r).expect("every cell is present")
    }
}

/// Sup (and, for two-sided cells, inf) of quantity/bound in every cell.
pub fn table_check(t: TimeParam, delta: f64) -> Result<TableReport> {
    let part = partition(t, delta)?;
    let tv = t.get();
    let mut cells = Vec::new();
    for region in RegionName::ALL {
        let mut samples = Vec::new();
        for iv in part.intervals(region) {
            for x in region_grid(t, delta, iv, 4000) {
                samples.push(point_quantities(t, x));
            }
        }
        for q in TableQuantity::ALL {
            let mut sup = 0.0f64;
            let mut inf = f64::INFINITY;
            for s in &samples {
                let b = table_bound(q, region, tv, s.theta, s.g1);
                let r = q.measure(s) / b;
                if r.is_finite() {
                    sup = sup.max(r);
                    inf = inf.min(r);
                } else if !(q.measure(s) == 0.0 && b == 0.0) {
                    sup = f64::INFINITY;
                }
            }
            cells.push(TableCell {
                quantity: q,
                region,
                sup_ratio: sup,
                inf_ratio: q.two_sided(region).then_some(inf),
            });
        }
    }
    let integral = region_integral(t, delta, part.critical_right, |x| 1.0 / point_quantities(t, x).g1, "integrated inverse speed")?;
    Ok(TableReport {
        t: tv,
        delta,
        cells,
        integral_ratio: integral * tv.powf(4.5) / (tv + 2.0).ln(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LogCorrection {
    None,
    Log,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ScalingFit {
    pub exponent: f64,
    pub constant: f64,
    pub residual: f64,
}

/// Least-squares fit of `value ≈ C t^p` (times `ln(t+2)` with the log correction).
pub fn scaling_fit(samples: &[(f64, f64)], correction: LogCorrection) -> Result<ScalingFit> {
    if samples.len() < 3 {
        return invalid("scaling fit needs at least three samples");
    }
    if samples.iter().any(|&(t, v)| !(t > 0.0 && v > 0.0)) {
        return invalid("scaling fit needs positive times and values");
    }
    let xs: Vec<f64> = samples.iter().map(|s| s.0.ln()).collect();
    let ys: Vec<f64> = samples
        .iter()
        .map(|&(t, v)| match correction {
            LogCorrection::None => v.ln(),
            LogCorrection::Log => v.ln() - (t + 2.0).ln().ln(),
        })
        .collect();
    let f = line_fit(&xs, &ys)?;
    Ok(ScalingFit { exponent: f.slope, constant: f.intercept.exp(), residual: f.residual })
}
