//! Datasets for the three standard plots: `h_t` over a period, the curve
//! `γ_t′` in the complex plane, and the normalised speed `t/|γ_t′|` across
//! the critical zone.

use crate::error::{invalid, Result};
use crate::phase::{gamma_derivs, h_eval, TimeParam};
use serde::Serialize;
use std::f64::consts::PI;
use std::str::FromStr;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FigureKind {
    Ht,
    GammaPrime,
    GammaCritical,
}

impl FigureKind {
    pub const ALL: [FigureKind; 3] = [FigureKind::Ht, FigureKind::GammaPrime, FigureKind::GammaCritical];

    pub fn name(self) -> &'static str {
        match self {
            FigureKind::Ht => "ht",
            FigureKind::GammaPrime => "gamma-prime",
            FigureKind::GammaCritical => "gamma-critical",
        }
    }

    pub fn header(self) -> &'static [&'static str] {
        match self {
            FigureKind::Ht => &["t", "theta", "h"],
            FigureKind::GammaPrime => &["t", "theta", "re_gamma1", "im_gamma1"],
            FigureKind::GammaCritical => &["t", "q", "speed_ratio"],
        }
    }

    pub fn default_times(self) -> Vec<f64> {
        match self {
            FigureKind::Ht | FigureKind::GammaPrime => vec![1.0, 2.0, 3.0, 4.0],
            FigureKind::GammaCritical => vec![1e2, 1e3, 1e4, 1e5],
        }
    }
}

impl FromStr for FigureKind {
    type Err = crate::Error;
    fn from_str(s: &str) -> Result<Self> {
        FigureKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .map_or_else(|| invalid(format!("unknown figure '{s}'")), Ok)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Figure {
    pub kind: FigureKind,
    pub rows: Vec<Vec<f64>>,
}

/// Samples per curve.
pub const FIGURE_POINTS: usize = 2001;

/// Range of `q` in the critical-zone plot, which peaks near `q = 1/√π`.
pub const Q_RANGE: (f64, f64) = (0.05, 2.0);

fn row(kind: FigureKind, t: TimeParam, x: f64) -> Vec<f64> {
    let tv = t.get();
    match kind {
        FigureKind::Ht => vec![tv, x, h_eval(t, x).h],
        FigureKind::GammaPrime => {
            let g = gamma_derivs(t, x).g1;
            vec![tv, x, g.re, g.im]
        }
        FigureKind::GammaCritical => {
            let theta = 1.0 / tv + x * tv.powf(-1.5);
            vec![tv, x, tv / gamma_derivs(t, theta).g1.norm()]
        }
    }
}

fn abscissae(kind: FigureKind) -> Vec<f64> {
    let (a, b) = match kind {
        FigureKind::Ht => (-PI, PI),
        FigureKind::GammaPrime => (0.0, 2.0 * PI),
        FigureKind::GammaCritical => Q_RANGE,
    };
    let n = FIGURE_POINTS - 1;
    (0..=n).map(|k| a + (b - a) * k as f64 / n as f64).collect()
}

pub fn figure(kind: FigureKind, times: &[f64]) -> Result<Figure> {
    if times.is_empty() {
        return invalid("figure needs at least one time");
    }
    let mut rows = Vec::new();
    for &t in times {
        let tp = TimeParam::new(t)?;
        if kind == FigureKind::GammaCritical && t < 1.0 {
            return invalid(format!("critical-zone plot needs t >= 1, got {t}"));
        }
        for x in abscissae(kind) {
            rows.push(row(kind, tp, x));
        }
    }
    Ok(Figure { kind, rows })
}

/// Shortest text that parses back to `v` exactly, in positional form for
/// moderate magnitudes and scientific form otherwise.
pub fn format_number(v: f64) -> String {
    let a = v.abs();
    if a == 0.0 || (1e-4..1e16).contains(&a) || !a.is_finite() {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

impl Figure {
    /// CSV with a header row; numbers use the shortest round-trip form.
    pub fn to_csv(&self) -> String {
        let mut out = self.kind.header().join(",");
        out.push('\n');
        for r in &self.rows {
            for (i, v) in r.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push_str(&format_number(*v));
            }
            out.push('\n');
        }
        out
    }
}

/// Parse a figure CSV back and re-evaluate every row from its abscissa.
/// Returns the largest deviation relative to `max(1, |value|)`.
pub fn recheck_csv(kind: FigureKind, csv: &str) -> Result<f64> {
    let mut lines = csv.lines();
    let header = lines.next().unwrap_or_default();
    if header != kind.header().join(",") {
        return invalid(format!("unexpected header '{header}'"));
    }
    let mut worst = 0.0f64;
    let mut count = 0;
    for line in lines {
        let vals: Vec<f64> = line
            .split(',')
            .map(|s| s.parse::<f64>().map_err(|e| crate::Error::InvalidArgument(format!("bad number '{s}': {e}"))))
            .collect::<Result<_>>()?;
        if vals.len() != kind.header().len() {
            return invalid(format!("row '{line}' has the wrong width"));
        }
        let fresh = row(kind, TimeParam::new(vals[0])?, vals[1]);
        for (a, b) in vals[2..].iter().zip(&fresh[2..]) {
            worst = worst.max((a - b).abs() / b.abs().max(1.0));
        }
        count += 1;
    }
    if count == 0 {
        return invalid("figure CSV has no rows");
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_round_trip_is_exact() {
        for kind in FigureKind::ALL {
            let f = figure(kind, &kind.default_times()[..2]).unwrap();
            assert_eq!(f.rows.len(), 2 * FIGURE_POINTS);
            assert_eq!(recheck_csv(kind, &f.to_csv()).unwrap(), 0.0);
        }
    }

    #[test]
    fn corrupted_rows_are_detected() {
        let f = figure(FigureKind::Ht, &[2.0]).unwrap();
        let mut rows = f.rows.clone();
        rows[10][2] += 1e-6;
        let g = Figure { kind: FigureKind::Ht, rows };
        assert!(recheck_csv(FigureKind::Ht, &g.to_csv()).unwrap() > 1e-7);
        assert!(recheck_csv(FigureKind::GammaPrime, &f.to_csv()).is_err());
        assert!(recheck_csv(FigureKind::Ht, "t,theta,h\n2,0.1,x\n").is_err());
    }

    #[test]
    fn numbers_round_trip() {
        for v in [0.0, -0.0, 1.0, 0.1, 1.8452761694870047e-15, -3e300, 12345.678, 1e16, 5e-324, f64::INFINITY] {
            let s = format_number(v);
            assert_eq!(s.parse::<f64>().unwrap().to_bits(), v.to_bits(), "{s}");
        }
        assert_eq!(format_number(1.8452761694870047e-15), "1.8452761694870047e-15");
        assert_eq!(format_number(0.25), "0.25");
        assert!(format_number(f64::NAN).parse::<f64>().unwrap().is_nan());
    }

    #[test]
    fn names_parse() {
        assert_eq!("gamma-critical".parse::<FigureKind>().unwrap(), FigureKind::GammaCritical);
        assert!("gamma".parse::<FigureKind>().is_err());
    }

    #[test]
    fn critical_plot_peaks_near_inverse_root_pi() {
        let f = figure(FigureKind::GammaCritical, &[1e5]).unwrap();
        let best = f.rows.iter().max_by(|a, b| a[2].total_cmp(&b[2])).unwrap();
        assert!((best[1] - 1.0 / PI.sqrt()).abs() < 0.05, "peak at q = {}", best[1]);
    }
}
