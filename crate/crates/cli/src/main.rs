//! `betaplane`: sweeps, figure datasets and the acceptance suite from the
//! command line.
//!
//! Exit status is 0 on success, 1 when a verification fails, 2 for usage
//! errors and 3 when a computation does not converge. `BETAPLANE_THREADS`
//! caps the worker pool.

mod output;

use betaplane::expansions::{remainder_orders, Side};
use betaplane::figures::{figure, FigureKind};
use betaplane::integrator::{decay_sweep, Bump, DecayFit, Gaussian, InitialData, QuadConfig, TruncatedGaussian};
use betaplane::phase::{gamma_derivs, h_eval, multipliers, TimeParam};
use betaplane::regions::{kappa_report, table_check, Which};
use betaplane::stationary::stationary_points;
use clap::{Args, Parser, Subcommand, ValueEnum};
use output::{emit, Cell, Format, Table};
use serde::Serialize;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(name = "betaplane", version, about = "Linear inviscid damping for the beta-plane Couette flow")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Out {
    /// Write here instead of stdout.
    #[arg(long, short)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Tabulate h_t, its derivatives, gamma_t', the lift W_t and the multipliers.
    Phase {
        #[arg(long, value_delimiter = ',', required = true, value_parser = positive)]
        t: Vec<f64>,
        #[arg(long, default_value_t = 1001, value_parser = clap::value_parser!(u32).range(2..=10_000_000))]
        points: u32,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true, value_parser = finite)]
        theta_min: f64,
        #[arg(long, default_value_t = std::f64::consts::PI, allow_negative_numbers = true, value_parser = finite)]
        theta_max: f64,
        #[command(flatten)]
        out: Out,
    },
    /// Both stationary points for every combination of t, rho and alpha.
    Stationary {
        #[arg(long, value_delimiter = ',', required = true, value_parser = positive)]
        t: Vec<f64>,
        #[arg(long, value_delimiter = ',', required = true, value_parser = positive)]
        rho: Vec<f64>,
        #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true, value_parser = finite)]
        alpha: Vec<f64>,
        #[command(flatten)]
        out: Out,
    },
    /// Measured remainder orders of the multiscale expansions.
    Expansions {
        #[command(flatten)]
        out: Out,
    },
    /// Region-wise kappa functionals.
    Kappa {
        #[arg(long, value_delimiter = ',', required = true, value_parser = positive)]
        t: Vec<f64>,
        #[arg(long, default_value_t = 0.5, value_parser = positive)]
        delta: f64,
        #[arg(long, value_enum, default_value_t = WhichArg::Y)]
        which: WhichArg,
        #[arg(long, default_value_t = 2.0, value_parser = positive)]
        beta: f64,
        #[command(flatten)]
        out: Out,
    },
    /// Measured-over-claimed ratios for every region and quantity.
    Table {
        #[arg(long, value_delimiter = ',', required = true, value_parser = positive)]
        t: Vec<f64>,
        #[arg(long, default_value_t = 0.5, value_parser = positive)]
        delta: f64,
        #[command(flatten)]
        out: Out,
    },
    /// Profile gradients over a time grid, with fitted decay exponents.
    Decay {
        #[arg(long, value_delimiter = ',', default_value = "1", value_parser = positive)]
        rho: Vec<f64>,
        #[arg(long, value_delimiter = ',', default_value = "0", allow_hyphen_values = true, value_parser = finite)]
        alpha: Vec<f64>,
        /// Explicit times.
        #[arg(long, value_delimiter = ',', value_parser = positive, conflicts_with = "t_grid")]
        t_list: Option<Vec<f64>>,
        /// Geometric grid `lo:hi:n`.
        #[arg(long, default_value = "4:64:5")]
        t_grid: String,
        #[arg(long, value_enum, default_value_t = DataArg::Gaussian)]
        data: DataArg,
        #[arg(long, default_value_t = 1e-6, value_parser = positive)]
        rel_tol: f64,
        #[arg(long, default_value_t = 1e-13, value_parser = positive)]
        abs_tol: f64,
        /// Cap on angular panels per integral.
        #[arg(long, default_value_t = 400_000)]
        max_subdivisions: usize,
        /// Write the fitted exponents as JSON here.
        #[arg(long)]
        fit_summary: Option<PathBuf>,
        #[command(flatten)]
        out: Out,
    },
    /// CSV datasets for the standard plots.
    Figures {
        #[arg(long, value_parser = parse_figure)]
        which: FigureKind,
        #[arg(long, visible_alias = "t-list", value_delimiter = ',', value_parser = positive)]
        t: Option<Vec<f64>>,
        /// Write here instead of stdout.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Run the acceptance suite and print a pass/fail matrix.
    VerifyAll {
        /// Subset of check ids; all of them by default.
        #[arg(long, value_delimiter = ',')]
        ids: Option<Vec<u32>>,
        /// Write the JSON reports here.
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum WhichArg {
    Z,
    Y,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum DataArg {
    Gaussian,
    Bump,
    Truncated,
}

fn finite(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("{s} is not finite"))
    }
}

fn positive(s: &str) -> Result<f64, String> {
    let v = finite(s)?;
    if v > 0.0 {
        Ok(v)
    } else {
        Err(format!("{s} must be positive"))
    }
}

fn parse_figure(s: &str) -> Result<FigureKind, String> {
    s.parse().map_err(|e: betaplane::Error| e.to_string())
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Numerical(String),
    Io(std::io::Error),
    Verification(Vec<u32>),
}

impl From<betaplane::Error> for Failure {
    fn from(e: betaplane::Error) -> Self {
        match e {
            betaplane::Error::InvalidArgument(_) => Failure::Usage(e.to_string()),
            _ => Failure::Numerical(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e)
    }
}

type Outcome = Result<(), Failure>;

fn tp(t: f64) -> Result<TimeParam, Failure> {
    Ok(TimeParam::new(t)?)
}

fn side_name(s: Side) -> &'static str {
    match s {
        Side::Minus => "minus",
        Side::Plus => "plus",
    }
}

fn phase_cmd(ts: &[f64], points: u32, lo: f64, hi: f64, out: &Out) -> Outcome {
    if lo >= hi {
        return Err(Failure::Usage(format!("theta-min {lo} must be below theta-max {hi}")));
    }
    let mut table = Table::new(&[
        "t", "theta", "h", "h1", "h2", "re_gamma1", "im_gamma1", "curvature", "w", "wp", "mz", "my", "dmz", "dmy",
    ]);
    let n = points - 1;
    for &t in ts {
        let t = tp(t)?;
        for k in 0..=n {
            let theta = lo + (hi - lo) * f64::from(k) / f64::from(n);
            let p = h_eval(t, theta);
            let g = gamma_derivs(t, theta);
            let m = multipliers(t, theta);
            table.push(vec![
                t.get().into(),
                theta.into(),
                p.h.into(),
                p.h1.into(),
                p.h2.into(),
                g.g1.re.into(),
                g.g1.im.into(),
                g.curv.into(),
                g.w.into(),
                g.wp.into(),
                m.mz.into(),
                m.my.into(),
                m.dmz.into(),
                m.dmy.into(),
            ]);
        }
    }
    Ok(emit(&table.render(out.format), out.output.as_deref())?)
}

fn stationary_cmd(ts: &[f64], rhos: &[f64], alphas: &[f64], out: &Out) -> Outcome {
    let mut table = Table::new(&["t", "rho", "alpha", "theta1", "r1", "grad1", "theta2", "r2", "grad2"]);
    for &t in ts {
        for &rho in rhos {
            for &alpha in alphas {
                let (a, b) = stationary_points(tp(t)?, rho, alpha)?;
                table.push(vec![
                    t.into(),
                    rho.into(),
                    alpha.into(),
                    a.theta.into(),
                    a.r.into(),
                    a.grad_norm.into(),
                    b.theta.into(),
                    b.r.into(),
                    b.grad_norm.into(),
                ]);
            }
        }
    }
    Ok(emit(&table.render(out.format), out.output.as_deref())?)
}

fn expansions_cmd(out: &Out) -> Outcome {
    let mut table = Table::new(&["side", "quantity", "ray_theta", "ray_mvar", "printed_order", "measured_order", "rel_err"]);
    for f in remainder_orders() {
        table.push(vec![
            side_name(f.side).into(),
            format!("{:?}", f.quantity).as_str().into(),
            f.ray.0.into(),
            f.ray.1.into(),
            f.printed.into(),
            f.measured.into(),
            f.rel_err.into(),
        ]);
    }
    Ok(emit(&table.render(out.format), out.output.as_deref())?)
}

fn kappa_cmd(ts: &[f64], delta: f64, which: WhichArg, beta: f64, out: &Out) -> Outcome {
    let (which, name) = match which {
        WhichArg::Z => (Which::Z, "z"),
        WhichArg::Y => (Which::Y, "y"),
    };
    let mut table = Table::new(&[
        "t", "delta", "beta", "which", "region", "k_inf", "k_one", "dm_l1", "g1_sup", "k_dollar",
    ]);
    for &t in ts {
        let k = kappa_report(tp(t)?, delta, which, beta)?;
        for r in &k.per_region {
            table.push(vec![
                t.into(),
                delta.into(),
                beta.into(),
                name.into(),
                r.region.label().into(),
                r.k_inf.into(),
                r.k_one.into(),
                r.dm_l1.into(),
                r.g1_sup.into(),
                Cell::Empty,
            ]);
        }
        table.push(vec![
            t.into(),
            delta.into(),
            beta.into(),
            name.into(),
            "total".into(),
            k.k_inf.into(),
            k.k_one.into(),
            Cell::Empty,
            Cell::Empty,
            k.k_dollar.into(),
        ]);
    }
    Ok(emit(&table.render(out.format), out.output.as_deref())?)
}

fn table_cmd(ts: &[f64], delta: f64, out: &Out) -> Outcome {
    let mut table = Table::new(&["t", "delta", "quantity", "region", "sup_ratio", "inf_ratio"]);
    for &t in ts {
        let r = table_check(tp(t)?, delta)?;
        for c in &r.cells {
            table.push(vec![
                t.into(),
                delta.into(),
                c.quantity.label().into(),
                c.region.label().into(),
                c.sup_ratio.into(),
                c.inf_ratio.into(),
            ]);
        }
        table.push(vec![
            t.into(),
            delta.into(),
            "integral_inv_abs_gamma1".into(),
            "critical_right".into(),
            r.integral_ratio.into(),
            Cell::Empty,
        ]);
    }
    Ok(emit(&table.render(out.format), out.output.as_deref())?)
}

fn geometric_grid(spec: &str) -> Result<Vec<f64>, Failure> {
    let bad = || Failure::Usage(format!("t-grid must be lo:hi:n with 0 < lo < hi and n >= 3, got '{spec}'"));
    let parts: Vec<&str> = spec.split(':').collect();
    let [lo, hi, n] = parts[..] else { return Err(bad()) };
    let lo = positive(lo).map_err(|_| bad())?;
    let hi = positive(hi).map_err(|_| bad())?;
    let n: u32 = n.parse().map_err(|_| bad())?;
    if !(lo < hi && n >= 3) {
        return Err(bad());
    }
    let ratio = (hi / lo).ln() / f64::from(n - 1);
    Ok((0..n).map(|k| if k + 1 == n { hi } else { lo * (ratio * f64::from(k)).exp() }).collect())
}

#[derive(Serialize)]
struct FitSummary {
    rho: f64,
    alpha: f64,
    exponent_z: f64,
    exponent_y: f64,
    residual_z: f64,
    residual_y: f64,
    failures: Vec<(f64, String)>,
}

impl From<&DecayFit> for FitSummary {
    fn from(f: &DecayFit) -> Self {
        FitSummary {
            rho: f.point.0,
            alpha: f.point.1,
            exponent_z: f.exponent_z,
            exponent_y: f.exponent_y,
            residual_z: f.residual_z,
            residual_y: f.residual_y,
            failures: f.failures.clone(),
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn decay_cmd(
    rhos: &[f64],
    alphas: &[f64],
    t_list: Option<&[f64]>,
    t_grid: &str,
    data: DataArg,
    cfg: QuadConfig,
    fit_summary: Option<&Path>,
    out: &Out,
) -> Outcome {
    let ts = match t_list {
        Some(ts) => ts.to_vec(),
        None => geometric_grid(t_grid)?,
    };
    let data: Box<dyn InitialData> = match data {
        DataArg::Gaussian => Box::new(Gaussian),
        DataArg::Bump => Box::new(Bump::default()),
        DataArg::Truncated => Box::new(TruncatedGaussian::default()),
    };
    let points: Vec<(f64, f64)> = rhos.iter().flat_map(|&r| alphas.iter().map(move |&a| (r, a))).collect();
    let fits = decay_sweep(&points, &ts, data.as_ref(), &cfg)?;
    let mut table = Table::new(&["t", "rho", "alpha", "re_phi_z", "im_phi_z", "re_phi_y", "im_phi_y", "err_est"]);
    for s in fits.iter().flat_map(|f| &f.samples) {
        table.push(vec![
            s.t.into(),
            s.rho.into(),
            s.alpha.into(),
            s.phi_z.re.into(),
            s.phi_z.im.into(),
            s.phi_y.re.into(),
            s.phi_y.im.into(),
            s.err_z.max(s.err_y).into(),
        ]);
    }
    emit(&table.render(out.format), out.output.as_deref())?;
    if let Some(p) = fit_summary {
        let summary: Vec<FitSummary> = fits.iter().map(FitSummary::from).collect();
        let mut s = serde_json::to_string_pretty(&summary).expect("fit summaries serialise");
        s.push('\n');
        std::fs::write(p, s)?;
    }
    let failed: Vec<String> = fits
        .iter()
        .flat_map(|f| f.failures.iter().map(move |(t, e)| format!("(rho, alpha) = {:?}, t = {t}: {e}", f.point)))
        .collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Numerical(failed.join("\n")))
    }
}

fn figures_cmd(which: FigureKind, ts: Option<&[f64]>, output: Option<&Path>) -> Outcome {
    let ts = ts.map_or_else(|| which.default_times(), <[f64]>::to_vec);
    let f = figure(which, &ts)?;
    Ok(emit(&f.to_csv(), output)?)
}

fn verify_cmd(ids: Option<&[u32]>, report: Option<&Path>) -> Outcome {
    let ids = ids.map_or_else(|| betaplane_verify::CHECK_IDS.to_vec(), <[u32]>::to_vec);
    if let Some(bad) = ids.iter().find(|id| !betaplane_verify::CHECK_IDS.contains(id)) {
        return Err(Failure::Usage(format!("no check with id {bad}")));
    }
    let mut reports = Vec::new();
    let mut failed = Vec::new();
    let mut errors = Vec::new();
    for id in ids {
        match betaplane_verify::run_check(id) {
            Ok(r) => {
                println!("{}", r.summary_line());
                if !r.pass {
                    failed.push(id);
                }
                reports.push(r);
            }
            Err(e) => {
                println!("FAIL [{id:>2}] error: {e}");
                errors.push(format!("check {id}: {e}"));
            }
        }
    }
    let total = reports.len() + errors.len();
    println!("{} of {total} checks pass", total - failed.len() - errors.len());
    if let Some(p) = report {
        let mut s = serde_json::to_string_pretty(&reports).expect("reports serialise");
        s.push('\n');
        std::fs::write(p, s)?;
    }
    if !errors.is_empty() {
        Err(Failure::Numerical(errors.join("\n")))
    } else if !failed.is_empty() {
        Err(Failure::Verification(failed))
    } else {
        Ok(())
    }
}

fn configure_threads() -> Outcome {
    let Ok(v) = std::env::var("BETAPLANE_THREADS") else { return Ok(()) };
    let n: usize = v
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Failure::Usage(format!("BETAPLANE_THREADS must be a positive integer, got '{v}'")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::Usage(format!("cannot size the worker pool: {e}")))
}

fn run(cli: Cli) -> Outcome {
    configure_threads()?;
    match cli.command {
        Command::Phase { t, points, theta_min, theta_max, out } => phase_cmd(&t, points, theta_min, theta_max, &out),
        Command::Stationary { t, rho, alpha, out } => stationary_cmd(&t, &rho, &alpha, &out),
        Command::Expansions { out } => expansions_cmd(&out),
        Command::Kappa { t, delta, which, beta, out } => kappa_cmd(&t, delta, which, beta, &out),
        Command::Table { t, delta, out } => table_cmd(&t, delta, &out),
        Command::Decay { rho, alpha, t_list, t_grid, data, rel_tol, abs_tol, max_subdivisions, fit_summary, out } => {
            let cfg = QuadConfig { rel_tol, abs_tol, max_subdivisions, ..Default::default() };
            decay_cmd(&rho, &alpha, t_list.as_deref(), &t_grid, data, cfg, fit_summary.as_deref(), &out)
        }
        Command::Figures { which, t, output } => figures_cmd(which, t.as_deref(), output.as_deref()),
        Command::VerifyAll { ids, report } => verify_cmd(ids.as_deref(), report.as_deref()),
    }
}

fn main() -> ExitCode {
    // clap exits with status 2 on malformed flags.
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification(ids)) => {
            eprintln!("verification failed for checks {ids:?}");
            ExitCode::from(1)
        }
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Numerical(m)) => {
            eprintln!("numerical failure: {m}");
            ExitCode::from(3)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn command_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn grid_spec() {
        let g = geometric_grid("4:64:5").unwrap();
        assert_eq!(g.len(), 5);
        assert_eq!((g[0], g[4]), (4.0, 64.0));
        assert!((g[2] - 16.0).abs() < 1e-12);
        for bad in ["4:64", "64:4:5", "0:4:5", "1:2:2", "a:b:c"] {
            assert!(matches!(geometric_grid(bad), Err(Failure::Usage(_))), "{bad}");
        }
    }

    #[test]
    fn numeric_parsers() {
        assert!(positive("0").is_err());
        assert!(positive("inf").is_err());
        assert!(finite("NaN").is_err());
        assert_eq!(finite("-2.5"), Ok(-2.5));
    }
}
