//! Command-line front end: every computation as a subcommand with CSV or
//! JSON rows on stdout.
//!
//! Exit codes: 0 success, 2 invalid arguments, 3 budget exhausted or an
//! uncertified result.

use std::ffi::OsString;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::complexity::{self, ComplexityQuery, Criterion, Setting};
use crate::error::Error;
use crate::kernel::KernelParams;
use crate::lattice;
use crate::output::{Cell, Table};
use crate::sampler;
use crate::spectrum;
use crate::tractability::{self, ScanSpec};
use crate::{Budget, Result};

/// Environment variable overriding the per-query soft time cap (ms).
pub const BUDGET_ENV: &str = "GEVREY_BUDGET_MS";
const DEFAULT_TIME_CAP_MS: u64 = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SettingArg {
    Wor,
    Avg,
}

impl From<SettingArg> for Setting {
    fn from(s: SettingArg) -> Self {
        match s {
            SettingArg::Wor => Setting::Worst,
            SettingArg::Avg => Setting::Average,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CriterionArg {
    Abs,
    Nor,
}

impl From<CriterionArg> for Criterion {
    fn from(c: CriterionArg) -> Self {
        match c {
            CriterionArg::Abs => Criterion::Abs,
            CriterionArg::Nor => Criterion::Nor,
        }
    }
}

#[derive(Debug, Args)]
struct KernelArgs {
    #[arg(long)]
    alpha: f64,
    #[arg(long, default_value_t = 1.0)]
    beta: f64,
    #[arg(long)]
    p: f64,
    #[arg(long)]
    d: usize,
}

impl KernelArgs {
    fn params(&self) -> Result<KernelParams> {
        KernelParams::new(self.alpha, self.beta, self.p, self.d)
    }
}

#[derive(Debug, Args)]
struct BudgetArgs {
    /// Cap on enumerated level classes per query.
    #[arg(long, default_value_t = Budget::DEFAULT_MAX_CLASSES)]
    max_classes: u64,
}

impl BudgetArgs {
    fn budget(&self) -> Budget {
        let ms = std::env::var(BUDGET_ENV)
            .ok()
            .and_then(|v| v.parse::<u64>().ok())
            .unwrap_or(DEFAULT_TIME_CAP_MS);
        let mut b = Budget::classes(self.max_classes);
        if ms > 0 {
            b = b.with_time_cap(Duration::from_millis(ms));
        }
        b
    }
}

/// Comma-separated grid of values, e.g. `--eps-grid 0.3,0.5,0.7`.
#[derive(Debug, Clone)]
struct Grid<T>(Vec<T>);

impl<T: std::str::FromStr> std::str::FromStr for Grid<T>
where
    T::Err: std::fmt::Display,
{
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        s.split(',')
            .map(|t| t.trim().parse::<T>().map_err(|e| e.to_string()))
            .collect::<std::result::Result<Vec<T>, String>>()
            .map(Grid)
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "gevrey",
    about = "Spectra, minimal errors, information complexity, and tractability \
             diagnostics for periodic Gevrey-kernel approximation",
    version
)]
struct Cli {
    /// Output format for the row tables.
    #[arg(long, global = true, value_enum, default_value = "csv")]
    format: FormatArg,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Sorted eigenvalue runs with multiplicities and cumulative sums.
    Spectrum {
        #[command(flatten)]
        kernel: KernelArgs,
        /// Minimum number of eigenvalues to enumerate.
        #[arg(long, default_value_t = 100)]
        n: u128,
        /// Relative tail tolerance of the spectrum.
        #[arg(long, default_value_t = 1e-6)]
        tail_tol: f64,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Trace (or power trace) enclosure.
    Trace {
        #[command(flatten)]
        kernel: KernelArgs,
        /// Relative width of the requested enclosure.
        #[arg(long, default_value_t = 1e-8)]
        tail_tol: f64,
        /// Power-trace exponent (1 gives the plain trace).
        #[arg(long, default_value_t = 1.0)]
        tau: f64,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Minimal errors over a grid of n.
    ErrorCurve {
        #[command(flatten)]
        kernel: KernelArgs,
        #[arg(long)]
        n_grid: Grid<u128>,
        #[arg(long, value_enum, default_value = "avg")]
        setting: SettingArg,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Information complexity n(eps, d) with certification.
    Complexity {
        #[command(flatten)]
        kernel: KernelArgs,
        #[arg(long)]
        eps: Option<f64>,
        #[arg(long)]
        eps_grid: Option<Grid<f64>>,
        #[arg(long, value_enum, default_value = "avg")]
        setting: SettingArg,
        #[arg(long, value_enum, default_value = "abs")]
        criterion: CriterionArg,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Exact lattice point count with sum |k_i|^p <= m.
    Count {
        #[arg(long)]
        m: f64,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        p: f64,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Complexity scan over (eps, d) grids with growth diagnostics.
    Scan {
        #[arg(long)]
        alpha: f64,
        #[arg(long, default_value_t = 1.0)]
        beta: f64,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        eps_grid: Grid<f64>,
        #[arg(long)]
        d_grid: Grid<usize>,
        #[arg(long, value_enum, default_value = "avg")]
        setting: SettingArg,
        #[arg(long, value_enum, default_value = "nor")]
        criterion: CriterionArg,
        #[arg(long, default_value_t = 1.0)]
        s: f64,
        #[arg(long, default_value_t = 1.0)]
        t: f64,
        /// Worker threads for grid cells.
        #[arg(long, default_value_t = 1)]
        threads: usize,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Tractability truth table for (alpha, p).
    Classify {
        #[arg(long)]
        alpha: f64,
        #[arg(long, default_value_t = 1.0)]
        beta: f64,
        #[arg(long)]
        p: f64,
        #[arg(long, value_enum, default_value = "avg")]
        setting: SettingArg,
        #[arg(long, value_enum, default_value = "abs")]
        criterion: CriterionArg,
        /// Also evaluate the (s,t)-weak tractability predicates.
        #[arg(long)]
        s: Option<f64>,
        #[arg(long)]
        t: Option<f64>,
    },
    /// Least-squares fit of the exponential convergence exponent.
    Exprate {
        #[command(flatten)]
        kernel: KernelArgs,
        #[arg(long)]
        n_grid: Option<Grid<u128>>,
        #[arg(long, value_enum, default_value = "wor")]
        setting: SettingArg,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Dump one sample path's Fourier coefficients.
    Sample {
        #[command(flatten)]
        kernel: KernelArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Excluded-tail fraction of the trace.
        #[arg(long, default_value_t = 1e-6)]
        tail_tol: f64,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Monte Carlo check of the average-case error formula.
    McCheck {
        #[command(flatten)]
        kernel: KernelArgs,
        #[arg(long)]
        n_grid: Grid<u128>,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Excluded-tail fraction of the trace for the sampler.
        #[arg(long, default_value_t = 1e-6)]
        tail_tol: f64,
        #[command(flatten)]
        budget: BudgetArgs,
    },
}

/// Parses and executes `argv`; returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            // keep clap's rendering, but force our exit-code contract
            let is_help = matches!(
                e.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            );
            let _ = e.print();
            return if is_help { 0 } else { 2 };
        }
    };
    match execute(&cli) {
        Ok(Outcome { table, uncertified }) => {
            match cli.format {
                FormatArg::Csv => print!("{}", table.to_csv()),
                FormatArg::Json => println!("{}", table.to_json()),
            }
            if uncertified {
                eprintln!("warning: result is budget-limited or uncertified");
                3
            } else {
                0
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::BudgetExhausted { .. } | Error::Overflow(_) => 3,
                _ => 2,
            }
        }
    }
}

struct Outcome {
    table: Table,
    uncertified: bool,
}

fn ok(table: Table) -> Result<Outcome> {
    Ok(Outcome {
        table,
        uncertified: false,
    })
}

fn execute(cli: &Cli) -> Result<Outcome> {
    match &cli.cmd {
        Cmd::Spectrum {
            kernel,
            n,
            tail_tol,
            budget,
        } => {
            let params = kernel.params()?;
            let spec = spectrum::build_spectrum(&params, *n, *tail_tol, &budget.budget())?;
            let mut table = Table::new(vec![
                "eigenvalue",
                "multiplicity",
                "cum_count",
                "cum_sum",
                "value",
            ]);
            let mut cum: u128 = 0;
            let mut cum_sum = crate::accum::NeumaierSum::new();
            for run in spec.runs() {
                cum += run.multiplicity;
                cum_sum.add(run.multiplicity as f64 * run.eigenvalue);
                table.push(vec![
                    Cell::F64(run.eigenvalue),
                    Cell::count_u128(run.multiplicity),
                    Cell::count_u128(cum),
                    Cell::F64(cum_sum.value()),
                    Cell::F64(run.value),
                ]);
            }
            Ok(Outcome {
                table,
                uncertified: !spec.goals_met(),
            })
        }
        Cmd::Trace {
            kernel,
            tail_tol,
            tau,
            budget,
        } => {
            let params = kernel.params()?;
            let t = spectrum::power_trace(&params, *tau, *tail_tol, &budget.budget())?;
            let mut table = Table::new(vec![
                "alpha", "beta", "p", "d", "tau", "lower", "upper", "width", "rel_width",
            ]);
            table.push(vec![
                Cell::F64(params.alpha()),
                Cell::F64(params.beta()),
                Cell::F64(params.p()),
                Cell::U64(params.d() as u64),
                Cell::F64(*tau),
                Cell::F64(t.lower),
                Cell::F64(t.upper),
                Cell::F64(t.width()),
                Cell::F64(t.width() / t.lower),
            ]);
            ok(table)
        }
        Cmd::ErrorCurve {
            kernel,
            n_grid,
            setting,
            budget,
        } => {
            let params = kernel.params()?;
            let b = budget.budget();
            let mut table = Table::new(vec!["setting", "n", "error_lo", "error_hi"]);
            for &n in &n_grid.0 {
                let (lo, hi) = match Setting::from(*setting) {
                    Setting::Worst => {
                        let e = complexity::wor_error(&params, n, &b)?;
                        (e, e)
                    }
                    Setting::Average => {
                        let e = complexity::avg_error(&params, n, &b)?;
                        (e.lower, e.upper)
                    }
                };
                table.push(vec![
                    Cell::Str(Setting::from(*setting).to_string()),
                    Cell::count_u128(n),
                    Cell::F64(lo),
                    Cell::F64(hi),
                ]);
            }
            ok(table)
        }
        Cmd::Complexity {
            kernel,
            eps,
            eps_grid,
            setting,
            criterion,
            budget,
        } => {
            let params = kernel.params()?;
            let b = budget.budget();
            let mut epsilons = eps_grid.clone().map(|g| g.0).unwrap_or_default();
            if let Some(e) = eps {
                epsilons.push(*e);
            }
            if epsilons.is_empty() {
                return Err(Error::InvalidParameter {
                    name: "eps",
                    value: f64::NAN,
                    requirement: "provide --eps or --eps-grid",
                });
            }
            let mut table = Table::new(vec![
                "alpha",
                "beta",
                "p",
                "d",
                "epsilon",
                "setting",
                "criterion",
                "n",
                "certified",
                "n_lo",
                "n_hi",
            ]);
            let mut uncertified = false;
            for &e in &epsilons {
                let q = ComplexityQuery::new(params, e, (*setting).into(), (*criterion).into())?;
                let r = complexity::info_complexity(&q, &b)?;
                uncertified |= !r.certified;
                table.push(vec![
                    Cell::F64(params.alpha()),
                    Cell::F64(params.beta()),
                    Cell::F64(params.p()),
                    Cell::U64(params.d() as u64),
                    Cell::F64(e),
                    Cell::Str(q.setting.to_string()),
                    Cell::Str(q.criterion.to_string()),
                    Cell::count_u128(r.n),
                    Cell::Bool(r.certified),
                    Cell::count_u128(r.n_lo),
                    Cell::opt_count(r.n_hi),
                ]);
            }
            Ok(Outcome { table, uncertified })
        }
        Cmd::Count { m, d, p, budget } => {
            let count = lattice::grid_count(*m, *d, *p, &budget.budget())?;
            let mut table = Table::new(vec!["m", "d", "p", "count"]);
            table.push(vec![
                Cell::F64(*m),
                Cell::U64(*d as u64),
                Cell::F64(*p),
                Cell::count_big(&count),
            ]);
            ok(table)
        }
        Cmd::Scan {
            alpha,
            beta,
            p,
            eps_grid,
            d_grid,
            setting,
            criterion,
            s,
            t,
            threads,
            budget,
        } => {
            let spec = ScanSpec {
                alpha: *alpha,
                beta: *beta,
                p: *p,
                epsilons: eps_grid.0.clone(),
                dims: d_grid.0.clone(),
                setting: (*setting).into(),
                criterion: (*criterion).into(),
                s: *s,
                t: *t,
            };
            let rows = tractability::scan(&spec, &budget.budget(), *threads)?;
            let mut table = Table::new(vec![
                "alpha",
                "beta",
                "p",
                "d",
                "epsilon",
                "setting",
                "criterion",
                "n",
                "certified",
                "n_lo",
                "n_hi",
                "ln_n",
                "alg_ratio",
                "exp_ratio",
                "s",
                "t",
                "error",
            ]);
            let mut uncertified = false;
            for row in &rows {
                let (n, certified, n_lo, n_hi) = match row.result {
                    Some(r) => (
                        Cell::count_u128(r.n),
                        Cell::Bool(r.certified),
                        Cell::count_u128(r.n_lo),
                        Cell::opt_count(r.n_hi),
                    ),
                    None => (Cell::Empty, Cell::Bool(false), Cell::Empty, Cell::Empty),
                };
                uncertified |= row.result.map_or(true, |r| !r.certified);
                table.push(vec![
                    Cell::F64(*alpha),
                    Cell::F64(*beta),
                    Cell::F64(*p),
                    Cell::U64(row.d as u64),
                    Cell::F64(row.epsilon),
                    Cell::Str(spec.setting.to_string()),
                    Cell::Str(spec.criterion.to_string()),
                    n,
                    certified,
                    n_lo,
                    n_hi,
                    Cell::opt_f64(row.ln_n),
                    Cell::opt_f64(row.alg_ratio),
                    Cell::opt_f64(row.exp_ratio),
                    Cell::F64(*s),
                    Cell::F64(*t),
                    row.error.clone().map_or(Cell::Empty, Cell::Str),
                ]);
            }
            Ok(Outcome { table, uncertified })
        }
        Cmd::Classify {
            alpha,
            beta,
            p,
            setting,
            criterion,
            s,
            t,
        } => {
            let profile =
                tractability::classify(*alpha, *beta, *p, (*setting).into(), (*criterion).into())?;
            let mut table = Table::new(vec!["notion", "holds", "rule"]);
            for (name, f) in profile.flags() {
                table.push(vec![
                    Cell::Str(name.to_string()),
                    Cell::Bool(f.holds),
                    Cell::Str(f.rule.to_string()),
                ]);
            }
            if let (Some(s), Some(t)) = (s, t) {
                let alg = profile.alg_st_wt(*s, *t)?;
                let exp = profile.exp_st_wt(*s, *t)?;
                table.push(vec![
                    Cell::Str(format!("ALG-({s},{t})-WT")),
                    Cell::Bool(alg.holds),
                    Cell::Str(alg.rule.to_string()),
                ]);
                table.push(vec![
                    Cell::Str(format!("EXP-({s},{t})-WT")),
                    Cell::Bool(exp.holds),
                    Cell::Str(exp.rule.to_string()),
                ]);
            }
            ok(table)
        }
        Cmd::Exprate {
            kernel,
            n_grid,
            setting,
            budget,
        } => {
            let params = kernel.params()?;
            let grid = match n_grid {
                Some(g) => g.0.clone(),
                None => {
                    // geometric grid of even n from max(2^d, 20) to 2000
                    let lo = (1u128 << params.d().min(10)).max(20);
                    let mut g = Vec::new();
                    let mut x = lo as f64;
                    while x <= 2000.0 {
                        let n = (x / 2.0).round() as u128 * 2;
                        if g.last() != Some(&n) {
                            g.push(n);
                        }
                        x *= 1.25;
                    }
                    g
                }
            };
            let fit =
                tractability::exp_rate_fit(&params, (*setting).into(), &grid, &budget.budget())?;
            let mut table = Table::new(vec![
                "alpha",
                "beta",
                "p",
                "d",
                "setting",
                "fitted_exponent",
                "fit_residual",
                "n_min",
                "n_max",
                "points",
            ]);
            table.push(vec![
                Cell::F64(params.alpha()),
                Cell::F64(params.beta()),
                Cell::F64(params.p()),
                Cell::U64(fit.d as u64),
                Cell::Str(fit.setting.to_string()),
                Cell::F64(fit.fitted_exponent),
                Cell::F64(fit.fit_residual),
                Cell::count_u128(fit.n_min),
                Cell::count_u128(fit.n_max),
                Cell::U64(fit.points as u64),
            ]);
            ok(table)
        }
        Cmd::Sample {
            kernel,
            seed,
            tail_tol,
            budget,
        } => {
            let params = kernel.params()?;
            let path = sampler::sample_path(&params, *tail_tol, *seed, &budget.budget())?;
            let mut table = Table::new(vec!["mode", "re", "im", "eigenvalue"]);
            for mode in path.modes() {
                let coords: Vec<String> =
                    mode.point.coords().iter().map(|c| c.to_string()).collect();
                table.push(vec![
                    Cell::Str(coords.join(";")),
                    Cell::F64(mode.coeff.re),
                    Cell::F64(mode.coeff.im),
                    Cell::F64(mode.eigenvalue),
                ]);
            }
            eprintln!(
                "modes: {}  excluded tail <= {:e}  squared norm: {:.6}",
                path.modes().len(),
                path.excluded_tail(),
                path.squared_norm()
            );
            ok(table)
        }
        Cmd::McCheck {
            kernel,
            n_grid,
            trials,
            seed,
            tail_tol,
            budget,
        } => {
            let params = kernel.params()?;
            let b = budget.budget();
            let mut table = Table::new(vec![
                "n",
                "trials",
                "mse",
                "stderr",
                "formula_lo",
                "formula_hi",
                "truncation_bias",
            ]);
            for &n in &n_grid.0 {
                let est = sampler::mc_avg_error(&params, n, *trials, *seed, *tail_tol, &b)?;
                table.push(vec![
                    Cell::count_u128(est.n),
                    Cell::U64(est.trials),
                    Cell::F64(est.mean_sq_error),
                    Cell::F64(est.std_error),
                    Cell::F64(est.formula_value.lower),
                    Cell::F64(est.formula_value.upper),
                    Cell::F64(est.truncation_bias),
                ]);
            }
            ok(table)
        }
    }
}
