//! Tractability classification and its empirical companions.
//!
//! The classifier encodes the known truth tables for this kernel family
//! verbatim as predicates on `(alpha, p)`; it never infers asymptotic
//! statements from numerics. The scanning, rate-fitting, and power-trace
//! operations produce *evidence* tables that a classification can be
//! checked against at desk scale, never proofs.
//!
//! Notion lattice (each arrow is an implication the profiles must respect):
//! SPT => PT => QPT => UWT => WT => (s,t)-WT, separately for the algebraic
//! scale (complexity polynomial in 1/eps) and the exponential scale
//! (complexity polynomial in 1 + ln(1/eps)).

use crate::complexity::{self, ComplexityQuery, ComplexityResult, Criterion, Setting};
use crate::error::Error;
use crate::kernel::KernelParams;
use crate::spectrum;
use crate::{Budget, Result};

/// One tractability verdict with the decisive rule spelled out.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Flag {
    pub holds: bool,
    pub rule: &'static str,
}

fn flag(holds: bool, rule: &'static str) -> Flag {
    Flag { holds, rule }
}

/// Complete classification of one `(alpha, p, setting, criterion)` cell.
///
/// `beta` never enters any of the yes/no answers (it only rescales the
/// error thresholds), which is why the profile does not store it.
#[derive(Debug, Clone, Copy)]
pub struct TractabilityProfile {
    pub alpha: f64,
    pub p: f64,
    pub setting: Setting,
    pub criterion: Criterion,
    pub alg_spt: Flag,
    pub alg_pt: Flag,
    pub alg_qpt: Flag,
    pub alg_uwt: Flag,
    pub alg_wt: Flag,
    pub curse: Flag,
    pub exp: Flag,
    pub uexp: Flag,
    pub exp_spt: Flag,
    pub exp_pt: Flag,
    pub exp_qpt: Flag,
    pub exp_uwt: Flag,
    pub exp_wt: Flag,
}

/// Truth tables for the Gevrey approximation problem. The worst and average
/// settings agree on most notions but genuinely differ at the boundary
/// `alpha = p`: quasi-polynomial tractability survives in the worst case
/// there, while uniform weak tractability in the average case requires the
/// strict inequality.
pub fn classify(
    alpha: f64,
    beta: f64,
    p: f64,
    setting: Setting,
    criterion: Criterion,
) -> Result<TractabilityProfile> {
    for (name, v) in [("alpha", alpha), ("beta", beta), ("p", p)] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::InvalidParameter {
                name,
                value: v,
                requirement: "must be finite and > 0",
            });
        }
    }
    let profile = match setting {
        Setting::Worst => TractabilityProfile {
            alpha,
            p,
            setting,
            criterion,
            alg_spt: flag(false, "worst case: never strongly polynomially tractable"),
            alg_pt: flag(false, "worst case: never polynomially tractable"),
            alg_qpt: flag(alpha >= p, "worst case: ALG-QPT iff alpha >= p"),
            alg_uwt: flag(true, "worst case: ALG-UWT for all parameters"),
            alg_wt: flag(true, "worst case: ALG-WT for all parameters"),
            curse: flag(false, "worst case: ALG-WT always holds, so no curse"),
            exp: flag(true, "exponentially convergent with exponent alpha/d"),
            uexp: flag(false, "exponent alpha/d decays with d, so never UEXP"),
            exp_spt: flag(false, "worst case: not EXP-UWT, hence not EXP-SPT"),
            exp_pt: flag(false, "worst case: not EXP-UWT, hence not EXP-PT"),
            exp_qpt: flag(false, "worst case: not EXP-UWT, hence not EXP-QPT"),
            exp_uwt: flag(false, "worst case: never EXP-UWT"),
            exp_wt: flag(alpha > p, "worst case: EXP-WT iff alpha > p"),
        },
        Setting::Average => TractabilityProfile {
            alpha,
            p,
            setting,
            criterion,
            alg_spt: flag(false, "average case: never strongly polynomially tractable"),
            alg_pt: flag(false, "average case: never polynomially tractable"),
            alg_qpt: flag(false, "average case: never ALG-QPT"),
            alg_uwt: flag(alpha > p, "average case: ALG-UWT iff alpha > p"),
            alg_wt: flag(alpha > p, "average case: ALG-WT iff alpha > p"),
            curse: flag(alpha <= p, "average case: curse of dimensionality iff alpha <= p"),
            exp: flag(true, "exponentially convergent with exponent alpha/d"),
            uexp: flag(false, "exponent alpha/d decays with d, so never UEXP"),
            exp_spt: flag(false, "average case: never EXP-UWT, hence not EXP-SPT"),
            exp_pt: flag(false, "average case: never EXP-UWT, hence not EXP-PT"),
            exp_qpt: flag(false, "average case: never EXP-UWT, hence not EXP-QPT"),
            exp_uwt: flag(false, "average case: never EXP-UWT"),
            exp_wt: flag(alpha > p, "average case: EXP-WT iff alpha > p"),
        },
    };
    Ok(profile)
}

impl TractabilityProfile {
    /// Exponent of exponential convergence for a given dimension.
    pub fn exp_exponent(&self, d: usize) -> f64 {
        self.alpha / d as f64
    }

    /// Algebraic (s,t)-weak tractability.
    pub fn alg_st_wt(&self, s: f64, t: f64) -> Result<Flag> {
        check_st(s, t)?;
        Ok(match self.setting {
            Setting::Worst => flag(true, "worst case: ALG-(s,t)-WT for all s, t > 0"),
            Setting::Average => {
                if t > 1.0 {
                    flag(true, "average case: ALG-(s,t)-WT whenever t > 1")
                } else {
                    flag(
                        self.alpha > self.p,
                        "average case: for t <= 1, ALG-(s,t)-WT iff alpha > p",
                    )
                }
            }
        })
    }

    /// Exponential (s,t)-weak tractability.
    ///
    /// The two settings are structurally asymmetric here: the worst case
    /// admits `s > p/alpha` at any `s`, while the average case splits
    /// `t <= 1` into `s <= 1` (threshold `s > p/alpha`) and `s > 1`
    /// (requires `alpha > p`). The classifier encodes both tables as they
    /// stand rather than harmonizing them.
    pub fn exp_st_wt(&self, s: f64, t: f64) -> Result<Flag> {
        check_st(s, t)?;
        Ok(match self.setting {
            Setting::Worst => flag(
                t > 1.0 || s > self.p / self.alpha,
                "worst case: EXP-(s,t)-WT iff t > 1 or s > p/alpha",
            ),
            Setting::Average => {
                if t > 1.0 {
                    flag(true, "average case: EXP-(s,t)-WT whenever t > 1")
                } else if s <= 1.0 {
                    flag(
                        s > self.p / self.alpha,
                        "average case: for t <= 1 and s <= 1, EXP-(s,t)-WT iff s > p/alpha",
                    )
                } else {
                    flag(
                        self.alpha > self.p,
                        "average case: for t <= 1 and s > 1, EXP-(s,t)-WT iff alpha > p",
                    )
                }
            }
        })
    }

    /// Named yes/no flags in report order.
    pub fn flags(&self) -> Vec<(&'static str, Flag)> {
        vec![
            ("ALG-SPT", self.alg_spt),
            ("ALG-PT", self.alg_pt),
            ("ALG-QPT", self.alg_qpt),
            ("ALG-UWT", self.alg_uwt),
            ("ALG-WT", self.alg_wt),
            ("curse-of-dimensionality", self.curse),
            ("EXP", self.exp),
            ("UEXP", self.uexp),
            ("EXP-SPT", self.exp_spt),
            ("EXP-PT", self.exp_pt),
            ("EXP-QPT", self.exp_qpt),
            ("EXP-UWT", self.exp_uwt),
            ("EXP-WT", self.exp_wt),
        ]
    }

    /// Human-readable profile, one notion per line with its rule.
    pub fn report(&self) -> String {
        let mut out = format!(
            "tractability profile: alpha={} p={} setting={} criterion={}\n",
            self.alpha, self.p, self.setting, self.criterion
        );
        for (name, f) in self.flags() {
            out.push_str(&format!(
                "  {name:<24} {:<5} ({})\n",
                if f.holds { "yes" } else { "no" },
                f.rule
            ));
        }
        out.push_str(&format!(
            "  exponent of exponential convergence: alpha/d = {}/d\n",
            self.alpha
        ));
        out
    }
}

fn check_st(s: f64, t: f64) -> Result<()> {
    if !(s > 0.0 && s.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "s",
            value: s,
            requirement: "must be finite and > 0",
        });
    }
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "t",
            value: t,
            requirement: "must be finite and > 0",
        });
    }
    Ok(())
}

/// One scan cell: a complexity result plus the growth diagnostics used to
/// eyeball tractability behavior.
#[derive(Debug, Clone)]
pub struct ScanRow {
    pub d: usize,
    pub epsilon: f64,
    pub result: Option<ComplexityResult>,
    pub error: Option<String>,
    pub ln_n: Option<f64>,
    /// `ln n / (eps^-s + d^t)`
    pub alg_ratio: Option<f64>,
    /// `ln n / ((1 + ln eps^-1)^s + d^t)`
    pub exp_ratio: Option<f64>,
}

/// Scan configuration: the parameter family plus the (s, t) pair used for
/// the derived ratio columns.
#[derive(Debug, Clone)]
pub struct ScanSpec {
    pub alpha: f64,
    pub beta: f64,
    pub p: f64,
    pub epsilons: Vec<f64>,
    pub dims: Vec<usize>,
    pub setting: Setting,
    pub criterion: Criterion,
    pub s: f64,
    pub t: f64,
}

/// Evaluates `n(eps, d)` over the grid (dims outer, epsilons inner), with
/// per-cell errors captured rather than aborting the table. `threads > 1`
/// distributes cells over a worker pool; the output order is the grid
/// order regardless of scheduling.
pub fn scan(spec: &ScanSpec, budget: &Budget, threads: usize) -> Result<Vec<ScanRow>> {
    check_st(spec.s, spec.t)?;
    let cells: Vec<(usize, f64)> = spec
        .dims
        .iter()
        .flat_map(|&d| spec.epsilons.iter().map(move |&e| (d, e)))
        .collect();

    let eval = |(d, epsilon): (usize, f64)| -> ScanRow {
        let outcome = KernelParams::new(spec.alpha, spec.beta, spec.p, d)
            .and_then(|params| ComplexityQuery::new(params, epsilon, spec.setting, spec.criterion))
            .and_then(|q| complexity::info_complexity(&q, budget));
        let (result, error) = match outcome {
            Ok(r) => (Some(r), None),
            Err(e) => (None, Some(e.to_string())),
        };
        let ln_n = result
            .filter(|r| r.n >= 1)
            .map(|r| (r.n as f64).ln());
        let alg_den = epsilon.powf(-spec.s) + (d as f64).powf(spec.t);
        let exp_den = (1.0 + (1.0 / epsilon).ln()).powf(spec.s) + (d as f64).powf(spec.t);
        ScanRow {
            d,
            epsilon,
            result,
            error,
            ln_n,
            alg_ratio: ln_n.map(|l| l / alg_den),
            exp_ratio: ln_n.map(|l| l / exp_den),
        }
    };

    if threads <= 1 || cells.len() <= 1 {
        return Ok(cells.into_iter().map(eval).collect());
    }
    let next = std::sync::atomic::AtomicUsize::new(0);
    let mut rows: Vec<Option<ScanRow>> = vec![None; cells.len()];
    let slots: Vec<std::sync::Mutex<&mut Option<ScanRow>>> =
        rows.iter_mut().map(std::sync::Mutex::new).collect();
    std::thread::scope(|scope| {
        for _ in 0..threads.min(cells.len()) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                if i >= cells.len() {
                    break;
                }
                let row = eval(cells[i]);
                **slots[i].lock().unwrap() = Some(row);
            });
        }
    });
    drop(slots);
    Ok(rows.into_iter().map(Option::unwrap).collect())
}

/// Least-squares fit of `ln ln(1/e(n, d))` against `ln n`: under
/// exponential convergence `e(n,d) ~ q^(n^(p*))` the slope estimates the
/// exponent `p*(d) = alpha / d`.
#[derive(Debug, Clone, Copy)]
pub struct ExpRateFit {
    pub d: usize,
    pub setting: Setting,
    pub fitted_exponent: f64,
    pub fit_residual: f64,
    pub n_min: u128,
    pub n_max: u128,
    pub points: usize,
}

pub fn exp_rate_fit(
    params: &KernelParams,
    setting: Setting,
    n_grid: &[u128],
    budget: &Budget,
) -> Result<ExpRateFit> {
    if n_grid.len() < 2 {
        return Err(Error::InvalidParameter {
            name: "n_grid",
            value: n_grid.len() as f64,
            requirement: "need at least two grid points",
        });
    }
    let floor = (1u128) << params.d().min(127);
    if let Some(&bad) = n_grid.iter().find(|&&n| n < floor) {
        return Err(Error::InvalidParameter {
            name: "n_grid",
            value: bad as f64,
            requirement: "all n must be >= 2^d for the asymptotic regime",
        });
    }
    let max_n = *n_grid.iter().max().unwrap();
    let spec = spectrum::build_spectrum(params, max_n + 1, 0.5, budget)?;
    if spec.enumerated_count() < max_n + 1 {
        return Err(Error::BudgetExhausted {
            classes: budget.max_classes,
            context: "spectrum too short for the requested rate fit".into(),
        });
    }

    let mut xs = Vec::with_capacity(n_grid.len());
    let mut ys = Vec::with_capacity(n_grid.len());
    for &n in n_grid {
        let e = match setting {
            Setting::Worst => {
                params.sqrt_eigenvalue_of_value(spec.value_at_position(n + 1)?)
            }
            Setting::Average => spec.tail_sum(n)?.midpoint().max(0.0).sqrt(),
        };
        if e <= 0.0 {
            return Err(Error::BeyondFloatRange {
                quantity: "minimal error underflowed in rate fit; reduce n_grid",
            });
        }
        let log_inv = (1.0 / e).ln();
        if log_inv <= 0.0 {
            return Err(Error::InvalidParameter {
                name: "n_grid",
                value: n as f64,
                requirement: "error must be below 1 across the fit range",
            });
        }
        xs.push((n as f64).ln());
        ys.push(log_inv.ln());
    }
    let (slope, intercept) = ols(&xs, &ys);
    let residual = (xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| {
            let r = y - (slope * x + intercept);
            r * r
        })
        .sum::<f64>()
        / xs.len() as f64)
        .sqrt();
    Ok(ExpRateFit {
        d: params.d(),
        setting,
        fitted_exponent: slope,
        fit_residual: residual,
        n_min: *n_grid.iter().min().unwrap(),
        n_max: max_n,
        points: n_grid.len(),
    })
}

fn ols(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

/// The power-trace diagnostic sequence
/// `ln((sum lambda^tau)^(1/tau) / CRI_d) / d^t` over the given dimensions.
/// Decay toward zero is evidence for (s,t)-weak tractability.
pub fn lemma_power_trace_diagnostic(
    alpha: f64,
    beta: f64,
    p: f64,
    tau: f64,
    t: f64,
    dims: &[usize],
    criterion: Criterion,
    budget: &Budget,
) -> Result<Vec<f64>> {
    if !(tau > 0.0 && tau < 1.0) {
        return Err(Error::InvalidParameter {
            name: "tau",
            value: tau,
            requirement: "must lie in (0, 1)",
        });
    }
    if !(t > 0.0) {
        return Err(Error::InvalidParameter {
            name: "t",
            value: t,
            requirement: "must be > 0",
        });
    }
    // three digits are plenty for a growth diagnostic, and heavy-tailed
    // cells get exponentially more expensive with the tolerance
    const DIAG_REL_TOL: f64 = 1e-3;
    let mut out = Vec::with_capacity(dims.len());
    for &d in dims {
        let params = KernelParams::new(alpha, beta, p, d)?;
        let pt = spectrum::power_trace(&params, tau, DIAG_REL_TOL, budget)?;
        let cri = match criterion {
            Criterion::Abs => 1.0,
            Criterion::Nor => spectrum::trace(&params, DIAG_REL_TOL, budget)?
                .midpoint()
                .sqrt(),
        };
        let value = (pt.midpoint().powf(1.0 / tau) / cri).ln() / (d as f64).powf(t);
        out.push(value);
    }
    Ok(out)
}
