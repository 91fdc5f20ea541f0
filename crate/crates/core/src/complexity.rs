//! Minimal errors and information complexity in both settings and both
//! error criteria.
//!
//! Average-case: `e_avg(n, d)^2` is the eigenvalue tail sum beyond position
//! `n`. Worst-case: `e_wor(n, d) = sqrt(lambda_{n+1})`. The information
//! complexity `n(eps, d)` is the least `n` whose error is at most
//! `eps * CRI`, where `CRI` is 1 under the absolute criterion and the
//! initial error under the normalized one. In the worst case the initial
//! error is 1, so both criteria coincide there.
//!
//! Decisions compare *enclosures*, never point estimates: a count is
//! certified only when the error bracket at `n` sits entirely at or below
//! the threshold and the bracket at `n - 1` sits entirely above it. When a
//! straddle survives budget escalation, an uncertified bracket is returned
//! instead of a guess.

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::kernel::KernelParams;
use crate::lattice;
use crate::spectrum::{self, Enclosure, Spectrum};
use crate::{Budget, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Setting {
    #[serde(rename = "wor")]
    Worst,
    #[serde(rename = "avg")]
    Average,
}

impl std::fmt::Display for Setting {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Setting::Worst => "wor",
            Setting::Average => "avg",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Criterion {
    Abs,
    Nor,
}

impl std::fmt::Display for Criterion {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Criterion::Abs => "abs",
            Criterion::Nor => "nor",
        })
    }
}

/// One information-complexity question: parameters, threshold, setting,
/// criterion.
#[derive(Debug, Clone, Copy)]
pub struct ComplexityQuery {
    pub params: KernelParams,
    pub epsilon: f64,
    pub setting: Setting,
    pub criterion: Criterion,
}

impl ComplexityQuery {
    pub fn new(
        params: KernelParams,
        epsilon: f64,
        setting: Setting,
        criterion: Criterion,
    ) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(Error::InvalidParameter {
                name: "epsilon",
                value: epsilon,
                requirement: "must lie in (0, 1)",
            });
        }
        Ok(ComplexityQuery {
            params,
            epsilon,
            setting,
            criterion,
        })
    }
}

/// Result of an information-complexity query. `certified` means the minimal
/// count is pinned exactly; otherwise `[n_lo, n_hi]` brackets it, with
/// `n_hi = None` when the budget ran out before any sufficient `n` was
/// found. `n` is the best point value (`n_hi` when known, else `n_lo`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ComplexityResult {
    pub n: u128,
    pub certified: bool,
    pub n_lo: u128,
    pub n_hi: Option<u128>,
}

impl ComplexityResult {
    fn certified(n: u128) -> Self {
        ComplexityResult {
            n,
            certified: true,
            n_lo: n,
            n_hi: Some(n),
        }
    }
}

/// Enclosure of the n-th minimal average-case error: the square root of
/// the eigenvalue tail sum beyond position `n`.
pub fn avg_error(params: &KernelParams, n: u128, budget: &Budget) -> Result<Enclosure> {
    let spec = spectrum_covering(params, n, 1e-9, budget)?;
    Ok(spec.tail_sum(n)?.sqrt())
}

/// The n-th minimal worst-case error `sqrt(lambda_{n+1})`, evaluated from
/// the class value so it stays representable beyond eigenvalue underflow.
pub fn wor_error(params: &KernelParams, n: u128, budget: &Budget) -> Result<f64> {
    let spec = spectrum_covering(params, n + 1, 0.9, budget)?;
    let value = spec.value_at_position(n + 1)?;
    Ok(params.sqrt_eigenvalue_of_value(value))
}

/// Builds a spectrum guaranteed to enumerate at least `positions` entries.
fn spectrum_covering(
    params: &KernelParams,
    positions: u128,
    tail_tol: f64,
    budget: &Budget,
) -> Result<Spectrum> {
    let spec = spectrum::build_spectrum(params, positions.max(1), tail_tol, budget)?;
    if spec.enumerated_count() < positions {
        return Err(Error::BudgetExhausted {
            classes: budget.max_classes,
            context: format!(
                "only {} of the requested {} eigenvalue positions enumerated",
                spec.enumerated_count(),
                positions
            ),
        });
    }
    Ok(spec)
}

/// Information complexity `n(eps, d)` for the query's setting and
/// criterion.
pub fn info_complexity(query: &ComplexityQuery, budget: &Budget) -> Result<ComplexityResult> {
    match query.setting {
        // worst case: both criteria share CRI = 1
        Setting::Worst => worst_case_count(&query.params, query.epsilon, budget),
        Setting::Average => average_case_count(query, budget),
    }
}

/// Worst case: `n = #{k : lambda(k) > eps^2}`, resolved exactly by walking
/// the sorted runs. Strict comparison, so eigenvalues exactly equal to
/// `eps^2` do not count.
fn worst_case_count(
    params: &KernelParams,
    epsilon: f64,
    budget: &Budget,
) -> Result<ComplexityResult> {
    let threshold = epsilon * epsilon;
    if threshold < f64::MIN_POSITIVE {
        return Err(Error::BeyondFloatRange {
            quantity: "eps^2 threshold",
        });
    }
    let mut min_count: u128 = 1 << 11;
    loop {
        let spec = spectrum::build_spectrum(params, min_count, 0.9, budget)?;
        let mut n: u128 = 0;
        for run in spec.runs() {
            if run.eigenvalue > threshold {
                n += run.multiplicity;
            } else {
                return Ok(ComplexityResult::certified(n));
            }
        }
        // all enumerated eigenvalues exceed the threshold
        if !spec.goals_met() || spec.enumerated_count() < min_count {
            return Ok(ComplexityResult {
                n: spec.enumerated_count(),
                certified: false,
                n_lo: spec.enumerated_count(),
                n_hi: None,
            });
        }
        min_count = min_count.saturating_mul(8);
    }
}

fn average_case_count(query: &ComplexityQuery, budget: &Budget) -> Result<ComplexityResult> {
    let eps2 = query.epsilon * query.epsilon;
    if eps2 < f64::MIN_POSITIVE {
        return Err(Error::BeyondFloatRange {
            quantity: "eps^2 threshold",
        });
    }

    let mut min_count: u128 = 1 << 10;
    let mut tail_tol = 1e-4;
    let mut best: Option<(u128, Option<u128>)> = None;
    for round in 0..8 {
        let spec = spectrum::build_spectrum(&query.params, min_count, tail_tol, budget)?;
        // thresholds, conservative on both sides for NOR
        let trace = spec.trace_enclosure();
        let (thresh_qualify, thresh_disqualify) = match query.criterion {
            Criterion::Abs => (eps2, eps2),
            Criterion::Nor => (eps2 * trace.lower, eps2 * trace.upper),
        };
        if thresh_qualify < f64::MIN_POSITIVE {
            return Err(Error::BeyondFloatRange {
                quantity: "eps^2 * CRI^2 threshold",
            });
        }

        let count = spec.enumerated_count();
        // smallest n with tail upper bound <= qualify threshold: n is
        // provably sufficient
        let n_hi = partition(count, |n| {
            spec.tail_sum(n).map(|t| t.upper <= thresh_qualify)
        })?;
        // smallest n with tail lower bound <= disqualify threshold: below
        // this, n is provably insufficient
        let n_lo = partition(count, |n| {
            spec.tail_sum(n).map(|t| t.lower <= thresh_disqualify)
        })?;

        match (n_lo, n_hi) {
            (Some(lo), Some(hi)) if lo == hi => {
                return Ok(ComplexityResult::certified(lo));
            }
            (Some(lo), hi) => best = Some((lo, hi)),
            (None, _) => best = Some((count, None)),
        }
        // straddling: escalate precision unless the budget already failed
        if !spec.goals_met() && round > 1 {
            break;
        }
        min_count = min_count.saturating_mul(4);
        tail_tol *= 1e-2;
        if tail_tol < 1e-15 {
            tail_tol = 1e-15;
        }
    }
    let (n_lo, n_hi) = best.unwrap_or((0, None));
    Ok(ComplexityResult {
        n: n_hi.unwrap_or(n_lo),
        certified: false,
        n_lo,
        n_hi,
    })
}

/// Least `n` in `[0, count]` satisfying the monotone predicate, or `None`.
fn partition(
    count: u128,
    mut pred: impl FnMut(u128) -> Result<bool>,
) -> Result<Option<u128>> {
    if !pred(count)? {
        return Ok(None);
    }
    let (mut lo, mut hi) = (0u128, count); // pred(hi) holds
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if pred(mid)? {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Ok(Some(lo))
}

/// Lower bound `(1 - eps^2) * Lambda_d` on the normalized average-case
/// complexity (evaluated with the trace lower bound, so the returned value
/// is itself a valid lower bound).
pub fn nor_lower_bound(params: &KernelParams, epsilon: f64, budget: &Budget) -> Result<f64> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::InvalidParameter {
            name: "epsilon",
            value: epsilon,
            requirement: "must lie in (0, 1)",
        });
    }
    let t = spectrum::trace(params, 1e-6, budget)?;
    Ok((1.0 - epsilon * epsilon) * t.lower)
}

/// Worst-case complexity via grid counting: the number of lattice points
/// with eigenvalue strictly above `eps^2`, accumulated class by class up to
/// the value horizon `m* = (ln(eps^-2) / (2 beta))^(p/alpha)`.
pub fn wor_complexity_via_count(
    params: &KernelParams,
    epsilon: f64,
    budget: &Budget,
) -> Result<u128> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::InvalidParameter {
            name: "epsilon",
            value: epsilon,
            requirement: "must lie in (0, 1)",
        });
    }
    let threshold = epsilon * epsilon;
    if threshold < f64::MIN_POSITIVE {
        return Err(Error::BeyondFloatRange {
            quantity: "eps^2 threshold",
        });
    }
    let m_star = ((1.0 / threshold).ln() / (2.0 * params.beta())).powf(params.p() / params.alpha());
    let list = lattice::enumerate_classes(
        params.d(),
        params.p(),
        m_star,
        None,
        budget,
    )?;
    if !list.complete {
        return Err(Error::BudgetExhausted {
            classes: list.classes.len() as u64,
            context: format!("counting eigenvalues above {threshold:e}"),
        });
    }
    let mut n: u128 = 0;
    for class in &list.classes {
        // strict comparison: lambda exactly eps^2 is excluded
        if params.eigenvalue_of_value(class.value()) > threshold {
            n = n
                .checked_add(class.multiplicity_u128(params.d())?)
                .ok_or(Error::Overflow("worst-case count"))?;
        }
    }
    Ok(n)
}
