//! The nonincreasing eigenvalue sequence with certified tail bounds, plus
//! trace and power-trace enclosures.

use crate::accum::NeumaierSum;
use crate::bounds::TailTracker;
use crate::error::Error;
use crate::kernel::KernelParams;
use crate::lattice::{ClassStream, LevelClass};
use crate::{Budget, Result};

/// A two-sided bound `[lower, upper]` on a nonnegative series sum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Enclosure {
    pub lower: f64,
    pub upper: f64,
}

impl Enclosure {
    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lower + self.upper)
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lower <= x && x <= self.upper
    }

    pub fn sqrt(&self) -> Enclosure {
        Enclosure {
            lower: self.lower.max(0.0).sqrt(),
            upper: self.upper.sqrt(),
        }
    }
}

/// Enclosure of a trace `Lambda_d` or power trace.
pub type TraceEstimate = Enclosure;

/// One maximal run of equal class value, hence equal eigenvalue. Distinct
/// values can still share an eigenvalue where `exp` plateaus in f64 (deep
/// underflow); such runs stay separate, which affects nothing downstream.
#[derive(Debug, Clone, Copy)]
pub struct SpectrumRun {
    pub eigenvalue: f64,
    pub multiplicity: u128,
    /// `sum |k_i|^p` shared by every point in this run.
    pub value: f64,
}

/// The nonincreasing rearrangement of the eigenvalues, in run-length form,
/// together with a certified upper bound on everything not enumerated.
///
/// All lattice points with `sum |k_i|^p <= value_horizon` are included, so
/// the expansion of `runs` is exactly the sorted prefix of the spectrum and
/// `tail_upper` bounds the sum of all remaining eigenvalues.
#[derive(Debug, Clone)]
pub struct Spectrum {
    params: KernelParams,
    runs: Vec<SpectrumRun>,
    /// cumulative point count through each run
    cum_counts: Vec<u128>,
    /// suffix sums: `suffix[i]` = sum of eigenvalue mass of runs `i..`
    suffix_sums: Vec<f64>,
    enumerated_count: u128,
    partial_sum: f64,
    tail_upper: f64,
    value_horizon: f64,
    goals_met: bool,
}

impl Spectrum {
    pub fn params(&self) -> &KernelParams {
        &self.params
    }

    pub fn runs(&self) -> &[SpectrumRun] {
        &self.runs
    }

    pub fn enumerated_count(&self) -> u128 {
        self.enumerated_count
    }

    /// Compensated sum of all enumerated eigenvalues.
    pub fn partial_sum(&self) -> f64 {
        self.partial_sum
    }

    /// Certified upper bound on the sum of all unenumerated eigenvalues.
    pub fn tail_upper(&self) -> f64 {
        self.tail_upper
    }

    /// Every lattice point with value at most this is enumerated.
    pub fn value_horizon(&self) -> f64 {
        self.value_horizon
    }

    /// False when the enumeration budget ran out before both the requested
    /// count and the tail tolerance were reached.
    pub fn goals_met(&self) -> bool {
        self.goals_met
    }

    /// Trace enclosure implied by this spectrum.
    pub fn trace_enclosure(&self) -> TraceEstimate {
        widen(self.partial_sum, self.partial_sum + self.tail_upper)
    }

    /// The `position`-th eigenvalue (1-based), i.e. `lambda_{d,position}`.
    pub fn eigenvalue_at_position(&self, position: u128) -> Result<f64> {
        Ok(self.run_at_position(position)?.eigenvalue)
    }

    /// Class value `sum |k_i|^p` behind the `position`-th eigenvalue.
    pub fn value_at_position(&self, position: u128) -> Result<f64> {
        Ok(self.run_at_position(position)?.value)
    }

    fn run_at_position(&self, position: u128) -> Result<&SpectrumRun> {
        if position == 0 || position > self.enumerated_count {
            return Err(Error::PositionBeyondEnumeration {
                position,
                enumerated: self.enumerated_count,
            });
        }
        let run = self.cum_counts.partition_point(|&c| c < position);
        Ok(&self.runs[run])
    }

    /// Enclosure of `sum over k > n of lambda_{d,k}`, summed directly over
    /// the enumerated runs beyond position `n` (never by subtracting from
    /// the trace).
    pub fn tail_sum(&self, n: u128) -> Result<Enclosure> {
        if n > self.enumerated_count {
            return Err(Error::PositionBeyondEnumeration {
                position: n,
                enumerated: self.enumerated_count,
            });
        }
        let lower = if n == self.enumerated_count {
            0.0
        } else {
            // first run whose cumulative count passes position n + 1
            let run = self.cum_counts.partition_point(|&c| c < n + 1);
            let within = self.cum_counts[run] - n;
            self.suffix_sums[run + 1] + within as f64 * self.runs[run].eigenvalue
        };
        Ok(widen(lower, lower + self.tail_upper))
    }

    /// First `count` eigenvalues in nonincreasing order (run expansion).
    pub fn expanded_prefix(&self, count: usize) -> Vec<f64> {
        let mut out = Vec::with_capacity(count);
        'runs: for run in &self.runs {
            for _ in 0..run.multiplicity {
                if out.len() >= count {
                    break 'runs;
                }
                out.push(run.eigenvalue);
            }
        }
        out
    }
}

/// How often goal checks are attempted (in emitted classes).
const CHECK_INTERVAL: u64 = 1024;

/// Relative allowance for the floating-point arithmetic inside partial
/// sums: every `multiplicity * eigenvalue` product rounds once, the
/// multiplicity conversion rounds once, and the compensated accumulation
/// leaves O(eps) residue. Enclosure endpoints are widened by this factor so
/// they bound the exact real-arithmetic value, not just the computed one.
const SUM_SLOP: f64 = 1e-15;

fn widen(lower: f64, upper: f64) -> Enclosure {
    Enclosure {
        lower: lower * (1.0 - SUM_SLOP),
        upper: upper * (1.0 + SUM_SLOP),
    }
}

/// Shared enumeration driver. Emits classes in value order, accumulating a
/// per-class weight supplied by `weight`, and stops at the first *complete*
/// value horizon where `done` says the goals are met.
#[derive(Clone, Copy)]
struct Drive {
    partial: f64,
    count: u128,
    classes: u64,
    horizon: f64,
    tail_upper: f64,
}

fn drive_enumeration(
    params: &KernelParams,
    budget: &Budget,
    mut weight: impl FnMut(&KernelParams, f64) -> f64,
    mut on_class: impl FnMut(&LevelClass, u128, f64),
    mut done: impl FnMut(&Drive) -> bool,
    projection: Option<f64>, // relative tolerance for feasibility projection
) -> Result<(Drive, bool)> {
    let d = params.d();
    let mut stream = ClassStream::new(d, params.p());
    let mut tracker = TailTracker::new(params);
    let mut partial = NeumaierSum::new();
    let mut count: u128 = 0;
    let mut classes: u64 = 0;
    let started = std::time::Instant::now();
    let mut pending = stream.next_class();
    let mut want_check = false;
    let mut state = Drive {
        partial: 0.0,
        count: 0,
        classes: 0,
        horizon: -1.0,
        tail_upper: f64::INFINITY,
    };
    let mut prev_checkpoint = Drive { ..state };

    while let Some(class) = pending.take() {
        let mult = class.multiplicity_u128(d)?;
        let lambda = weight(params, class.value());
        partial.add(mult as f64 * lambda);
        count = count
            .checked_add(mult)
            .ok_or(Error::Overflow("enumerated point count"))?;
        classes += 1;
        tracker.record(class.top_magnitude(), mult as f64);
        on_class(&class, mult, lambda);

        pending = stream.next_class();
        let horizon_complete = match &pending {
            Some(next) => next.value() > class.value(),
            None => true,
        };
        // a check request latches until the next complete horizon
        want_check |= classes % CHECK_INTERVAL == 0 || classes <= 64 || pending.is_none();
        if horizon_complete && want_check {
            want_check = false;
            state = Drive {
                partial: partial.value(),
                count,
                classes,
                horizon: class.value(),
                tail_upper: tracker.tail_upper(class.value()),
            };
            if done(&state) {
                return Ok((state, true));
            }
            if let (Some(rel_tol), true) = (projection, classes >= 20_000) {
                if let Some(ctx) = hopeless(
                    params,
                    &mut tracker,
                    &state,
                    &prev_checkpoint,
                    rel_tol,
                    budget.max_classes,
                ) {
                    return Err(Error::BudgetExhausted {
                        classes,
                        context: ctx,
                    });
                }
            }
            if state.horizon > prev_checkpoint.horizon * 1.05 {
                prev_checkpoint = Drive { ..state };
            }
        }
        if classes >= budget.max_classes {
            return Ok((
                Drive {
                    partial: partial.value(),
                    count,
                    classes,
                    horizon: state.horizon,
                    tail_upper: state.tail_upper,
                },
                false,
            ));
        }
        if let Some(cap) = budget.time_cap {
            if classes % 4096 == 0 && started.elapsed() > cap {
                return Ok((
                    Drive {
                        partial: partial.value(),
                        count,
                        classes,
                        horizon: state.horizon,
                        tail_upper: state.tail_upper,
                    },
                    false,
                ));
            }
        }
    }
    let met = pending.is_none() && done(&state);
    Ok((state, met))
}

/// Deterministic early-abort: when meeting `rel_tol` provably needs a value
/// horizon whose class count dwarfs the remaining budget, give up now
/// instead of burning the budget. Purely a resource decision; it can only
/// turn a slow failure into a fast one.
///
/// The class count is extrapolated with the power law observed between the
/// last two checkpoints. That local slope only steepens as the horizon
/// grows (partition-like growth accelerates in log-log, the volume regime
/// is a constant d/p), so the projection is an underestimate and a feasible
/// run is never aborted.
fn hopeless(
    params: &KernelParams,
    tracker: &mut TailTracker,
    state: &Drive,
    prev: &Drive,
    rel_tol: f64,
    max_classes: u64,
) -> Option<String> {
    if params.alpha() < params.p() || state.horizon < 1.0 {
        return None; // no cheap forward bound available
    }
    if prev.classes < 512 || state.horizon <= prev.horizon * 1.02 {
        return None; // no reliable slope yet
    }
    let target = rel_tol * state.partial;
    // find a horizon the Chernoff majorant deems sufficient (the shell
    // bound would cost O(V^(1/p)) per probe, far too much out here)
    let mut v_hi = state.horizon;
    let mut reachable = false;
    for _ in 0..60 {
        if tracker.chernoff_bound(v_hi) <= target {
            reachable = true;
            break;
        }
        v_hi *= 1.25;
    }
    if !reachable {
        return None; // majorant inconclusive at any probed horizon
    }
    let slope = ((state.classes as f64 / prev.classes as f64).ln()
        / (state.horizon / prev.horizon).ln())
    .max(1.0);
    let projected = state.classes as f64 * (v_hi / state.horizon).powf(slope);
    if projected > 8.0 * max_classes as f64 {
        Some(format!(
            "projected ~{projected:.1e} classes to reach relative tolerance {rel_tol:e} \
             (budget {max_classes})"
        ))
    } else {
        None
    }
}

/// Builds the sorted spectrum until at least `min_count` eigenvalues are
/// enumerated *and* the certified tail bound drops below
/// `tail_tol * partial_sum`. On budget exhaustion the partial spectrum is
/// returned with `goals_met` = false.
pub fn build_spectrum(
    params: &KernelParams,
    min_count: u128,
    tail_tol: f64,
    budget: &Budget,
) -> Result<Spectrum> {
    if min_count == 0 {
        return Err(Error::InvalidParameter {
            name: "min_count",
            value: 0.0,
            requirement: "must be >= 1",
        });
    }
    if !(tail_tol > 0.0) {
        return Err(Error::InvalidParameter {
            name: "tail_tol",
            value: tail_tol,
            requirement: "must be > 0",
        });
    }
    let mut runs: Vec<SpectrumRun> = Vec::new();
    let (drive, met) = drive_enumeration(
        params,
        budget,
        |p, v| p.eigenvalue_of_value(v),
        |class, mult, lambda| {
            // runs are keyed by the exact class value: the eigenvalue is a
            // monotone function of it, and the value stays meaningful even
            // after the eigenvalue underflows
            match runs.last_mut() {
                Some(run) if run.value.to_bits() == class.value().to_bits() => {
                    run.multiplicity += mult;
                }
                _ => {
                    debug_assert!(runs.last().map_or(true, |r| r.eigenvalue >= lambda));
                    runs.push(SpectrumRun {
                        eigenvalue: lambda,
                        multiplicity: mult,
                        value: class.value(),
                    });
                }
            }
        },
        |state| state.count >= min_count && state.tail_upper <= tail_tol * state.partial,
        None,
    )?;

    // strict horizon: drop runs beyond the last complete value horizon so
    // the stored prefix is exactly {v <= horizon}
    let horizon = drive.horizon;
    let eps = horizon + horizon.abs() * crate::lattice::VALUE_EPS;
    while runs.last().map_or(false, |r| r.value > eps) {
        runs.pop();
    }

    let mut cum_counts = Vec::with_capacity(runs.len());
    let mut total: u128 = 0;
    for run in &runs {
        total = total
            .checked_add(run.multiplicity)
            .ok_or(Error::Overflow("cumulative eigenvalue count"))?;
        cum_counts.push(total);
    }
    // suffix sums accumulated small-to-large
    let mut suffix_sums = vec![0.0; runs.len() + 1];
    let mut acc = NeumaierSum::new();
    for (i, run) in runs.iter().enumerate().rev() {
        acc.add(run.multiplicity as f64 * run.eigenvalue);
        suffix_sums[i] = acc.value();
    }
    let partial_sum = suffix_sums.first().copied().unwrap_or(0.0);

    Ok(Spectrum {
        params: *params,
        runs,
        cum_counts,
        suffix_sums,
        enumerated_count: total,
        partial_sum,
        tail_upper: drive.tail_upper,
        value_horizon: horizon,
        goals_met: met,
    })
}

/// Enclosure of the trace `Lambda_d = sum of all eigenvalues` with relative
/// width at most `rel_tol`.
pub fn trace(params: &KernelParams, rel_tol: f64, budget: &Budget) -> Result<TraceEstimate> {
    weighted_trace(params, 1.0, rel_tol, budget)
}

/// Enclosure of the power trace `sum lambda^tau`.
///
/// The partial sums raise each enumerated eigenvalue to `tau` directly;
/// only the tail majorant uses the identity with the `tau beta` kernel, so
/// comparing this against `trace` of the rescaled instance is a genuine
/// two-route check.
pub fn power_trace(
    params: &KernelParams,
    tau: f64,
    rel_tol: f64,
    budget: &Budget,
) -> Result<TraceEstimate> {
    if !(tau > 0.0 && tau.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "tau",
            value: tau,
            requirement: "must be finite and > 0",
        });
    }
    weighted_trace(params, tau, rel_tol, budget)
}

fn weighted_trace(
    params: &KernelParams,
    tau: f64,
    rel_tol: f64,
    budget: &Budget,
) -> Result<TraceEstimate> {
    if !(rel_tol > 0.0 && rel_tol < 1.0) {
        return Err(Error::InvalidParameter {
            name: "rel_tol",
            value: rel_tol,
            requirement: "must lie in (0, 1)",
        });
    }
    // lambda^tau is the eigenvalue of the instance with beta -> tau beta;
    // the majorant tracks that instance while the sum itself raises the
    // original eigenvalues to tau.
    let scaled = params.with_beta(tau * params.beta())?;
    // stop slightly below the requested tolerance so the rounding slop in
    // the enclosure endpoints never pushes the width past it
    let goal = (rel_tol - 4.0 * SUM_SLOP).max(0.5 * rel_tol);
    let (drive, met) = drive_enumeration(
        &scaled,
        budget,
        |_, v| {
            let lambda = params.eigenvalue_of_value(v);
            if tau == 1.0 {
                lambda
            } else if lambda > 0.0 {
                lambda.powf(tau)
            } else {
                0.0
            }
        },
        |_, _, _| {},
        |state| state.tail_upper <= goal * state.partial,
        Some(rel_tol),
    )?;
    if !met {
        return Err(Error::BudgetExhausted {
            classes: drive.classes,
            context: format!(
                "trace enclosure still {:.3e} wide relative to {:.6e} after horizon {}",
                drive.tail_upper / drive.partial.max(f64::MIN_POSITIVE),
                drive.partial,
                drive.horizon
            ),
        });
    }
    Ok(widen(drive.partial, drive.partial + drive.tail_upper))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice;

    fn params(alpha: f64, beta: f64, p: f64, d: usize) -> KernelParams {
        KernelParams::new(alpha, beta, p, d).unwrap()
    }

    /// independent 1-d series for the factorized trace at alpha = p
    fn factorized_trace(beta: f64, p: f64, d: usize) -> f64 {
        let s: f64 = (1..60_000u64)
            .map(|h| (-2.0 * beta * (h as f64).powf(p)).exp())
            .sum();
        (1.0 + 2.0 * s).powi(d as i32)
    }

    #[test]
    fn unit_vectors_fill_positions_two_through_2d_plus_one() {
        for d in [1usize, 2, 3] {
            for p in [0.5, 1.0, 2.0] {
                let pr = params(1.3, 0.8, p, d);
                let spec = build_spectrum(&pr, (2 * d + 1) as u128, 0.9, &Budget::default())
                    .unwrap();
                let lam = (-2.0 * 0.8f64).exp();
                let prefix = spec.expanded_prefix(2 * d + 1);
                assert_eq!(prefix[0], 1.0);
                for &x in &prefix[1..] {
                    assert!((x - lam).abs() < 1e-15);
                }
            }
        }
    }

    #[test]
    fn one_dimensional_ladder() {
        // d=1, alpha=2, beta=1: lambda for |k| = h is exp(-2 h^2)
        let pr = params(2.0, 1.0, 1.7, 1);
        let spec = build_spectrum(&pr, 7, 1e-9, &Budget::default()).unwrap();
        let runs = spec.runs();
        assert_eq!(runs[0].eigenvalue, 1.0);
        assert_eq!(runs[0].multiplicity, 1);
        assert!((runs[1].eigenvalue - (-2.0f64).exp()).abs() < 1e-15);
        assert_eq!(runs[1].multiplicity, 2);
        assert!((runs[2].eigenvalue - (-8.0f64).exp()).abs() < 1e-18);
        assert_eq!(runs[2].multiplicity, 2);
    }

    #[test]
    fn third_run_of_two_dimensional_gaussian_like_case() {
        let pr = params(2.0, 1.0, 2.0, 2);
        let spec = build_spectrum(&pr, 9, 1e-9, &Budget::default()).unwrap();
        let runs = spec.runs();
        assert!((runs[2].eigenvalue - (-4.0f64).exp()).abs() < 1e-17);
        assert_eq!(runs[2].multiplicity, 4);
    }

    #[test]
    fn trace_one_dimensional_geometric() {
        let pr = params(1.0, 0.5, 1.0, 1);
        let t = trace(&pr, 1e-10, &Budget::default()).unwrap();
        let exact = 1.0 + 2.0 / (std::f64::consts::E - 1.0);
        assert!(t.contains(exact));
        assert!(t.width() <= 1e-10 * t.lower);
        assert!((exact - 2.1639534137).abs() < 1e-9);
    }

    #[test]
    fn trace_contains_factorized_value_in_dimension_five() {
        let pr = params(2.0, 1.0, 2.0, 5);
        let t = trace(&pr, 1e-10, &Budget::default()).unwrap();
        let a5 = factorized_trace(1.0, 2.0, 5);
        assert!(t.contains(a5), "enclosure {t:?} misses {a5}");
    }

    #[test]
    fn trace_at_least_one() {
        let pr = params(0.7, 2.0, 1.3, 3);
        let t = trace(&pr, 1e-8, &Budget::default()).unwrap();
        assert!(t.lower >= 1.0);
    }

    #[test]
    fn power_trace_tau_one_equals_trace() {
        let pr = params(1.0, 0.7, 2.0, 2);
        let a = trace(&pr, 1e-9, &Budget::default()).unwrap();
        let b = power_trace(&pr, 1.0, 1e-9, &Budget::default()).unwrap();
        assert!(a.lower <= b.upper && b.lower <= a.upper);
    }

    #[test]
    fn power_trace_geometric_example() {
        // d=1, alpha=p=1, beta=0.5, tau=2 -> 1 + 2/(e^2 - 1)
        let pr = params(1.0, 0.5, 1.0, 1);
        let t = power_trace(&pr, 2.0, 1e-11, &Budget::default()).unwrap();
        let exact = 1.0 + 2.0 / (std::f64::consts::E.powi(2) - 1.0);
        assert!(t.contains(exact));
        assert!((exact - 1.3130352855).abs() < 1e-9);
    }

    #[test]
    fn power_trace_half_matches_rescaled_factorization() {
        // tau = 1/2 at alpha = p: (1 + 2 sum e^{-beta h^p})^d
        let pr = params(1.0, 0.5, 1.0, 4);
        let t = power_trace(&pr, 0.5, 1e-9, &Budget::default()).unwrap();
        let expected = factorized_trace(0.25, 1.0, 4);
        assert!(t.contains(expected), "{t:?} misses {expected}");
    }

    #[test]
    fn tail_sum_examples() {
        let pr = params(1.0, 0.5, 1.0, 1);
        let spec = build_spectrum(&pr, 5, 1e-11, &Budget::default()).unwrap();
        let lam = 1.0 + 2.0 / (std::f64::consts::E - 1.0);
        let full = spec.tail_sum(0).unwrap();
        assert!(full.contains(lam));
        let after_one = spec.tail_sum(1).unwrap();
        let exact = 2.0 / (std::f64::consts::E - 1.0);
        assert!(after_one.contains(exact));
        let at_end = spec.tail_sum(spec.enumerated_count()).unwrap();
        assert_eq!(at_end.lower, 0.0);
        // upper end carries the rounding allowance
        assert!(at_end.upper >= spec.tail_upper());
        assert!(at_end.upper <= spec.tail_upper() * (1.0 + 1e-14));
    }

    #[test]
    fn tail_sum_is_nonincreasing_and_nonnegative() {
        let pr = params(1.0, 1.0, 2.0, 2);
        let spec = build_spectrum(&pr, 40, 1e-8, &Budget::default()).unwrap();
        let mut prev = f64::INFINITY;
        for n in 0..=spec.enumerated_count().min(60) {
            let t = spec.tail_sum(n).unwrap();
            assert!(t.lower >= 0.0);
            assert!(t.lower <= prev + 1e-18);
            prev = t.lower;
        }
        assert!(spec.tail_sum(spec.enumerated_count() + 1).is_err());
    }

    #[test]
    fn rearrangement_matches_brute_force_prefix() {
        for &(alpha, beta, p, d) in &[
            (1.0, 0.5, 1.0, 2usize),
            (2.0, 1.0, 2.0, 3),
            (0.5, 0.5, 0.5, 2),
            (1.5, 0.7, 2.0, 3),
        ] {
            let pr = params(alpha, beta, p, d);
            let spec = build_spectrum(&pr, 120, 0.5, &Budget::default()).unwrap();
            let brute = lattice::brute_force_points(&pr, 8).unwrap();
            // compare where the box provably covers: eigenvalues strictly
            // above the largest eigenvalue outside the box
            let outside = pr.eigenvalue_of_value(9f64.powf(p));
            let expanded = spec.expanded_prefix(120);
            for (i, lam) in expanded.iter().enumerate() {
                if *lam <= outside || i >= brute.len() {
                    break;
                }
                assert_eq!(
                    lam.to_bits(),
                    brute[i].1.to_bits(),
                    "position {i} mismatch for {alpha},{beta},{p},{d}"
                );
            }
        }
    }

    #[test]
    fn enclosures_nest_as_tolerance_shrinks() {
        let pr = params(1.0, 0.5, 2.0, 3);
        let loose = trace(&pr, 1e-3, &Budget::default()).unwrap();
        let tight = trace(&pr, 1e-9, &Budget::default()).unwrap();
        assert!(tight.width() <= loose.width());
        assert!(loose.lower <= tight.lower + 1e-15);
        assert!(tight.upper <= loose.upper * (1.0 + 1e-12));
        assert!(loose.width() <= 1e-3 * loose.lower);
        assert!(tight.width() <= 1e-9 * tight.lower);
    }

    #[test]
    fn budget_exhaustion_is_flagged() {
        let pr = params(0.5, 0.5, 2.0, 3);
        let tight = Budget::classes(10);
        let spec = build_spectrum(&pr, 1_000_000, 1e-12, &tight).unwrap();
        assert!(!spec.goals_met());
        assert!(matches!(
            trace(&pr, 1e-12, &tight),
            Err(Error::BudgetExhausted { .. })
        ));
    }

    #[test]
    fn decomposition_consistency() {
        // partial prefix + tail at n stays inside the trace enclosure
        let pr = params(1.0, 0.5, 1.0, 2);
        let spec = build_spectrum(&pr, 50, 1e-10, &Budget::default()).unwrap();
        let tr = spec.trace_enclosure();
        for n in [0u128, 1, 5, 20, 50] {
            let head: f64 = spec.expanded_prefix(n as usize).iter().sum();
            let tail = spec.tail_sum(n).unwrap();
            assert!(head + tail.lower <= tr.upper * (1.0 + 1e-12));
            assert!(head + tail.upper >= tr.lower * (1.0 - 1e-12));
        }
    }
}
