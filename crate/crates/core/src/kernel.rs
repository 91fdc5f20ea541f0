//! Problem instances, eigenvalue evaluation, and kernel spot checks.
//!
//! Every eigenvalue in this crate is `exp(-2 beta (sum |k_i|^p)^(alpha/p))`.
//! The enumeration, the brute-force oracle, and the sampler all funnel
//! through the same canonical evaluation path (`value_of_runs` followed by
//! `eigenvalue_of_value`) so that one lattice point produces bit-identical
//! eigenvalues no matter which subsystem asked.

use crate::accum::NeumaierSum;
use crate::error::Error;
use crate::lattice;
use crate::{Budget, Result};

/// Parameters of a Gevrey kernel instance: smoothness exponent `alpha`,
/// decay weight `beta`, the `l_p` index, and the dimension.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelParams {
    alpha: f64,
    beta: f64,
    p: f64,
    d: usize,
}

impl KernelParams {
    pub fn new(alpha: f64, beta: f64, p: f64, d: usize) -> Result<Self> {
        fn positive(name: &'static str, v: f64) -> Result<()> {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::InvalidParameter {
                    name,
                    value: v,
                    requirement: "must be finite and > 0",
                })
            }
        }
        positive("alpha", alpha)?;
        positive("beta", beta)?;
        positive("p", p)?;
        if d == 0 {
            return Err(Error::InvalidParameter {
                name: "d",
                value: 0.0,
                requirement: "dimension must be >= 1",
            });
        }
        Ok(KernelParams { alpha, beta, p, d })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// Exponent `alpha / p` applied to the class value `sum |k_i|^p`.
    pub fn theta(&self) -> f64 {
        self.alpha / self.p
    }

    /// Same instance with the decay weight rescaled (used by power traces:
    /// `lambda^tau` is the eigenvalue of the kernel with `beta -> tau beta`).
    pub fn with_beta(&self, beta: f64) -> Result<Self> {
        KernelParams::new(self.alpha, beta, self.p, self.d)
    }

    /// Eigenvalue as a function of the class value `v = sum |k_i|^p`.
    ///
    /// This is the single evaluation path used everywhere; `v = 0` maps to
    /// exactly 1.
    #[inline]
    pub fn eigenvalue_of_value(&self, value: f64) -> f64 {
        let t = if self.alpha == self.p {
            value
        } else {
            value.powf(self.theta())
        };
        (-2.0 * self.beta * t).exp()
    }

    /// Square root of the eigenvalue, evaluated directly as
    /// `exp(-beta v^(alpha/p))` so it stays representable even where the
    /// eigenvalue itself underflows (worst-case errors reach e^-700 while
    /// eigenvalues bottom out near e^-745).
    #[inline]
    pub fn sqrt_eigenvalue_of_value(&self, value: f64) -> f64 {
        let t = if self.alpha == self.p {
            value
        } else {
            value.powf(self.theta())
        };
        (-self.beta * t).exp()
    }

    /// Eigenvalue at a lattice point.
    ///
    /// Invariant under coordinate permutations and sign flips by
    /// construction: the point is first reduced to its magnitude multiset.
    pub fn eigenvalue_at(&self, k: &LatticePoint) -> Result<f64> {
        if k.coords().len() != self.d {
            return Err(Error::DimensionMismatch {
                expected: self.d,
                got: k.coords().len(),
            });
        }
        let runs = runs_of_point(k.coords());
        let mut pows = MagnitudePowers::new(self.p);
        Ok(self.eigenvalue_of_value(value_of_runs(&runs, &mut pows)))
    }
}

/// A multi-index `k` in `Z^d`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LatticePoint(Vec<i64>);

impl LatticePoint {
    pub fn new(coords: Vec<i64>) -> Self {
        LatticePoint(coords)
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<i64> {
        self.0
    }
}

impl From<Vec<i64>> for LatticePoint {
    fn from(coords: Vec<i64>) -> Self {
        LatticePoint(coords)
    }
}

/// Cache of `m^p` keyed by the integer magnitude.
///
/// Class values are sums of very few distinct magnitude powers and the
/// enumeration revisits the same magnitudes constantly; caching removes the
/// repeated `powf` calls without changing any bit of the result.
#[derive(Debug, Clone)]
pub struct MagnitudePowers {
    p: f64,
    pows: Vec<f64>,
}

/// Magnitudes above this are computed directly instead of growing the cache.
const MAG_CACHE_LIMIT: u64 = 1 << 22;

impl MagnitudePowers {
    pub fn new(p: f64) -> Self {
        MagnitudePowers {
            p,
            pows: vec![0.0, 1.0],
        }
    }

    #[inline]
    pub fn pow(&mut self, m: u64) -> f64 {
        if m >= MAG_CACHE_LIMIT {
            return (m as f64).powf(self.p);
        }
        let m = m as usize;
        while self.pows.len() <= m {
            let next = self.pows.len() as f64;
            self.pows.push(next.powf(self.p));
        }
        self.pows[m]
    }
}

/// Canonical class value: `sum count * magnitude^p` accumulated in
/// descending-magnitude run order. All subsystems must compute values
/// through this function so equal multisets give equal bits.
#[inline]
pub fn value_of_runs(runs: &[(u64, u32)], pows: &mut MagnitudePowers) -> f64 {
    let mut v = 0.0;
    for &(mag, count) in runs {
        v += count as f64 * pows.pow(mag);
    }
    v
}

/// Magnitude multiset of a point as descending (magnitude, count) runs.
pub fn runs_of_point(coords: &[i64]) -> Vec<(u64, u32)> {
    let mut mags: Vec<u64> = coords
        .iter()
        .filter(|&&c| c != 0)
        .map(|&c| c.unsigned_abs())
        .collect();
    mags.sort_unstable_by(|a, b| b.cmp(a));
    let mut runs: Vec<(u64, u32)> = Vec::new();
    for m in mags {
        match runs.last_mut() {
            Some((mag, count)) if *mag == m => *count += 1,
            _ => runs.push((m, 1)),
        }
    }
    runs
}

/// Truncated kernel value together with the bound on the excluded tail.
#[derive(Debug, Clone, Copy)]
pub struct KernelValue {
    pub value: f64,
    pub tail_bound: f64,
}

/// Evaluates `K(x, y)` by summing the eigenvalue series in decreasing
/// eigenvalue order until the certified bound on the excluded tail drops to
/// `trunc_tol`.
///
/// The imaginary parts cancel in `k`/`-k` pairs, so each equivalence class
/// contributes `lambda * sum over its points of cos(k . (x - y))`; the sign
/// sum collapses to `2^support * prod cos(m_j delta_j)` per arrangement of
/// the magnitudes over the coordinates.
pub fn kernel_value(
    params: &KernelParams,
    x: &[f64],
    y: &[f64],
    trunc_tol: f64,
    budget: &Budget,
) -> Result<KernelValue> {
    let d = params.d();
    if x.len() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: x.len(),
        });
    }
    if y.len() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: y.len(),
        });
    }
    if !(trunc_tol > 0.0 && trunc_tol < 1.0) {
        return Err(Error::InvalidParameter {
            name: "trunc_tol",
            value: trunc_tol,
            requirement: "must lie in (0, 1)",
        });
    }
    let delta: Vec<f64> = x.iter().zip(y).map(|(a, b)| a - b).collect();

    let mut stream = lattice::ClassStream::new(d, params.p());
    let mut tracker = crate::bounds::TailTracker::new(params);
    let mut acc = NeumaierSum::new();
    let mut classes: u64 = 0;
    let started = std::time::Instant::now();

    // Certify only at complete horizons: peek ahead and require the next
    // class to sit strictly above the current value.
    let mut pending = stream.next_class();
    let mut want_check = false;
    while let Some(class) = pending.take() {
        classes += 1;
        let lambda = params.eigenvalue_of_value(class.value());
        let mut class_sum = 0.0;
        lattice::for_each_arrangement(class.runs(), d, |mags| {
            let mut prod = 1.0;
            for (j, &m) in mags.iter().enumerate() {
                if m != 0 {
                    prod *= (m as f64 * delta[j]).cos();
                }
            }
            class_sum += prod;
        });
        let pair_factor = 2f64.powi(class.support() as i32);
        acc.add(lambda * pair_factor * class_sum);
        tracker.record(class.top_magnitude(), class.multiplicity_f64(d)?);

        pending = stream.next_class();
        let horizon_complete = match &pending {
            Some(next) => next.value() > class.value(),
            None => true,
        };
        want_check |= classes % 64 == 0 || classes <= 64;
        if horizon_complete && want_check {
            want_check = false;
            let tail = tracker.tail_upper(class.value());
            if tail <= trunc_tol {
                return Ok(KernelValue {
                    value: acc.value(),
                    tail_bound: tail,
                });
            }
        }
        if classes >= budget.max_classes {
            return Err(Error::BudgetExhausted {
                classes,
                context: format!("summing kernel series to tolerance {trunc_tol:e}"),
            });
        }
        if let Some(cap) = budget.time_cap {
            if classes % 1024 == 0 && started.elapsed() > cap {
                return Err(Error::BudgetExhausted {
                    classes,
                    context: "kernel series time cap".into(),
                });
            }
        }
    }
    Err(Error::BudgetExhausted {
        classes,
        context: "class stream ended unexpectedly".into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(alpha: f64, beta: f64, p: f64, d: usize) -> KernelParams {
        KernelParams::new(alpha, beta, p, d).unwrap()
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(KernelParams::new(0.0, 1.0, 1.0, 1).is_err());
        assert!(KernelParams::new(1.0, -1.0, 1.0, 1).is_err());
        assert!(KernelParams::new(1.0, 1.0, f64::NAN, 1).is_err());
        assert!(KernelParams::new(1.0, 1.0, 1.0, 0).is_err());
    }

    #[test]
    fn eigenvalue_at_origin_is_one() {
        let pr = params(1.0, 0.5, 1.0, 3);
        let k = LatticePoint::new(vec![0, 0, 0]);
        assert_eq!(pr.eigenvalue_at(&k).unwrap(), 1.0);
    }

    #[test]
    fn eigenvalue_unit_vector() {
        // |k|_2 = 1, lambda = exp(-2)
        let pr = params(2.0, 1.0, 2.0, 2);
        let k = LatticePoint::new(vec![1, 0]);
        let got = pr.eigenvalue_at(&k).unwrap();
        assert!((got - (-2.0f64).exp()).abs() < 1e-15);
        assert!((got - 0.1353352832).abs() < 1e-9);
    }

    #[test]
    fn eigenvalue_diagonal_point() {
        // |k|_2 = sqrt(2), lambda = exp(-sqrt(2))
        let pr = params(1.0, 0.5, 2.0, 2);
        let k = LatticePoint::new(vec![1, 1]);
        let got = pr.eigenvalue_at(&k).unwrap();
        assert!((got - (-2f64.sqrt()).exp()).abs() < 1e-15);
        assert!((got - 0.2431167344).abs() < 1e-9);
    }

    #[test]
    fn eigenvalue_dimension_mismatch() {
        let pr = params(1.0, 0.5, 1.0, 3);
        let k = LatticePoint::new(vec![1, 2]);
        assert!(matches!(
            pr.eigenvalue_at(&k),
            Err(Error::DimensionMismatch { expected: 3, got: 2 })
        ));
    }

    #[test]
    fn eigenvalue_invariant_under_symmetry() {
        let pr = params(1.3, 0.7, 1.6, 4);
        let a = pr
            .eigenvalue_at(&LatticePoint::new(vec![3, -1, 0, 2]))
            .unwrap();
        let b = pr
            .eigenvalue_at(&LatticePoint::new(vec![-2, 1, -3, 0]))
            .unwrap();
        assert_eq!(a.to_bits(), b.to_bits());
    }

    proptest::proptest! {
        /// Coordinate permutations and sign flips never change a bit of the
        /// eigenvalue, and the eigenvalue is monotone in the class value.
        #[test]
        fn eigenvalue_symmetry_and_monotonicity(
            coords in proptest::collection::vec(-9i64..=9, 1..6),
            alpha in 0.2f64..3.0,
            beta in 0.1f64..2.0,
            p in 0.2f64..3.0,
            flips in proptest::collection::vec(proptest::bool::ANY, 6),
        ) {
            let pr = params(alpha, beta, p, coords.len());
            let base = pr.eigenvalue_at(&LatticePoint::new(coords.clone())).unwrap();
            // mathematically in (0, 1]; f64 underflows the bottom to 0
            proptest::prop_assert!((0.0..=1.0).contains(&base));

            let mut mangled: Vec<i64> = coords
                .iter()
                .zip(&flips)
                .map(|(&c, &f)| if f { -c } else { c })
                .collect();
            mangled.reverse();
            let sym = pr.eigenvalue_at(&LatticePoint::new(mangled)).unwrap();
            proptest::prop_assert_eq!(base.to_bits(), sym.to_bits());

            // strictly more lattice mass means a strictly smaller eigenvalue
            // (up to f64 plateaus deep in the exponential range)
            let mut bigger = coords.clone();
            bigger[0] = bigger[0].abs() + 1;
            let smaller = pr.eigenvalue_at(&LatticePoint::new(bigger)).unwrap();
            proptest::prop_assert!(smaller <= base);
        }
    }

    #[test]
    fn eigenvalue_strictly_decreasing_in_value() {
        let pr = params(0.8, 0.4, 1.5, 2);
        let mut prev = pr.eigenvalue_of_value(0.0);
        for v in [0.5, 1.0, 2.0, 5.0, 30.0] {
            let cur = pr.eigenvalue_of_value(v);
            assert!(cur < prev);
            prev = cur;
        }
    }

    #[test]
    fn kernel_value_geometric_closed_form() {
        // d=1, alpha=p=1, beta=0.5, x-y=pi:
        // 1 + 2 sum e^{-h} cos(h pi) = (1 - e^{-1}) / (1 + e^{-1})
        let pr = params(1.0, 0.5, 1.0, 1);
        let got = kernel_value(
            &pr,
            &[std::f64::consts::PI],
            &[0.0],
            1e-12,
            &Budget::default(),
        )
        .unwrap();
        let e1 = (-1.0f64).exp();
        let expected = (1.0 - e1) / (1.0 + e1);
        assert!((got.value - expected).abs() < 1e-11, "got {got:?}");
        assert!((expected - 0.4621171573).abs() < 1e-9);
    }

    #[test]
    fn kernel_value_at_equal_arguments_is_near_trace() {
        let pr = params(2.0, 1.0, 2.0, 2);
        let x = [1.0, 2.5];
        let tol = 1e-10;
        let got = kernel_value(&pr, &x, &x, tol, &Budget::default()).unwrap();
        // K(x,x) = trace; independent 1-d product for alpha = p.
        let a = 1.0
            + 2.0 * (1..100).map(|h| (-2.0 * ((h * h) as f64)).exp()).sum::<f64>();
        let trace = a * a;
        assert!(got.value <= trace + 1e-12);
        assert!(got.value >= trace - tol - 1e-12);
    }

    #[test]
    fn kernel_value_symmetric_and_periodic() {
        let pr = params(1.0, 1.0, 2.0, 2);
        let x = [0.3, 4.2];
        let y = [2.2, 1.1];
        let b = Budget::default();
        let k_xy = kernel_value(&pr, &x, &y, 1e-10, &b).unwrap().value;
        let k_yx = kernel_value(&pr, &y, &x, 1e-10, &b).unwrap().value;
        assert!((k_xy - k_yx).abs() < 1e-12);
        let shifted = [x[0] + 2.0 * std::f64::consts::PI, x[1]];
        let k_shift = kernel_value(&pr, &shifted, &y, 1e-10, &b).unwrap().value;
        assert!((k_xy - k_shift).abs() < 1e-9);
    }
}
