//! Random Fourier paths from the zero-mean Gaussian measure and Monte Carlo
//! validation of the average-case error formula.
//!
//! A draw is represented by its Fourier coefficients on a finite mode set
//! chosen so the excluded eigenvalue mass is a declared fraction of the
//! trace. Coefficients obey `a_{-k} = conj(a_k)` exactly, with
//! `E |a_k|^2 = lambda(k)`, so Parseval gives all L2 norms in coefficient
//! space (with respect to the normalized measure on the torus) without any
//! quadrature.
//!
//! Randomness is counter-based: every Gaussian pair is generated from a
//! stream keyed by `(seed, trial, mode index)`, so trials are reproducible
//! independently of evaluation order and can be distributed freely.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::accum::NeumaierSum;
use crate::error::Error;
use crate::kernel::{KernelParams, LatticePoint};
use crate::lattice;
use crate::spectrum::{self, Enclosure, Spectrum};
use crate::{Budget, Result};

/// One Fourier mode of a sample path.
#[derive(Debug, Clone)]
pub struct PathMode {
    pub point: LatticePoint,
    pub eigenvalue: f64,
    pub coeff: Complex64,
}

/// A truncated draw from the Gaussian measure: modes in the spectrum's
/// deterministic order, closed under negation, plus the bound on the
/// eigenvalue mass outside the mode set.
#[derive(Debug, Clone)]
pub struct SamplePath {
    params: KernelParams,
    modes: Vec<PathMode>,
    excluded_tail: f64,
}

/// splitmix64 step, used to fold (seed, trial, mode) into one stream key.
fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e3779b97f4a7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

fn stream_key(seed: u64, trial: u64, mode: u64) -> u64 {
    mix64(mix64(mix64(seed) ^ trial) ^ mode.wrapping_mul(0x9e3779b97f4a7c15))
}

fn gaussian_pair(seed: u64, trial: u64, mode: u64) -> (f64, f64) {
    let mut rng = ChaCha8Rng::seed_from_u64(stream_key(seed, trial, mode));
    let x: f64 = StandardNormal.sample(&mut rng);
    let y: f64 = StandardNormal.sample(&mut rng);
    (x, y)
}

/// The deterministic mode layout shared by paths and the Monte Carlo
/// estimator: per конjugate pair, the representative's positions.
struct ModeLayout {
    /// (eigenvalue, index of k, index of -k); for the origin both indices
    /// coincide.
    pairs: Vec<(f64, usize, usize)>,
    points: Vec<LatticePoint>,
    excluded_tail: f64,
}

fn mode_layout(params: &KernelParams, tail_frac: f64, budget: &Budget) -> Result<ModeLayout> {
    if !(tail_frac > 0.0 && tail_frac < 1.0) {
        return Err(Error::InvalidParameter {
            name: "tail_frac",
            value: tail_frac,
            requirement: "must lie in (0, 1)",
        });
    }
    let spec = spectrum::build_spectrum(params, 1, tail_frac, budget)?;
    if !spec.goals_met() {
        return Err(Error::BudgetExhausted {
            classes: budget.max_classes,
            context: format!("choosing a mode cutoff with tail fraction {tail_frac:e}"),
        });
    }
    let d = params.d();
    let classes = lattice::enumerate_classes(
        d,
        params.p(),
        spec.value_horizon(),
        None,
        budget,
    )?;
    if !classes.complete {
        return Err(Error::BudgetExhausted {
            classes: classes.classes.len() as u64,
            context: "expanding the sample-path mode set".into(),
        });
    }
    let mut points: Vec<LatticePoint> = Vec::new();
    let mut pairs: Vec<(f64, usize, usize)> = Vec::new();
    for class in &classes.classes {
        let lambda = params.eigenvalue_of_value(class.value());
        let base = points.len();
        let expanded = lattice::expand_class(class, d);
        // locate each point's negation inside the class
        let index: std::collections::HashMap<&[i64], usize> = expanded
            .iter()
            .enumerate()
            .map(|(i, pt)| (pt.coords(), i))
            .collect();
        for (i, pt) in expanded.iter().enumerate() {
            if class.is_origin() {
                pairs.push((lambda, base, base));
                continue;
            }
            // representative: first nonzero coordinate positive
            let first = pt.coords().iter().find(|&&c| c != 0).copied().unwrap_or(0);
            if first > 0 {
                let neg: Vec<i64> = pt.coords().iter().map(|&c| -c).collect();
                let j = index[neg.as_slice()];
                pairs.push((lambda, base + i, base + j));
            }
        }
        points.extend(expanded);
        if points.len() as u64 > budget.max_classes.saturating_mul(8) {
            return Err(Error::CapExceeded(format!(
                "mode set grew past {} points",
                points.len()
            )));
        }
    }
    Ok(ModeLayout {
        pairs,
        points,
        excluded_tail: spec.tail_upper(),
    })
}

/// Draws one sample path. The mode set covers every eigenvalue above a
/// cutoff chosen so the excluded mass is at most `tail_frac` of the trace;
/// identical seeds give identical coefficients.
pub fn sample_path(
    params: &KernelParams,
    tail_frac: f64,
    seed: u64,
    budget: &Budget,
) -> Result<SamplePath> {
    let layout = mode_layout(params, tail_frac, budget)?;
    let mut modes: Vec<PathMode> = layout
        .points
        .iter()
        .map(|pt| PathMode {
            point: pt.clone(),
            eigenvalue: 0.0,
            coeff: Complex64::new(0.0, 0.0),
        })
        .collect();
    for (pair_idx, &(lambda, i, j)) in layout.pairs.iter().enumerate() {
        let (x, y) = gaussian_pair(seed, 0, pair_idx as u64);
        let sd = lambda.sqrt();
        if i == j {
            // origin: real coefficient with variance lambda
            modes[i].eigenvalue = lambda;
            modes[i].coeff = Complex64::new(sd * x, 0.0);
        } else {
            let a = Complex64::new(sd * x, sd * y) / 2f64.sqrt();
            modes[i].eigenvalue = lambda;
            modes[i].coeff = a;
            modes[j].eigenvalue = lambda;
            modes[j].coeff = a.conj();
        }
    }
    Ok(SamplePath {
        params: *params,
        modes,
        excluded_tail: layout.excluded_tail,
    })
}

impl SamplePath {
    pub fn params(&self) -> &KernelParams {
        &self.params
    }

    /// Modes in the spectrum's deterministic order (position `i` holds the
    /// `(i+1)`-th eigenvalue).
    pub fn modes(&self) -> &[PathMode] {
        &self.modes
    }

    /// Upper bound on the eigenvalue mass outside the mode set.
    pub fn excluded_tail(&self) -> f64 {
        self.excluded_tail
    }

    /// Squared L2 norm by Parseval: `sum |a_k|^2`.
    pub fn squared_norm(&self) -> f64 {
        NeumaierSum::sum_iter(self.modes.iter().map(|m| m.coeff.norm_sqr()))
    }

    /// Squared norm of the coefficients at positions beyond `n`.
    pub fn residual_sq_norm(&self, n: u128) -> f64 {
        let skip = usize::try_from(n).unwrap_or(usize::MAX).min(self.modes.len());
        NeumaierSum::sum_iter(self.modes[skip..].iter().map(|m| m.coeff.norm_sqr()))
    }

    /// Truncation to the optimal rank-n approximation: keeps the `n`
    /// largest-eigenvalue modes (ties resolved by the deterministic order)
    /// and zeroes the rest.
    pub fn truncate_to(&self, spec: &Spectrum, n: u128) -> Result<SamplePath> {
        if n > spec.enumerated_count() || n > self.modes.len() as u128 {
            return Err(Error::PositionBeyondEnumeration {
                position: n,
                enumerated: spec.enumerated_count().min(self.modes.len() as u128),
            });
        }
        let keep = n as usize;
        let mut modes = self.modes.clone();
        for m in modes.iter_mut().skip(keep) {
            m.coeff = Complex64::new(0.0, 0.0);
        }
        Ok(SamplePath {
            params: self.params,
            modes,
            excluded_tail: self.excluded_tail,
        })
    }

    /// Evaluates the path at a point of the torus: `sum a_k exp(i k . x)`.
    /// The imaginary parts cancel pairwise; the residue is checked against
    /// `1e-10 * sum |a_k|` and the real part returned.
    pub fn evaluate(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.params.d() {
            return Err(Error::DimensionMismatch {
                expected: self.params.d(),
                got: x.len(),
            });
        }
        let mut re = NeumaierSum::new();
        let mut im = NeumaierSum::new();
        let mut scale = NeumaierSum::new();
        for mode in &self.modes {
            let phase: f64 = mode
                .point
                .coords()
                .iter()
                .zip(x)
                .map(|(&k, &xi)| k as f64 * xi)
                .sum();
            let e = Complex64::new(phase.cos(), phase.sin());
            let term = mode.coeff * e;
            re.add(term.re);
            im.add(term.im);
            scale.add(mode.coeff.norm());
        }
        if im.value().abs() >= 1e-10 * scale.value().max(f64::MIN_POSITIVE) {
            return Err(Error::NonRealEvaluation);
        }
        Ok(re.value())
    }
}

/// Monte Carlo estimate of the mean squared optimal-truncation error.
#[derive(Debug, Clone, Copy)]
pub struct McErrorEstimate {
    pub n: u128,
    pub trials: u64,
    pub mean_sq_error: f64,
    pub std_error: f64,
    /// enclosure of the exact tail sum the estimate is validating
    pub formula_value: Enclosure,
    /// downward bias bound from sampler truncation
    pub truncation_bias: f64,
}

/// Estimates `E || f - A_n f ||^2` over independent draws and reports it
/// next to the exact tail-sum enclosure. Residual norms are computed in
/// coefficient space; no paths are materialized.
pub fn mc_avg_error(
    params: &KernelParams,
    n: u128,
    trials: u64,
    seed: u64,
    tail_frac: f64,
    budget: &Budget,
) -> Result<McErrorEstimate> {
    if trials < 100 {
        return Err(Error::InvalidParameter {
            name: "trials",
            value: trials as f64,
            requirement: "need at least 100 trials",
        });
    }
    let layout = mode_layout(params, tail_frac, budget)?;
    if n > layout.points.len() as u128 {
        return Err(Error::PositionBeyondEnumeration {
            position: n,
            enumerated: layout.points.len() as u128,
        });
    }
    let spec = spectrum::build_spectrum(params, n.max(1), tail_frac, budget)?;
    let formula_value = spec.tail_sum(n)?;

    let keep = n as usize;
    let mut sum = NeumaierSum::new();
    let mut sum_sq = NeumaierSum::new();
    for trial in 0..trials {
        let mut residual = NeumaierSum::new();
        for (pair_idx, &(lambda, i, j)) in layout.pairs.iter().enumerate() {
            let dropped = (i >= keep) as u32 + if i == j { 0 } else { (j >= keep) as u32 };
            if dropped == 0 {
                continue;
            }
            let (x, y) = gaussian_pair(seed, trial + 1, pair_idx as u64);
            let sq = if i == j {
                lambda * x * x
            } else {
                lambda * (x * x + y * y) / 2.0
            };
            residual.add(dropped as f64 * sq);
        }
        let r = residual.value();
        sum.add(r);
        sum_sq.add(r * r);
    }
    let t = trials as f64;
    let mean = sum.value() / t;
    let var = ((sum_sq.value() - sum.value() * sum.value() / t) / (t - 1.0)).max(0.0);
    Ok(McErrorEstimate {
        n,
        trials,
        mean_sq_error: mean,
        std_error: (var / t).sqrt(),
        formula_value,
        truncation_bias: layout.excluded_tail,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(alpha: f64, beta: f64, p: f64, d: usize) -> KernelParams {
        KernelParams::new(alpha, beta, p, d).unwrap()
    }

    #[test]
    fn equal_seeds_give_identical_paths() {
        let pr = params(2.0, 1.0, 2.0, 2);
        let b = Budget::default();
        let a = sample_path(&pr, 1e-6, 42, &b).unwrap();
        let c = sample_path(&pr, 1e-6, 42, &b).unwrap();
        assert_eq!(a.modes().len(), c.modes().len());
        for (ma, mc) in a.modes().iter().zip(c.modes()) {
            assert_eq!(ma.coeff, mc.coeff);
        }
        let other = sample_path(&pr, 1e-6, 43, &b).unwrap();
        assert!(a.modes()[1].coeff != other.modes()[1].coeff);
    }

    #[test]
    fn conjugate_symmetry_is_exact() {
        let pr = params(1.0, 0.5, 1.0, 2);
        let path = sample_path(&pr, 1e-5, 7, &Budget::default()).unwrap();
        let by_coords: std::collections::HashMap<&[i64], Complex64> = path
            .modes()
            .iter()
            .map(|m| (m.point.coords(), m.coeff))
            .collect();
        for m in path.modes() {
            let neg: Vec<i64> = m.point.coords().iter().map(|&c| -c).collect();
            let conj = by_coords[neg.as_slice()];
            assert_eq!(m.coeff, conj.conj());
        }
    }

    #[test]
    fn coefficient_variance_concentrates_to_eigenvalue() {
        // mean of |a_k|^2 over many draws matches lambda within 5 SE
        let pr = params(2.0, 1.0, 2.0, 2);
        let layout = mode_layout(&pr, 1e-6, &Budget::default()).unwrap();
        let trials = 4000u64;
        // pick the first non-origin pair
        let (lambda, i, j) = layout.pairs[1];
        assert!(i != j);
        let mut acc = 0.0;
        for trial in 0..trials {
            let (x, y) = gaussian_pair(11, trial + 1, 1);
            acc += lambda * (x * x + y * y) / 2.0;
        }
        let mean = acc / trials as f64;
        // |a|^2 is lambda * chi^2_2 / 2: variance lambda^2
        let se = lambda / (trials as f64).sqrt();
        assert!(
            (mean - lambda).abs() < 5.0 * se,
            "mean {mean} vs lambda {lambda} (se {se})"
        );
    }

    #[test]
    fn parseval_norm_matches_trace_on_average() {
        let pr = params(2.0, 1.0, 2.0, 1);
        let b = Budget::default();
        let trials = 3000;
        let mut acc = 0.0;
        for s in 0..trials {
            acc += sample_path(&pr, 1e-7, 1000 + s, &b).unwrap().squared_norm();
        }
        let mean = acc / trials as f64;
        let tr = spectrum::trace(&pr, 1e-9, &b).unwrap().midpoint();
        // var of ||f||^2 = 2 sum lambda^2 <= 2 tr^2; allow 4 sigma
        let sigma = (2.0f64).sqrt() * tr / (trials as f64).sqrt();
        assert!(
            (mean - tr).abs() < 4.0 * sigma + 1e-7 * tr,
            "mean {mean} trace {tr}"
        );
    }

    #[test]
    fn constant_path_evaluates_to_constant() {
        let pr = params(1.0, 0.5, 1.0, 2);
        let mut path = sample_path(&pr, 1e-4, 3, &Budget::default()).unwrap();
        for m in path.modes.iter_mut() {
            m.coeff = Complex64::new(0.0, 0.0);
        }
        path.modes[0].coeff = Complex64::new(2.5, 0.0);
        assert!((path.evaluate(&[0.4, 5.0]).unwrap() - 2.5).abs() < 1e-12);
    }

    #[test]
    fn single_pair_match_cosine_form() {
        let pr = params(1.0, 0.5, 1.0, 1);
        let mut path = sample_path(&pr, 1e-4, 3, &Budget::default()).unwrap();
        // keep only the +-1 pair
        let a = Complex64::new(0.7, -0.3);
        for m in path.modes.iter_mut() {
            let c = m.point.coords()[0];
            m.coeff = match c {
                1 => a,
                -1 => a.conj(),
                _ => Complex64::new(0.0, 0.0),
            };
        }
        for x in [0.0f64, 0.7, 2.1, 5.9] {
            let direct = 2.0 * (a * Complex64::new(x.cos(), x.sin())).re;
            assert!((path.evaluate(&[x]).unwrap() - direct).abs() < 1e-12);
        }
    }

    #[test]
    fn evaluation_is_periodic() {
        let pr = params(1.0, 1.0, 2.0, 2);
        let path = sample_path(&pr, 1e-5, 5, &Budget::default()).unwrap();
        let x = [1.2, 0.4];
        let shifted = [1.2 + 2.0 * std::f64::consts::PI, 0.4];
        let a = path.evaluate(&x).unwrap();
        let b = path.evaluate(&shifted).unwrap();
        assert!((a - b).abs() < 1e-8 * (1.0 + a.abs()));
    }

    #[test]
    fn truncation_residual_is_monotone_and_parseval_consistent() {
        let pr = params(2.0, 1.0, 2.0, 2);
        let b = Budget::default();
        let spec = spectrum::build_spectrum(&pr, 30, 1e-8, &b).unwrap();
        let path = sample_path(&pr, 1e-8, 9, &b).unwrap();
        let full = path.squared_norm();
        let mut prev = f64::INFINITY;
        for n in [0u128, 1, 3, 9, 21] {
            let trunc = path.truncate_to(&spec, n).unwrap();
            let kept = trunc.squared_norm();
            let residual = path.residual_sq_norm(n);
            assert!((kept + residual - full).abs() < 1e-12 * full.max(1.0));
            assert!(residual <= prev);
            prev = residual;
        }
        // n = 0 is the zero path
        let zero = path.truncate_to(&spec, 0).unwrap();
        assert_eq!(zero.squared_norm(), 0.0);
    }

    #[test]
    fn sample_covariance_converges_to_kernel() {
        // E f(x) f(y) = K(x, y) up to the sampler's excluded tail; check a
        // few fixed point pairs within 4 standard errors.
        let pr = params(2.0, 1.0, 2.0, 2);
        let b = Budget::default();
        let pairs = [
            ([0.4, 1.9], [2.6, 0.3]),
            ([1.0, 1.0], [1.0, 1.0]),
            ([5.5, 0.2], [0.9, 4.4]),
        ];
        let trials = 3000u64;
        for (x, y) in pairs {
            let exact = crate::kernel::kernel_value(&pr, &x, &y, 1e-10, &b)
                .unwrap()
                .value;
            let mut acc = 0.0;
            let mut acc_sq = 0.0;
            for s in 0..trials {
                let path = sample_path(&pr, 1e-8, 90_000 + s, &b).unwrap();
                let prod = path.evaluate(&x).unwrap() * path.evaluate(&y).unwrap();
                acc += prod;
                acc_sq += prod * prod;
            }
            let t = trials as f64;
            let mean = acc / t;
            let se = (((acc_sq - acc * acc / t) / (t - 1.0)).max(0.0) / t).sqrt();
            assert!(
                (mean - exact).abs() <= 4.0 * se + 1e-6,
                "cov at {x:?},{y:?}: {mean} vs {exact} (se {se})"
            );
        }
    }

    #[test]
    fn mc_error_matches_geometric_tail() {
        // d=1, alpha=p=1, beta=0.5, n=1: tail = 2/(e-1)
        let pr = params(1.0, 0.5, 1.0, 1);
        let est = mc_avg_error(&pr, 1, 10_000, 2024, 1e-6, &Budget::default()).unwrap();
        let exact = 2.0 / (std::f64::consts::E - 1.0);
        assert!(est.formula_value.contains(exact));
        let slack = 3.0 * est.std_error + est.truncation_bias;
        assert!(
            (est.mean_sq_error - exact).abs() <= slack,
            "mse {} vs {exact} (slack {slack})",
            est.mean_sq_error
        );
    }

    #[test]
    fn mc_error_tiny_tail_gives_tiny_estimate() {
        let pr = params(2.0, 1.0, 2.0, 1);
        // truncation keeps the whole mode set: tail far below 1e-8
        let est = mc_avg_error(&pr, 7, 200, 7, 1e-9, &Budget::default()).unwrap();
        assert!(est.formula_value.upper < 1e-8);
        assert!(est.mean_sq_error < 1e-6);
    }

    #[test]
    fn mc_rejects_too_few_trials() {
        let pr = params(1.0, 0.5, 1.0, 1);
        assert!(mc_avg_error(&pr, 1, 10, 1, 1e-6, &Budget::default()).is_err());
    }
}
