//! Monte Carlo check of the average-case error formula.
//!
//! The mean squared error of the optimal rank-n algorithm equals the
//! eigenvalue tail sum beyond position n. Empirical means over independent
//! draws should land within a few standard errors of the exact enclosure
//! (up to the declared sampler truncation bias).

use gevrey::{sampler, Budget, KernelParams};

fn main() -> Result<(), gevrey::Error> {
    let params = KernelParams::new(2.0, 1.0, 2.0, 2)?;
    let budget = Budget::default();
    println!(
        "{:>4} {:>13} {:>11} {:>13} {:>13} {:>8}",
        "n", "mse", "stderr", "formula_lo", "formula_hi", "sigmas"
    );
    for n in [0u128, 1, 5, 20] {
        let est = sampler::mc_avg_error(&params, n, 10_000, 7, 1e-10, &budget)?;
        let sigmas = (est.mean_sq_error - est.formula_value.midpoint()).abs()
            / est.std_error.max(f64::MIN_POSITIVE);
        println!(
            "{n:>4} {:>13.6e} {:>11.3e} {:>13.6e} {:>13.6e} {sigmas:>8.2}",
            est.mean_sq_error, est.std_error, est.formula_value.lower, est.formula_value.upper
        );
    }
    Ok(())
}
